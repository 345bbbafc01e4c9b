"""Registry of cited homotopy-group facts.

Every homotopy group or invariant used by downstream modules is read from a
line-oriented data file, so each value carries its literature source and can
be audited, replaced or deleted (for fault injection) without touching code.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .fgab import FgAbGroup

ENV_VAR = "FIBLAB_REGISTRY"
SUPPORTED_VERSIONS = {1}


class UnknownKey(KeyError):
    """No registry record matches the key and parameters."""


class RegistryError(ValueError):
    """A malformed registry file; the message names the offending record."""


# -------------------------------------------------------------- param clauses

_CLAUSE_PATTERNS = [
    (re.compile(r"^(\w+)\s*=\s*(-?\d+)$"), lambda v, a: v == int(a[1])),
    (re.compile(r"^(\w+)\s*>=\s*(-?\d+)$"), lambda v, a: v >= int(a[1])),
    (re.compile(r"^(\w+)\s+in\s+\{([\d,\s-]+)\}$"),
     lambda v, a: v in {int(x) for x in a[1].split(",")}),
    (re.compile(r"^(\w+)\s+notin\s+\{([\d,\s-]+)\}$"),
     lambda v, a: v not in {int(x) for x in a[1].split(",")}),
    (re.compile(r"^(\w+)\s+even$"), lambda v, a: v % 2 == 0),
    (re.compile(r"^(\w+)\s+odd$"), lambda v, a: v % 2 == 1),
]


@dataclass(frozen=True)
class Clause:
    text: str
    name: str

    def holds(self, params: Mapping[str, int]) -> bool:
        if self.name not in params:
            return False
        for pattern, test in _CLAUSE_PATTERNS:
            m = pattern.match(self.text)
            if m:
                return test(int(params[self.name]), m.groups())
        raise RegistryError(f"unparseable clause {self.text!r}")


def _parse_params(text: str) -> tuple[Clause, ...]:
    text = text.strip()
    if text in ("", "-"):
        return ()
    clauses = []
    for raw in text.split(";"):
        raw = raw.strip()
        for pattern, _ in _CLAUSE_PATTERNS:
            m = pattern.match(raw)
            if m:
                clauses.append(Clause(raw, m.group(1)))
                break
        else:
            raise RegistryError(f"unparseable clause {raw!r}")
    return tuple(clauses)


# ----------------------------------------------------------------- records

@dataclass(frozen=True)
class RawRecord:
    """A registry line before parameter instantiation."""

    key: str
    clauses: tuple[Clause, ...]
    free_rank: str
    torsion: str
    labels: tuple[str, ...]
    source: str
    line: int

    def matches(self, params: Mapping[str, int]) -> bool:
        return all(c.holds(params) for c in self.clauses)

    @property
    def kind(self) -> str:
        if self.free_rank == "scalar":
            return "scalar"
        if self.free_rank == "fact":
            return "fact"
        return "group"


@dataclass(frozen=True)
class GroupCitation:
    """One cited datum, instantiated at specific parameters.

    For group records ``group`` holds the canonical group; parts the source
    does not pin down are flagged by ``free_rank_known`` / ``torsion_known``
    and the known part is stored. ``torsion_odd_only`` records sources that
    only guarantee the absence of 2-torsion. Scalar records keep their value
    in ``scalar`` (with ``sign_ambiguous`` for a ± prefix); facts keep a bool.
    """

    key: str
    params: dict = field(hash=False)
    group: FgAbGroup | None
    generator_labels: tuple[str, ...]
    source: str
    kind: str = "group"
    free_rank_known: bool = True
    torsion_known: bool = True
    torsion_odd_only: bool = False
    scalar: int | None = None
    sign_ambiguous: bool = False
    fact: bool | None = None

    def __post_init__(self):
        if not self.source.strip():
            raise RegistryError(f"{self.key}: empty source")

    @property
    def fully_known(self) -> bool:
        return self.free_rank_known and self.torsion_known

    def require_group(self) -> FgAbGroup:
        if self.kind != "group" or self.group is None:
            raise RegistryError(f"{self.key} is not a group record")
        if not self.fully_known:
            raise RegistryError(f"{self.key} is only partially known")
        return self.group

    def describe(self) -> str:
        params = ", ".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        head = f"{self.key} [{params}]" if params else self.key
        return f"{head}: {self.source}"


@dataclass(frozen=True)
class TorsionInput:
    """Caller-supplied torsion of π_{4k-2}(S^{2k-1}); never shipped as fact."""

    k: int
    group: FgAbGroup
    source: str

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if not self.group.is_finite():
            raise ValueError("torsion input must be a finite group")
        if not self.source.strip():
            raise ValueError("torsion input needs a source")


def _eval_term(term: str, params: Mapping[str, int], where: str) -> int:
    term = term.strip()
    m = re.fullmatch(r"(\d+)?\s*\*?\s*([a-z])?", term)
    if not term or not m or (m.group(1) is None and m.group(2) is None):
        raise RegistryError(f"{where}: bad torsion term {term!r}")
    coeff = int(m.group(1)) if m.group(1) else 1
    if m.group(2):
        if m.group(2) not in params:
            raise RegistryError(f"{where}: torsion uses unset parameter {m.group(2)!r}")
        coeff *= int(params[m.group(2)])
    return coeff


def _instantiate(rec: RawRecord, params: Mapping[str, int]) -> GroupCitation:
    where = f"line {rec.line} ({rec.key})"
    base = dict(key=rec.key, params=dict(params), generator_labels=rec.labels,
                source=rec.source, kind=rec.kind)
    if rec.kind == "scalar":
        m = re.fullmatch(r"(±)?(-?\d+)", rec.torsion.strip())
        if not m:
            raise RegistryError(f"{where}: bad scalar value {rec.torsion!r}")
        return GroupCitation(group=None, scalar=int(m.group(2)),
                             sign_ambiguous=bool(m.group(1)), **base)
    if rec.kind == "fact":
        value = rec.torsion.strip().lower()
        if value not in ("true", "false"):
            raise RegistryError(f"{where}: fact must be true or false")
        return GroupCitation(group=None, fact=value == "true", **base)

    free_known = rec.free_rank.strip() != "?"
    if free_known:
        try:
            free = int(rec.free_rank)
        except ValueError:
            raise RegistryError(f"{where}: bad free rank {rec.free_rank!r}") from None
        if free < 0:
            raise RegistryError(f"{where}: negative free rank")
    else:
        free = 0
    tors_text = rec.torsion.strip()
    tors_known, odd_only, orders = True, False, []
    if tors_text in ("?", "?odd"):
        tors_known, odd_only = False, tors_text == "?odd"
    elif tors_text != "-":
        orders = [_eval_term(t, params, where) for t in tors_text.split(",")]
        if any(o < 1 for o in orders):
            raise RegistryError(f"{where}: torsion orders must be positive")
    group = FgAbGroup.from_cyclic_orders(orders).direct_sum(FgAbGroup.free(free))
    return GroupCitation(group=group, free_rank_known=free_known, torsion_known=tors_known,
                         torsion_odd_only=odd_only, **base)


# ----------------------------------------------------------------- registry

@dataclass(frozen=True)
class Registry:
    records: tuple[RawRecord, ...]
    version: int
    origin: str = "<memory>"
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    @classmethod
    def parse(cls, text: str, origin: str = "<memory>") -> "Registry":
        version, records = None, []
        for lineno, line in enumerate(text.splitlines(), 1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            if stripped.startswith("@version"):
                try:
                    version = int(stripped.split()[1])
                except (IndexError, ValueError):
                    raise RegistryError(f"{origin}:{lineno}: bad version header") from None
                continue
            cols = [c.strip() for c in stripped.split("|")]
            if len(cols) != 6:
                raise RegistryError(
                    f"{origin}:{lineno}: expected 6 '|'-separated fields, got {len(cols)} "
                    f"in record {cols[0]!r}")
            key, params, free, tors, labels, source = cols
            if not key:
                raise RegistryError(f"{origin}:{lineno}: empty key")
            if not source:
                raise RegistryError(f"{origin}:{lineno}: record {key!r} has no source")
            try:
                clauses = _parse_params(params)
            except RegistryError as exc:
                raise RegistryError(f"{origin}:{lineno}: record {key!r}: {exc}") from None
            label_t = () if labels in ("", "-") else tuple(x.strip() for x in labels.split(";"))
            records.append(RawRecord(key, clauses, free, tors, label_t, source, lineno))
        if version not in SUPPORTED_VERSIONS:
            raise RegistryError(f"{origin}: unsupported or missing registry version {version}")
        reg = cls(tuple(records), version, origin)
        reg.validate()
        return reg

    @classmethod
    def load(cls, path: str | os.PathLike | None = None) -> "Registry":
        if path is None:
            text = resources.files("fiblab").joinpath("data/registry.txt").read_text("utf-8")
            return cls.parse(text, "bundled registry")
        path = Path(path)
        return cls.parse(path.read_text("utf-8"), str(path))

    def validate(self) -> None:
        """Instantiate every group record at probe parameters to surface bad data early."""
        probes = [dict(k=k, n=n) for k in (2, 3, 4, 5, 6) for n in (2, 3, 4, 5)]
        for rec in self.records:
            for p in probes + [{}]:
                if rec.clauses and not rec.matches(p):
                    continue
                try:
                    _instantiate(rec, p)
                except (ValueError, KeyError) as exc:
                    raise RegistryError(
                        f"{self.origin}: record {rec.key!r} (line {rec.line}) is invalid: {exc}"
                    ) from None

    def keys(self) -> list[str]:
        return sorted({r.key for r in self.records})

    def without(self, *keys: str) -> "Registry":
        """A copy with every record under the given keys removed."""
        return replace(self, records=tuple(r for r in self.records if r.key not in keys))

    def lookup(self, key: str, params: Mapping[str, int] | None = None) -> GroupCitation:
        params = dict(params or {})
        memo_key = (key, tuple(sorted(params.items())))
        hit = self._memo.get(memo_key)
        if hit is None:
            hit = self._memo[memo_key] = self._lookup(key, params)
        return hit

    def _lookup(self, key: str, params: dict) -> GroupCitation:
        candidates = [r for r in self.records if r.key == key]
        if not candidates:
            raise UnknownKey(key)
        hits = [r for r in candidates if r.matches(params)]
        if not hits:
            raise UnknownKey(f"{key} has no record for parameters {params}")
        if len(hits) > 1:
            lines = ", ".join(str(r.line) for r in hits)
            raise RegistryError(f"{key}: ambiguous records at lines {lines} for {params}")
        return _instantiate(hits[0], params)

    def __contains__(self, key: str) -> bool:
        return any(r.key == key for r in self.records)


def resolve_registry_path(cli_path: str | None = None) -> str | None:
    """--registry flag, then $FIBLAB_REGISTRY, then the bundled file (None)."""
    if cli_path:
        return cli_path
    return os.environ.get(ENV_VAR) or None


_ACTIVE: Registry | None = None


def default_registry() -> Registry:
    """The registry used when none is passed; loaded once on first use."""
    global _ACTIVE
    if _ACTIVE is None:
        _ACTIVE = Registry.load(resolve_registry_path())
    return _ACTIVE


def set_default_registry(registry: Registry | None) -> None:
    """Swap the process-wide registry (None reloads from the resolved path)."""
    global _ACTIVE
    _ACTIVE = registry
    _stride_cached.cache_clear()


def _reg(registry: Registry | None) -> Registry:
    return default_registry() if registry is None else registry


def lookup(key: str, params: Mapping[str, int] | None = None,
           registry: Registry | None = None) -> GroupCitation:
    return _reg(registry).lookup(key, params)


# ------------------------------------------------------- derived conveniences

def i_star_K(k: int, n: int, registry: Registry | None = None) -> GroupCitation:
    """Image of K_k^n in the relative homotopy group, with its generator label."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if n < 2:
        raise ValueError("n must be >= 2")
    return lookup("i_*(K)", {"k": k, "n": n}, registry)


def hopf_image_stride(k: int, registry: Registry | None = None) -> int:
    """Index of the Hopf-invariant image on π_{4k-1}(S^{2k}) in Z."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if registry is None:
        return _stride_cached(k)
    return abs(lookup("H(α_0)", {"k": k}, registry).scalar)


@lru_cache(maxsize=None)
def _stride_cached(k: int) -> int:
    return abs(lookup("H(α_0)", {"k": k}).scalar)


def n2(k: int, n: int, registry: Registry | None = None) -> int:
    """Modulus of the a-coordinate: n times the Hopf image stride."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return n * hopf_image_stride(k, registry)


def citations(keys: Iterable[tuple[str, Mapping[str, int]]],
              registry: Registry | None = None) -> list[str]:
    return [lookup(k, p, registry).describe() for k, p in keys]
