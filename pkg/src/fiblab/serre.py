"""Two-column Serre spectral sequences and Hopf-invariant bookkeeping.

Pages store one FgAbGroup per bidegree together with the generator of each
entry written in E_2 coordinates, so differentials are explicit integer
matrices and every page turn is a kernel-mod-image computation in fgab.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from . import homotopy_data as hd
from .fgab import (FgAbGroup, Hom, IntMatrix, kernel_generators, lattice_coordinates,
                   presentation_with_generators)
from .modring import Residue, is_pm_unit_square

Z = FgAbGroup.free(1)


class PageIndexError(ValueError):
    """A differential was applied to the wrong page."""


class NotDivisible(ValueError):
    """H0 is not a multiple of n, so it cannot come from an extension of the pinch map."""


class ExtensionProblem(ValueError):
    """Several nonzero E_∞ entries in one total degree with torsion present."""


class Kind(str, enum.Enum):
    LOOP_FIBER_OVER_X = "LoopFiberOverX"
    LOOP_FIBER_OVER_TOP_SPHERE = "LoopFiberOverTopSphere"
    FIBER_OVER_BASE_SPHERE = "FiberOverBaseSphere"


@dataclass(frozen=True)
class FibrationModel:
    """One of the three fibration shapes.

    ``hopf`` is λ for LoopFiberOverX and H(f) for LoopFiberOverTopSphere.
    FiberOverBaseSphere takes the fiber's cohomology and the d_{2k} matrices
    (keyed by source row q) from the caller.
    """

    kind: Kind
    k: int
    n: int | None = None
    hopf: int | None = None
    fiber_cohomology: tuple[tuple[int, FgAbGroup], ...] = ()
    fiber_labels: tuple[tuple[int, str], ...] = ()
    d2k: tuple[tuple[int, IntMatrix], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.kind is Kind.LOOP_FIBER_OVER_X and (self.n is None or self.n < 1):
            raise ValueError("LoopFiberOverX needs n >= 1")
        if self.kind is Kind.FIBER_OVER_BASE_SPHERE and not self.fiber_cohomology:
            raise ValueError("FiberOverBaseSphere needs the fiber cohomology")


@dataclass(frozen=True)
class Entry:
    group: FgAbGroup
    labels: tuple[str, ...]
    # each canonical generator as an integer vector over the E_2 generators
    e2_coords: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class DifferentialRecord:
    r: int
    source: tuple[int, int]
    target: tuple[int, int]
    matrix: IntMatrix

    def format(self) -> str:
        (p, q), (p2, q2) = self.source, self.target
        return f"d {self.r}: ({p},{q})->({p2},{q2}) matrix={self.matrix.to_rows()}"


@dataclass(frozen=True)
class BigradedPage:
    r: int
    entries: Mapping[tuple[int, int], Entry] = field(hash=False)
    max_total_degree: int
    differential_log: tuple[DifferentialRecord, ...] = ()

    def __post_init__(self):
        if self.r < 2:
            raise ValueError("page index must be >= 2")
        for (p, q), e in self.entries.items():
            if p < 0 or q < 0 or p + q > self.max_total_degree:
                raise ValueError(f"entry ({p},{q}) outside the support")
            if e.group.is_trivial():
                raise ValueError("trivial entries are not stored")
        for d in self.differential_log:
            if d.target != (d.source[0] + d.r, d.source[1] - d.r + 1):
                raise ValueError(f"bad bidegree in {d.format()}")

    def group(self, p: int, q: int) -> FgAbGroup:
        e = self.entries.get((p, q))
        return e.group if e else FgAbGroup.trivial()

    def nonzero(self) -> dict[tuple[int, int], FgAbGroup]:
        return {pq: e.group for pq, e in sorted(self.entries.items())}

    def total_degree(self, d: int) -> list[tuple[tuple[int, int], FgAbGroup]]:
        return [(pq, e.group) for pq, e in sorted(self.entries.items()) if sum(pq) == d]

    def dump(self) -> str:
        lines = []
        for (p, q), e in sorted(self.entries.items()):
            tors = ",".join(str(t) for t in e.group.torsion) or "-"
            lines.append(f"{p} {q} {e.group.free_rank} {tors}")
        lines += [d.format() for d in self.differential_log]
        return "\n".join(lines) + "\n"


def _single(group: FgAbGroup, label: str, coords: tuple[int, ...] = (1,)) -> Entry:
    return Entry(group, (label,), (coords,))


def _z_label(q: int) -> str:
    return f"z_{q}"


# ------------------------------------------------------------------ E_2 pages

def loop_cohomology(k: int, max_degree: int) -> list[tuple[int, FgAbGroup]]:
    """H^*(ΩS^{2k}): Z in every degree (2k-1)j."""
    if k < 2:
        raise ValueError("k must be >= 2")
    step = 2 * k - 1
    return [(d, Z) for d in range(0, max_degree + 1, step)]


def build_E2(model: FibrationModel, max_total_degree: int) -> BigradedPage:
    k = model.k
    entries: dict[tuple[int, int], Entry] = {}

    def put(p, q, group, label):
        if p + q <= max_total_degree and not group.is_trivial():
            entries[(p, q)] = _single(group, label)

    if model.kind is Kind.FIBER_OVER_BASE_SPHERE:
        labels = dict(model.fiber_labels)
        for q, g in model.fiber_cohomology:
            if g.is_trivial() or q > max_total_degree:
                continue
            if g.num_generators != 1:
                raise ValueError("fiber cohomology entries must be cyclic")
            base = labels.get(q, f"f_{q}")
            put(0, q, g, base)
            put(2 * k, q, g, f"x_{2 * k}⊗{base}")
        return BigradedPage(2, entries, max_total_degree)

    loops = loop_cohomology(k, max_total_degree)
    if model.kind is Kind.LOOP_FIBER_OVER_X:
        cyc = FgAbGroup.cyclic(model.n)
        for q, g in loops:
            put(0, q, g, _z_label(q))
            put(2 * k, q, cyc, f"y_{2 * k}" + (f"⊗{_z_label(q)}" if q else ""))
            put(4 * k - 1, q, g, f"y_{4 * k - 1}" + (f"⊗{_z_label(q)}" if q else ""))
    elif model.kind is Kind.LOOP_FIBER_OVER_TOP_SPHERE:
        for q, g in loops:
            put(0, q, g, _z_label(q))
            put(4 * k - 1, q, g, f"ȳ_{4 * k - 1}" + (f"⊗{_z_label(q)}" if q else ""))
    else:
        raise ValueError(f"unsupported kind {model.kind}")
    return BigradedPage(2, entries, max_total_degree)


# ------------------------------------------------------------- page turning

def _subquotient(entry: Entry, h_out: Hom | None, h_in: Hom | None) -> Entry | None:
    G = entry.group
    g = G.num_generators
    if h_out is not None:
        ker = kernel_generators(h_out)
    else:
        ker = [[int(i == j) for j in range(g)] for i in range(g)]
    if not ker:
        return None
    rels = G.relations().to_rows()
    if h_in is not None:
        rels += [h_in.matrix.column(j) for j in range(h_in.matrix.cols)]
    coords = lattice_coordinates(ker, rels)
    group, gens = presentation_with_generators(IntMatrix.from_rows(coords, len(ker)))
    if group.is_trivial():
        return None
    labels, e2 = [], []
    for vec in gens:
        old = [sum(c * ker[i][j] for i, c in enumerate(vec)) for j in range(g)]
        e2.append(tuple(sum(old[j] * entry.e2_coords[j][t] for j in range(g))
                        for t in range(len(entry.e2_coords[0]))))
        terms = [(c, entry.labels[j]) for j, c in enumerate(old) if c]
        labels.append(" + ".join(lab if c == 1 else f"{c}·{lab}" for c, lab in terms))
    return Entry(group, tuple(labels), tuple(e2))


def check_d_squared(log: Iterable[DifferentialRecord],
                     entries: Mapping[tuple[int, int], Entry]) -> None:
    by_source = {d.source: d for d in log}
    for d1 in log:
        d2 = by_source.get(d1.target)
        if d2 is None or d2.r != d1.r:
            continue
        comp = d2.matrix @ d1.matrix
        cod = entries[d2.target].group
        reduced = [v % e if e else v for row, e in zip(comp.to_rows(), cod.orders) for v in row]
        if any(reduced):
            raise ArithmeticError(f"d∘d != 0 through {d1.source} -> {d1.target} -> {d2.target}")


def turn_page(page: BigradedPage, r: int, maps: Mapping[tuple[int, int], IntMatrix]) -> BigradedPage:
    """Apply d_r given as matrices on current generators; returns E_{r+1}.

    Differentials whose target lies beyond the truncation are not applied.
    """
    homs: dict[tuple[int, int], Hom] = {}
    records = []
    for src, mat in sorted(maps.items()):
        tgt = (src[0] + r, src[1] - r + 1)
        if src not in page.entries or tgt not in page.entries:
            continue
        h = Hom(page.entries[src].group, page.entries[tgt].group, mat)
        homs[src] = h
        records.append(DifferentialRecord(r, src, tgt, mat))
    check_d_squared(records, page.entries)
    incoming = {(s[0] + r, s[1] - r + 1): h for s, h in homs.items()}
    new_entries = {}
    for pos, entry in page.entries.items():
        e = _subquotient(entry, homs.get(pos), incoming.get(pos))
        if e is not None:
            new_entries[pos] = e
    return BigradedPage(r + 1, new_entries, page.max_total_degree,
                        page.differential_log + tuple(records))


def _scalar(x: int) -> IntMatrix:
    return IntMatrix.from_rows([[x]])


def apply_d2k(page: BigradedPage, model: FibrationModel) -> BigradedPage:
    """d_{2k}: z_{(2k-1)j} -> y_{2k}⊗z_{(2k-1)(j-1)}, or caller matrices for a sphere base."""
    k = model.k
    if page.r not in (2, 2 * k):
        raise PageIndexError(f"d_{2 * k} needs the E_2 page, got E_{page.r}")
    if model.kind is Kind.FIBER_OVER_BASE_SPHERE:
        maps = {(0, q): m for q, m in model.d2k}
    elif model.kind is Kind.LOOP_FIBER_OVER_X:
        step = 2 * k - 1
        maps = {}
        for (p, q), e in page.entries.items():
            if p == 0 and q >= step:
                maps[(p, q)] = _scalar(1)
    else:
        raise PageIndexError(f"{model.kind.value} has no d_{2 * k}")
    return turn_page(_reindex(page, 2 * k), 2 * k, maps)


def apply_d4k1(page: BigradedPage, model: FibrationModel, lam: int) -> BigradedPage:
    """d_{4k-1}(n·z_{(2k-1)j}) = λ·y_{4k-1}⊗z_{(2k-1)(j-2)} for j >= 2."""
    k = model.k
    if model.kind is not Kind.LOOP_FIBER_OVER_X:
        raise PageIndexError("d_{4k-1} replay is defined for LoopFiberOverX")
    if page.r != 2 * k + 1:
        raise PageIndexError(f"d_{4 * k - 1} needs the page after d_{2 * k}, got E_{page.r}")
    n, step, r = model.n, 2 * k - 1, 4 * k - 1
    maps = {}
    for (p, q), e in page.entries.items():
        if p != 0 or q < 2 * step:
            continue
        tgt = page.entries.get((r, q - r + 1))
        if tgt is None:
            continue
        c = e.e2_coords[0][0]   # surviving multiple of z_q
        c_t = tgt.e2_coords[0][0]
        if (c * lam) % (n * c_t):
            raise ArithmeticError(f"d_{r} is not integral on {e.labels[0]}")
        maps[(p, q)] = _scalar(c * lam // (n * c_t))
    return turn_page(_reindex(page, r), r, maps)


def apply_transgression(page: BigradedPage, model: FibrationModel) -> BigradedPage:
    """d_{4k-1}(z_{4k-2}) = H(f)·ȳ_{4k-1} on the loop fibration over S^{4k-1}."""
    if model.kind is not Kind.LOOP_FIBER_OVER_TOP_SPHERE:
        raise PageIndexError("transgression is defined for LoopFiberOverTopSphere")
    source, _, mult = transgression_G(model.k, model.hopf or 0)
    return turn_page(_reindex(page, 4 * model.k - 1), 4 * model.k - 1,
                     {source: _scalar(mult)})


def _reindex(page: BigradedPage, r: int) -> BigradedPage:
    # pages between differentials are unchanged; move to index r
    if page.r > r:
        raise PageIndexError(f"page E_{page.r} is past E_{r}")
    return BigradedPage(r, page.entries, page.max_total_degree, page.differential_log)


def transgression_G(k: int, H_f: int) -> tuple[tuple[int, int], tuple[int, int], int]:
    if k < 2:
        raise ValueError("k must be >= 2")
    return (0, 4 * k - 2), (4 * k - 1, 0), H_f


# ------------------------------------------------------ fiber (co)homology

def _zl(lam: int) -> FgAbGroup:
    return FgAbGroup.cyclic(abs(lam))


def fiber_homology(k: int, lam: int, max_degree: int) -> list[tuple[int, FgAbGroup]]:
    """Reduced homology of the homotopy fiber of an extension X -> S^{2k}.

    Z in degree 2k-1 and Z_|λ| in degrees (2k-1)j, j >= 2. For λ = 0 the
    top column also survives, adding Z in degrees (2k-1)j + 1, j >= 2.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    step = 2 * k - 1
    out: dict[int, FgAbGroup] = {}
    if step <= max_degree:
        out[step] = Z
    j = 2
    while step * j <= max_degree:
        g = _zl(lam)
        if not g.is_trivial():
            out[step * j] = g
        if lam == 0 and step * j + 1 <= max_degree:
            out[step * j + 1] = Z
        j += 1
    return sorted(out.items())


def homology_to_cohomology(homology: Iterable[tuple[int, FgAbGroup]],
                           max_degree: int) -> list[tuple[int, FgAbGroup]]:
    """Universal coefficients: H^t = free(H_t) ⊕ tors(H_{t-1})."""
    h = dict(homology)
    out = []
    for t in range(0, max_degree + 1):
        free = h.get(t, FgAbGroup()).free_rank
        tors = h.get(t - 1, FgAbGroup()).torsion
        g = FgAbGroup(free, tors)
        if not g.is_trivial():
            out.append((t, g))
    return out


def cohomology_to_homology(cohomology: Iterable[tuple[int, FgAbGroup]],
                           max_degree: int) -> list[tuple[int, FgAbGroup]]:
    """Universal coefficients backwards: H_t = free(H^t) ⊕ tors(H^{t+1})."""
    c = dict(cohomology)
    out = []
    for t in range(0, max_degree + 1):
        g = FgAbGroup(c.get(t, FgAbGroup()).free_rank, c.get(t + 1, FgAbGroup()).torsion)
        if not g.is_trivial():
            out.append((t, g))
    return out


def total_cohomology(page: BigradedPage, through: int) -> list[tuple[int, FgAbGroup]]:
    """Assemble E_∞ along total degrees; refuses genuine extension problems."""
    out = []
    for d in range(0, through + 1):
        parts = [g for _, g in page.total_degree(d)]
        if not parts:
            continue
        if len(parts) > 1 and any(g.torsion for g in parts):
            raise ExtensionProblem(f"total degree {d} has several entries with torsion")
        total = parts[0]
        for g in parts[1:]:
            total = total.direct_sum(g)
        out.append((d, total))
    return out


@dataclass(frozen=True)
class SpectralReplay:
    pages: tuple[BigradedPage, ...]
    cohomology: tuple[tuple[int, FgAbGroup], ...]
    homology: tuple[tuple[int, FgAbGroup], ...]

    @property
    def e_infinity(self) -> BigradedPage:
        return self.pages[-1]


def replay_fiber(k: int, n: int, lam: int, max_degree: int) -> SpectralReplay:
    """E_2 -> d_{2k} -> d_{4k-1} for ΩS^{2k} -> F -> X, dualized to reduced homology."""
    model = FibrationModel(Kind.LOOP_FIBER_OVER_X, k, n, lam)
    # two extra degrees so every differential touching degree <= max+1 lands
    e2 = build_E2(model, max_degree + 2)
    e3 = apply_d2k(e2, model)
    einf = apply_d4k1(e3, model, lam)
    coh = total_cohomology(einf, max_degree + 1)
    hom = [(t, g) for t, g in cohomology_to_homology(coh, max_degree) if t > 0]
    return SpectralReplay((e2, e3, einf), tuple((t, g) for t, g in coh if t <= max_degree),
                          tuple(hom))


# --------------------------------------------------------- Hopf bookkeeping

def hopf_action(H0: int, n: int, Hα: int) -> int:
    """Hopf invariant after acting by α: n²·H(α) + H0."""
    return n * n * Hα + H0


def lambda_of_extension(H0: int, n: int) -> int:
    if n == 0 or H0 % n:
        raise NotDivisible(f"{n} does not divide {H0}")
    return H0 // n


def sphere_fiber_check(k: int, lam_final: int) -> bool:
    """Whether the fiber is a homology (2k-1)-sphere."""
    step = 2 * k - 1
    return fiber_homology(k, lam_final, 2 * step + 1) == [(step, Z)]


@dataclass(frozen=True)
class HopfWitness:
    k: int
    n: int
    u: int
    h: int
    sign: int
    lifted_lambda: int

    def realized_hopf(self) -> int:
        return hopf_action(self.u * self.u * self.lifted_lambda * self.n, self.n, self.h)

    def check(self) -> bool:
        stride = hd.hopf_image_stride(self.k)
        return (self.realized_hopf() == self.sign * self.n and self.h % stride == 0
                and Residue.of(self.u, hd.n2(self.k, self.n)).is_unit())


def normalize_hopf(k: int, n: int, lam: int) -> HopfWitness | None:
    """Search a unit u mod n2 and h in the Hopf image with u²λ̃ + n·h = ±1.

    λ̃ runs over the lifts of λ mod n to [0, n2), starting with λ mod n2.
    """
    if k < 2 or n < 1:
        raise ValueError("need k >= 2 and n >= 1")
    stride = hd.hopf_image_stride(k)
    N2 = n * stride
    first = lam % N2
    lifts = [first] + [x for x in range(lam % n, N2, n) if x != first]
    units = _units_array(N2)
    for lt in lifts:
        vals = (units * units % N2) * lt % N2 if N2 > 1 else np.zeros_like(units)
        # smallest unit first; + before - at the same unit
        hits = np.flatnonzero((vals == 1 % N2) | (vals == (N2 - 1) % N2))
        if hits.size:
            u = int(units[hits[0]])
            sign = 1 if (u * u * lt - 1) % N2 == 0 else -1
            h = (sign - u * u * lt) // n
            return HopfWitness(k, n, u, h, sign, lt)
    return None


def normalize_hopf_table(k: int, n: int) -> np.ndarray:
    """Witness existence for every λ in [0, n), same search vectorized."""
    stride = hd.hopf_image_stride(k)
    N2 = n * stride
    if N2 == 1:
        return np.ones(1, dtype=bool)
    units = _units_array(N2)
    usq = units * units % N2
    lam = np.arange(n, dtype=np.int64)
    found = np.zeros(n, dtype=bool)
    for t in range(stride):
        vals = np.outer(lam + t * n, usq) % N2
        found |= ((vals == 1) | (vals == N2 - 1)).any(axis=1)
    return found


@lru_cache(maxsize=4096)
def _units_array(N: int) -> np.ndarray:
    if N == 1:
        return np.array([1], dtype=np.int64)
    xs = np.arange(1, N, dtype=np.int64)
    return xs[np.gcd(xs, N) == 1]


def hopf_lambda_is_pm_square(n: int, lam: int) -> bool:
    """Target predicate for the normalization search."""
    return is_pm_unit_square(Residue.of(lam, n))


def sphere_bundle_total_space(k: int, n: int, max_degree: int | None = None) -> list[tuple[int, FgAbGroup]]:
    """Cohomology of an S^{2k-1}-fibration over S^{2k} with Euler class n, replayed."""
    step = 2 * k - 1
    max_degree = 4 * k - 1 if max_degree is None else max_degree
    model = FibrationModel(Kind.FIBER_OVER_BASE_SPHERE, k, n,
                           fiber_cohomology=((0, Z), (step, Z)),
                           fiber_labels=((0, "1"), (step, f"e_{step}")),
                           d2k=((step, _scalar(n)),))
    page = apply_d2k(build_E2(model, max_degree + 1), model)
    return total_cohomology(page, max_degree)
