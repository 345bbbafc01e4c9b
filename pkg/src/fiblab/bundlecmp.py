"""Bundle-versus-fibration comparison via the J-homomorphism.

Every S^{2k-1}-fibration over S^{2k} is a bundle exactly when
J: π_{2k-1}(O_{2k}) -> π_{2k-1}(G_{2k}) is onto. Positive cases rest on cited
surjectivity facts, with the surrounding arithmetic re-checked here.
Negative cases are recomputed from registry groups with fgab.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from . import homotopy_data as hd
from .fgab import (FgAbGroup, Hom, cokernel, exists_epimorphism, image, is_injective,
                   is_surjective, layer_deficits)
from .homotopy_data import GroupCitation, Registry, UnknownKey


class Verdict(str, enum.Enum):
    EPI_BY_CITED_ARGUMENT = "EpiByCitedArgument"
    NOT_EPI_BY_RANK_OBSTRUCTION = "NotEpiByRankObstruction"
    NOT_EPI_BY_CITED_ARGUMENT = "NotEpiByCitedArgument"
    INCONCLUSIVE = "Inconclusive"

    @property
    def is_epi(self) -> bool:
        return self is Verdict.EPI_BY_CITED_ARGUMENT

    @property
    def is_not_epi(self) -> bool:
        return self in (Verdict.NOT_EPI_BY_RANK_OBSTRUCTION, Verdict.NOT_EPI_BY_CITED_ARGUMENT)


@dataclass(frozen=True)
class JContext:
    k: int
    source_group: GroupCitation | None
    target_candidates: tuple[FgAbGroup, ...]
    notes: tuple[str, ...] = ()


@dataclass(frozen=True)
class JVerdict:
    k: int
    verdict: Verdict
    obstruction_prime: int | None
    detail: str
    citations: tuple[str, ...] = ()
    trace: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.verdict is Verdict.NOT_EPI_BY_RANK_OBSTRUCTION and self.obstruction_prime is None:
            raise ValueError("a rank obstruction names its prime")


def rank_obstruction(A: FgAbGroup, candidates: list[FgAbGroup] | tuple[FgAbGroup, ...],
                     p: int) -> bool:
    """True iff no candidate B admits A ↠ B, each failing at a p-layer."""
    if not candidates:
        raise ValueError("candidates must be non-empty")
    for B in candidates:
        if exists_epimorphism(A, B) or not layer_deficits(A, B, p):
            return False
    return True


def _all_homs_cyclic_to(src: FgAbGroup, dst: FgAbGroup) -> list[Hom]:
    """Every hom from a cyclic group: the generator's image runs over the allowed elements."""
    if src.num_generators != 1 or not dst.is_finite():
        raise ValueError("expects a cyclic source and a finite target")
    d = src.orders[0]
    homs = []
    for elem in dst.elements():
        if d and any((d * x) % e for x, e in zip(elem, dst.torsion)):
            continue
        homs.append(Hom.from_columns(src, dst, [list(elem)]))
    return homs


def _split_extension(torsion_part: FgAbGroup, free_quotient_rank: int) -> FgAbGroup:
    # an extension by a free group splits
    return torsion_part.direct_sum(FgAbGroup.free(free_quotient_rank))


class _Missing(Exception):
    pass


def _need(registry: Registry | None, key: str, params: dict | None = None) -> GroupCitation:
    try:
        return hd.lookup(key, params or {}, registry)
    except UnknownKey as exc:
        raise _Missing(key) from exc


# ------------------------------------------------------------------- k = 2, 4

def _verdict_h_space(k: int, registry: Registry | None) -> JVerdict:
    p = {"k": k}
    o_small = _need(registry, "pi_{2k-1}(O_{2k-1})", p)
    o_stable = _need(registry, "pi_{2k-1}(O)", p)
    incl = _need(registry, "inclusion pi_{2k-1}(O_{2k-1}) -> pi_{2k-1}(O)", p)
    unstable = _need(registry, "pi_{4k-2}(S^{2k-1})", p)
    stable = _need(registry, "pi_{2k-1}^S", p)
    susp = _need(registry, "suspension pi_{4k-2}(S^{2k-1}) -> pi_{2k-1}^S", p)
    j_stable = _need(registry, "stable J surjective", p)
    if not j_stable.fact:
        return JVerdict(k, Verdict.INCONCLUSIVE, None, "stable J not cited as onto")

    S = stable.require_group()
    inclusion = Hom.scalar(o_small.require_group(), o_stable.require_group(), incl.scalar)
    J = Hom.scalar(o_stable.require_group(), S, 1)           # generator to generator
    sigma = Hom.scalar(unstable.require_group(), S, susp.scalar)
    composite = J.compose(inclusion)
    trace = [f"J_stable onto {S} (cited)",
             f"image of J∘(×{incl.scalar}) = {image(composite)}",
             f"Σ: {sigma.domain} -> {S} is ×{susp.scalar}, image {image(sigma)}"]
    # image(J∘incl) = image(Σ) inside the cyclic stable stem, Σ injective
    same_image = (cokernel(composite) == cokernel(sigma)
                  and image(composite) == image(sigma))
    ok = same_image and is_injective(sigma) and is_surjective(J)
    trace.append(f"images agree: {same_image}; Σ injective: {is_injective(sigma)}")
    if not ok:
        return JVerdict(k, Verdict.INCONCLUSIVE, None, "arithmetic check failed", trace=tuple(trace))
    trace.append("so J_{2k-1,2k-1} is onto and the split short exact sequences give J onto")
    cites = tuple(c.describe() for c in (o_small, incl, unstable, stable, susp, j_stable))
    return JVerdict(k, Verdict.EPI_BY_CITED_ARGUMENT, None,
                    f"J_{{{2 * k - 1},{2 * k - 1}}} onto; sections of the evaluation fibrations",
                    cites, tuple(trace))


# ----------------------------------------------------------------------- k = 3

def _verdict_k3(registry: Registry | None) -> JVerdict:
    o3 = _need(registry, "pi_3(O_5)")
    o4 = _need(registry, "pi_4(O_5)")
    s9 = _need(registry, "pi_9(S^5)")
    j35 = _need(registry, "J_{3,5} surjective")
    j45 = _need(registry, "J_{4,5} value")
    j55 = _need(registry, "J_{5,5} value")
    if not (j35.fact and j45.fact and j55.fact):
        return JVerdict(3, Verdict.INCONCLUSIVE, None, "a cited J statement is missing")
    # J_{4,5} sends the generator [ι_3]_5 η_3 to the generator ν_5 η_8
    j45_hom = Hom.scalar(o4.require_group(), s9.require_group(), 1)
    iso = is_injective(j45_hom) and is_surjective(j45_hom)
    trace = (f"π_3(O_5) = {o3.require_group()}, J_{{3,5}} onto (cited)",
             f"J_{{4,5}}: {j45_hom.domain} -> {j45_hom.codomain} is an isomorphism: {iso}",
             "J_{5,5} onto on the 2-primary part (cited)",
             "five lemma on the ladder of exact sequences gives J onto")
    if not iso:
        return JVerdict(3, Verdict.INCONCLUSIVE, None, "J_{4,5} check failed", trace=trace)
    cites = tuple(c.describe() for c in (o3, o4, s9, j35, j45, j55))
    return JVerdict(3, Verdict.EPI_BY_CITED_ARGUMENT, None, "five lemma with J_{4,5} iso",
                    cites, trace)


# ----------------------------------------------------------------------- k = 5

def pi9_G10_candidates(registry: Registry | None = None) -> tuple[FgAbGroup, ...]:
    """Solve π_10(S^9) -> π_18(S^9) -> π_9(G_10) -> π_9(S^9) -> π_17(S^9) (finite)."""
    left = _need(registry, "pi_10(S^9)").require_group()
    mid = _need(registry, "pi_18(S^9)").require_group()
    right = _need(registry, "pi_9(S^9)").require_group()
    nxt = _need(registry, "pi_17(S^9)")
    if nxt.free_rank_known and nxt.group.free_rank:
        raise ValueError("π_17(S^9) must be finite for this argument")
    # the kernel of π_9(S^9) -> finite group has full rank, so the quotient part is free
    found = {_split_extension(cokernel(h), right.free_rank)
             for h in _all_homs_cyclic_to(left, mid)}
    return tuple(sorted(found, key=lambda g: (g.torsion, g.free_rank), reverse=True))


def _verdict_k5(registry: Registry | None) -> JVerdict:
    src = _need(registry, "pi_9(O_10;2)")
    cands = pi9_G10_candidates(registry)
    A = src.require_group()
    trace = (f"π_9(O_10;2) = {A}",
             "π_9(G_10) ∈ {" + ", ".join(str(c) for c in cands) + "}")
    if rank_obstruction(A, cands, 2):
        worst = [layer_deficits(A, B, 2)[0] for B in cands]
        detail = "; ".join(f"{B}: 2-layer {j} needs {b} > {a}" for B, (j, a, b) in zip(cands, worst))
        cites = tuple(_need(registry, k).describe()
                      for k in ("pi_9(O_10;2)", "pi_10(S^9)", "pi_18(S^9)", "pi_9(S^9)", "pi_17(S^9)"))
        return JVerdict(5, Verdict.NOT_EPI_BY_RANK_OBSTRUCTION, 2, detail, cites, trace)
    return JVerdict(5, Verdict.INCONCLUSIVE, None, "no uniform rank obstruction", trace=trace)


# ----------------------------------------------------------------------- k = 6

def pi11_O12(registry: Registry | None = None) -> FgAbGroup:
    """Solve π_12(O_13) -> π_12(S^12) -> π_11(O_12) -> π_11(O) -> 0."""
    tors = _need(registry, "pi_12(O_13)")
    if not tors.free_rank_known or tors.group.free_rank:
        raise ValueError("π_12(O_13) must be a torsion group")
    s12 = _need(registry, "pi_12(S^12)").require_group()
    stable = _need(registry, "pi_{2k-1}(O)", {"k": 6}).require_group()
    # a torsion group maps to zero in Z, so π_12(S^12) injects; free quotient splits
    return _split_extension(s12, stable.free_rank)


def pi11_G12(registry: Registry | None = None) -> FgAbGroup:
    """Solve π_12(S^11) -> π_22(S^11) -> π_11(G_12) -> π_11(S^11) -> π_21(S^11)."""
    o11 = _need(registry, "pi_11(O_11)")
    if not o11.torsion_odd_only and not (o11.torsion_known and 2 not in o11.group.primary_parts()):
        raise ValueError("the left map is only known to vanish when π_11(O_11) has no 2-torsion")
    left = _need(registry, "pi_12(S^11)").require_group()
    mid = _need(registry, "pi_22(S^11)").require_group()
    right = _need(registry, "pi_11(S^11)").require_group()
    nxt = _need(registry, "pi_21(S^11)")
    if nxt.free_rank_known and nxt.group.free_rank:
        raise ValueError("π_21(S^11) must be finite")
    # the left map factors through 2-torsion-free π_11(O_11) from Z_2, hence is zero
    zero = Hom.zero(left, mid)
    return _split_extension(cokernel(zero), right.free_rank)


def _verdict_k6(registry: Registry | None) -> JVerdict:
    A = pi11_O12(registry)
    B = pi11_G12(registry)
    trace = [f"π_11(O_12) = {A}", f"π_11(G_12) = {B}"]
    if rank_obstruction(A, [B], 2):
        j, a, b = layer_deficits(A, B, 2)[0]
        return JVerdict(6, Verdict.NOT_EPI_BY_RANK_OBSTRUCTION, 2,
                        f"2-layer {j} needs {b} > {a}", trace=tuple(trace))
    epi = exists_epimorphism(A, B)
    trace.append(f"abstract surjection {A} ↠ {B} exists: {epi}; no rank obstruction")
    cited = _need(registry, "J_{2k-1} not onto pi_{2k-1}(G_{2k})", {"k": 6})
    if cited.fact:
        return JVerdict(6, Verdict.NOT_EPI_BY_CITED_ARGUMENT, None,
                        "groups alone do not obstruct; verdict rests on the cited argument",
                        (cited.describe(),), tuple(trace))
    return JVerdict(6, Verdict.INCONCLUSIVE, None, "no obstruction found", trace=tuple(trace))


# --------------------------------------------------------------------- driver

_DISPATCH = {
    2: lambda reg: _verdict_h_space(2, reg),
    3: _verdict_k3,
    4: lambda reg: _verdict_h_space(4, reg),
    5: _verdict_k5,
    6: _verdict_k6,
}


def j_verdict(k: int, registry: Registry | None = None) -> JVerdict:
    if k not in _DISPATCH:
        raise ValueError(f"k must be in [2, 6], got {k}")
    try:
        return _DISPATCH[k](registry)
    except _Missing as exc:
        return JVerdict(k, Verdict.INCONCLUSIVE, None, f"registry lacks {exc.args[0]!r}")


def j_context(k: int, registry: Registry | None = None) -> JContext:
    """Source group and target candidates used by the k = 5, 6 decisions."""
    try:
        if k == 5:
            return JContext(5, _need(registry, "pi_9(O_10;2)"), pi9_G10_candidates(registry))
        if k == 6:
            return JContext(6, None, (pi11_G12(registry),),
                            (f"π_11(O_12) = {pi11_O12(registry)}",))
    except _Missing as exc:
        return JContext(k, None, (), (f"registry lacks {exc.args[0]!r}",))
    return JContext(k, None, (), ("positive case; cited argument",))
