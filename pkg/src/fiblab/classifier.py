"""Realizability of attaching classes and the homotopy-type count tables.

An attaching class is described by a coordinate ``a`` on the distinguished
element θ (taken modulo n2(k, n)) plus an optional element γ of a
caller-supplied quotient of π_{4k-2}(S^{2k-1}). Realizability reduces to
whether the induced coefficient m is ±(unit square) modulo n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import homotopy_data as hd
from .fgab import FgAbGroup
from .modring import Residue, factorize, is_pm_unit_square, is_unit_square_crt, pm_unit_squares

ORACLE_LIMIT = 10_000


def _uses_doubled_generator(k: int, n: int) -> bool:
    # odd n with S^{2k-1} not an H-space: i_*(K) is generated by twice the product
    return hd.hopf_image_stride(k) != 1 and n % 2 == 1


@dataclass(frozen=True)
class AttachingClass:
    k: int
    n: int
    a: Residue
    gamma: tuple[int, ...] | None = None
    gamma_group: FgAbGroup | None = None

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        expected = hd.n2(self.k, self.n)
        if self.a.modulus != expected:
            raise ValueError(f"a must be taken mod n2(k, n) = {expected}, got {self.a.modulus}")
        if self.gamma is not None:
            if self.gamma_group is None:
                raise ValueError("gamma needs its declared quotient group")
            if not self.gamma_group.is_finite():
                raise ValueError("gamma quotient must be finite")
            if len(self.gamma) != len(self.gamma_group.torsion):
                raise ValueError("gamma has the wrong number of coordinates")
            if any(not 0 <= g < d for g, d in zip(self.gamma, self.gamma_group.torsion)):
                raise ValueError("gamma coordinates out of range")

    @classmethod
    def of(cls, k: int, n: int, a: int, gamma: Sequence[int] | None = None,
           gamma_group: FgAbGroup | None = None) -> "AttachingClass":
        return cls(k, n, Residue.of(a, hd.n2(k, n)),
                   None if gamma is None else tuple(gamma), gamma_group)

    def __add__(self, other: "AttachingClass") -> "AttachingClass":
        if (self.k, self.n) != (other.k, other.n):
            raise ValueError("descriptors live over different (k, n)")
        if self.gamma is None or other.gamma is None:
            gamma, group = self.gamma or other.gamma, self.gamma_group or other.gamma_group
        else:
            if self.gamma_group != other.gamma_group:
                raise ValueError("gamma components live in different quotients")
            group = self.gamma_group
            gamma = tuple((x + y) % d for x, y, d in zip(self.gamma, other.gamma, group.torsion))
        return AttachingClass(self.k, self.n, self.a + other.a, gamma, group)


@dataclass(frozen=True)
class LinkingFormClass:
    n: int
    value: Residue
    sign_ambiguous: bool = True

    def __post_init__(self):
        if self.value.modulus != self.n:
            raise ValueError("linking value must be a residue mod n")


@dataclass(frozen=True)
class Uncovered:
    """A table cell the stated formulas do not reach; never a number."""

    k: int
    n: int
    d: int
    r: int
    reason: str


@dataclass(frozen=True)
class GTableResult:
    k: int
    n: int
    d: int
    star: bool
    count: int | None
    uncovered: Uncovered | None = None
    column: str = ""

    def __post_init__(self):
        if (self.count is None) == (self.uncovered is None):
            raise ValueError("exactly one of count / uncovered must be set")
        if self.count is not None and self.count < 1:
            raise ValueError("count must be >= 1")

    @property
    def is_uncovered(self) -> bool:
        return self.uncovered is not None


# ------------------------------------------------------------ realizability

def m_coefficient(f: AttachingClass) -> Residue:
    """Coefficient of i_*(f) on the relative Whitehead product, mod |i_*(K)|."""
    if f.n == 1:
        return Residue(0, 1)
    order = hd.i_star_K(f.k, f.n).group.torsion_order()
    if _uses_doubled_generator(f.k, f.n):
        return Residue.of(2 * f.a.value, order)
    return Residue.of(f.a.value, order)


def is_fibration(f: AttachingClass) -> bool:
    return is_pm_unit_square(Residue.of(m_coefficient(f).value, f.n))


def condition_I(f: AttachingClass) -> bool:
    # the descriptor parametrizes the kernel of the pinch map by construction
    return isinstance(f, AttachingClass)


def linking_form_of(f: AttachingClass) -> LinkingFormClass:
    return LinkingFormClass(f.n, Residue.of(m_coefficient(f).value, f.n), True)


def condition_II(L: LinkingFormClass) -> bool:
    """Whether the linking form is standard for some orientation."""
    n, v = L.n, L.value.value
    if n == 1:
        return True
    if math.gcd(v, n) != 1:
        return False
    # u²·(±v) = 1 says ±v is the square of a unit
    if L.sign_ambiguous:
        return v in pm_unit_squares(n)
    return is_unit_square_crt(L.value, factorize(n))


def condition_II_oracle(L: LinkingFormClass) -> bool:
    """Exhaustive search over isomorphisms ψ = (×u) and orientations.

    b(x, y) = v·x·y on Z_n, so b(ψx, ψy) = xy for all pairs reduces by
    bilinearity to the single pair (1, 1), which is checked first; the full
    pairwise check runs only for a passing candidate.
    """
    n, v = L.n, L.value.value
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to n <= {ORACLE_LIMIT}")
    if n == 1:
        return True
    xs = np.arange(n, dtype=np.int64)
    for sign in ((1, -1) if L.sign_ambiguous else (1,)):
        for u in range(1, n):
            if math.gcd(u, n) != 1:
                continue
            if (sign * v * u * u - 1) % n:
                continue
            table = (sign * v * np.outer(u * xs % n, u * xs % n)) % n
            if np.array_equal(table, np.outer(xs, xs) % n):
                return True
    return False


def condition_II_oracle_table(n: int) -> np.ndarray:
    """Oracle verdict for every value mod n at once (both orientations)."""
    if n > ORACLE_LIMIT:
        raise ValueError(f"oracle limited to n <= {ORACLE_LIMIT}")
    if n == 1:
        return np.ones(1, dtype=bool)
    us = np.arange(1, n, dtype=np.int64)
    us = us[np.gcd(us, n) == 1]
    usq = (us * us) % n
    v = np.arange(n, dtype=np.int64)
    # b(ψ1, ψ1) = ±v u² must equal 1; bilinearity extends to all pairs
    prod = np.outer(v, usq) % n
    return ((prod == 1) | (prod == n - 1)).any(axis=1)


def james_h(f1: AttachingClass, f2: AttachingClass) -> Residue:
    if (f1.k, f1.n) != (f2.k, f2.n):
        raise ValueError("descriptors live over different (k, n)")
    m1, m2 = m_coefficient(f1), m_coefficient(f2)
    return Residue.of(m1.value + m2.value, f1.n)


# ------------------------------------------------------------------- tables

def star(n: int) -> bool:
    """4 ∤ n and every odd prime factor is 1 mod 4."""
    if n < 2:
        raise ValueError("star is defined for n >= 2")
    f = factorize(n)
    return f.valuation(2) <= 1 and all(p % 4 == 1 for p in f.primes() if p != 2)


TABLE_MODULI = {2: 12, 3: 8, 4: 240, 5: 8, 6: 504}


def _split_d(d: int) -> tuple[int, int]:
    r = (d & -d).bit_length() - 1
    return r, d >> r


def _g2(d, st):
    r, t = _split_d(d)
    if d == 2 and st:
        return 1, "2*"
    if r in (0, 1) and t in (1, 3):
        return (r + 1) * (t + 1) // 2, "2^r t"
    return None, f"r={r} outside r in {{0,1}}"


def _g3(d, st):
    return (1, "2 or 4") if d in (2, 4) else (2, "otherwise")


def _g4(d, st):
    starred = {2: 1, 5: 2, 10: 3}
    if st and d in starred:
        return starred[d], f"{d}*"
    r, odd = _split_d(d)
    t1, t2 = math.gcd(odd, 3), math.gcd(odd, 5)
    if r <= 4 and t1 * t2 == odd:
        return (r + 1) * (t1 + 1) * (t2 + 1) // 4, "2^r t1 t2"
    return None, f"d={d} outside the generic column"


def _g5(d, st):
    if d == 1:
        return 1, "1"
    if (d == 2 and st) or d == 8:
        return 8, "2* or 8"
    if d in (2, 4):
        return 16, "2 or 4"
    return None, f"d={d} outside the table"


def _g6(d, st):
    if d == 2 and st:
        return 2, "2*"
    r, odd = _split_d(d)
    t1, t2 = math.gcd(odd, 9), math.gcd(odd, 7)
    if t1 * t2 != odd or r > 3:
        return None, f"d={d} outside the generic column"
    base = (t1 + 1) * (t2 + 1)
    if r == 0:
        return base // 4, "2^r t1 t2, r=0"
    if r in (1, 2):
        return (r + 1) * base // 2, "2^r t1 t2, r=1,2"
    return 5 * base // 4, "2^r t1 t2, r=3"


_TABLES = {2: _g2, 3: _g3, 4: _g4, 5: _g5, 6: _g6}


def g_count(k: int, n: int) -> GTableResult:
    """Number of homotopy types G_k^n read off the tables; Uncovered where they are silent."""
    if k not in _TABLES:
        raise ValueError(f"k must be in [2, 6], got {k}")
    if n < 2:
        raise ValueError("n must be >= 2")
    d = math.gcd(TABLE_MODULI[k], n)
    st = star(n)
    count, column = _TABLES[k](d, st)
    if count is None:
        r, _ = _split_d(d)
        return GTableResult(k, n, d, st, None, Uncovered(k, n, d, r, column), column)
    return GTableResult(k, n, d, st, count, None, column)


def count_realizable(k: int, n: int) -> int:
    """Number of a mod n2(k, n) with γ = 0 giving a fibration (not a homotopy-type count)."""
    return sum(is_fibration(AttachingClass.of(k, n, a)) for a in range(hd.n2(k, n)))
