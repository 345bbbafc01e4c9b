"""Exact arithmetic in Z_n.

Factorization, the unit group, CRT splitting and the set of signed unit
squares {±τ² mod n : τ a unit}, which is what every realizability decision
in this package reduces to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

MAX_INPUT = 2**64


@dataclass(frozen=True)
class ModringConfig:
    # pm_unit_squares materializes its result up to this modulus and returns a
    # membership-only predicate above it.
    materialize_limit: int = 10**6


CONFIG = ModringConfig()


def _check_modulus(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise TypeError(f"modulus must be an integer, got {n!r}")
    if n <= 0:
        raise ValueError(f"modulus must be >= 1, got {n}")
    if n >= MAX_INPUT:
        raise ValueError(f"modulus {n} exceeds the 64-bit input bound")


@dataclass(frozen=True, order=True)
class Residue:
    value: int
    modulus: int

    def __post_init__(self):
        _check_modulus(self.modulus)
        if not 0 <= self.value < self.modulus:
            raise ValueError(f"value {self.value} not in [0, {self.modulus})")

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        """Reduce an arbitrary integer."""
        _check_modulus(modulus)
        return cls(int(value) % modulus, int(modulus))

    def __add__(self, other: "Residue") -> "Residue":
        self._same_ring(other)
        return Residue.of(self.value + other.value, self.modulus)

    def __mul__(self, other: "Residue | int") -> "Residue":
        if isinstance(other, Residue):
            self._same_ring(other)
            other = other.value
        return Residue.of(self.value * other, self.modulus)

    __rmul__ = __mul__

    def __neg__(self) -> "Residue":
        return Residue.of(-self.value, self.modulus)

    def reduce(self, modulus: int) -> "Residue":
        if self.modulus % modulus:
            raise ValueError(f"{modulus} does not divide {self.modulus}")
        return Residue.of(self.value, modulus)

    def is_unit(self) -> bool:
        return math.gcd(self.value, self.modulus) == 1

    def _same_ring(self, other: "Residue") -> None:
        if other.modulus != self.modulus:
            raise ValueError(f"moduli differ: {self.modulus} vs {other.modulus}")

    def __str__(self) -> str:
        return f"{self.value} mod {self.modulus}"


@dataclass(frozen=True)
class Factorization:
    n: int
    pairs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        primes = [p for p, _ in self.pairs]
        if primes != sorted(set(primes)):
            raise ValueError("primes must be strictly increasing")
        if any(e < 1 for _, e in self.pairs):
            raise ValueError("exponents must be >= 1")
        if math.prod(p**e for p, e in self.pairs) != self.n:
            raise ValueError(f"{self.pairs} does not multiply to {self.n}")

    def prime_powers(self) -> list[int]:
        return [p**e for p, e in self.pairs]

    def primes(self) -> list[int]:
        return [p for p, _ in self.pairs]

    def valuation(self, p: int) -> int:
        return dict(self.pairs).get(p, 0)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.pairs)


@dataclass(frozen=True)
class ResidueSet:
    modulus: int
    members: tuple[int, ...]

    def __post_init__(self):
        if list(self.members) != sorted(set(self.members)):
            raise ValueError("members must be sorted and distinct")
        if self.members and not 0 <= self.members[0] <= self.members[-1] < self.modulus:
            raise ValueError("members out of range")

    def __contains__(self, m) -> bool:
        if isinstance(m, Residue):
            if m.modulus != self.modulus:
                return False
            m = m.value
        return int(m) % self.modulus in self._lookup

    @property
    def _lookup(self) -> frozenset:
        # cached on first use; the dataclass stays frozen
        cache = self.__dict__.get("_frozen")
        if cache is None:
            cache = frozenset(self.members)
            object.__setattr__(self, "_frozen", cache)
        return cache

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class PmUnitSquarePredicate:
    """Membership-only stand-in for pm_unit_squares on very large moduli."""

    modulus: int
    factorization: Factorization = field(repr=False)

    def __contains__(self, m) -> bool:
        if isinstance(m, Residue):
            if m.modulus != self.modulus:
                return False
            m = m.value
        return is_pm_unit_square_crt(Residue.of(m, self.modulus), self.factorization)


# ---------------------------------------------------------------- factorization

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"failed to split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


@lru_cache(maxsize=65536)
def factorize(n: int) -> Factorization:
    _check_modulus(n)
    n = int(n)
    found: dict[int, int] = {}
    rest = n
    p = 2
    while p * p <= rest and p < 10_000:
        while rest % p == 0:
            found[p] = found.get(p, 0) + 1
            rest //= p
        p += 1 if p == 2 else 2
    if rest > 1:
        _split(rest, found)
    return Factorization(n, tuple(sorted(found.items())))


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result = result // p * (p - 1)
    return result


def units(n: int) -> list[int]:
    _check_modulus(n)
    if n == 1:
        return [0]
    return [t for t in range(1, n) if math.gcd(t, n) == 1]


# ------------------------------------------------------------ signed unit squares

def pm_unit_squares_bruteforce(n: int) -> np.ndarray:
    """Sorted array of {±τ² mod n : gcd(τ, n) = 1}, by direct enumeration."""
    _check_modulus(n)
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    tau = np.arange(1, n, dtype=np.int64)
    tau = tau[np.gcd(tau, n) == 1]
    sq = (tau * tau) % n if n < 3_000_000_000 else np.array(
        [t * t % n for t in tau.tolist()], dtype=object)
    return np.unique(np.concatenate([sq, (-sq) % n])).astype(np.int64)


def pm_unit_squares(n: int, config: ModringConfig = CONFIG):
    """The set {±τ² mod n : τ ∈ Z_n^*}; {0} when n = 1.

    Above ``config.materialize_limit`` a membership-only predicate backed by
    the CRT test is returned instead of a materialized ResidueSet.
    """
    _check_modulus(n)
    if n > config.materialize_limit:
        return PmUnitSquarePredicate(n, factorize(n))
    return _pm_unit_squares_cached(int(n))


@lru_cache(maxsize=4096)
def _pm_unit_squares_cached(n: int) -> ResidueSet:
    return ResidueSet(n, tuple(int(v) for v in pm_unit_squares_bruteforce(n)))


@lru_cache(maxsize=1024)
def _qr_table(p: int) -> np.ndarray:
    # Euler's criterion for every residue mod an odd prime p
    r = np.arange(p, dtype=object)
    crit = np.array([pow(int(x), (p - 1) // 2, p) for x in r], dtype=np.int64)
    return crit == 1


def _is_unit_square_prime_power(m: int, p: int, e: int) -> bool:
    if m % p == 0:
        return False
    if p == 2:
        if e == 1:
            return True
        if e == 2:
            return m % 4 == 1
        return m % 8 == 1
    return pow(m, (p - 1) // 2, p) == 1


def is_unit_square_crt(m: Residue, f: Factorization) -> bool:
    """m ∈ (Z_n^*)² via Euler's criterion and the 2-adic rules, per prime power."""
    if f.n != m.modulus:
        raise ValueError(f"factorization of {f.n} does not match modulus {m.modulus}")
    return all(_is_unit_square_prime_power(m.value % p**e, p, e) for p, e in f)


def is_pm_unit_square_crt(m: Residue, f: Factorization) -> bool:
    """CRT fast path: ±m is a unit square iff all components agree on one sign."""
    if m.modulus == 1:
        return True
    return is_unit_square_crt(m, f) or is_unit_square_crt(-m, f)


def pm_unit_square_mask_crt(n: int) -> np.ndarray:
    """Boolean mask over [0, n) of the CRT fast path, vectorized."""
    f = factorize(n)
    if n == 1:
        return np.ones(1, dtype=bool)
    m = np.arange(n, dtype=np.int64)

    def square_mask(vals: np.ndarray) -> np.ndarray:
        ok = np.ones(n, dtype=bool)
        for p, e in f:
            r = vals % p**e
            if p == 2:
                if e == 1:
                    ok &= r % 2 == 1
                elif e == 2:
                    ok &= r % 4 == 1
                else:
                    ok &= r % 8 == 1
            else:
                ok &= _qr_table(p)[r % p]
        return ok

    return square_mask(m) | square_mask((-m) % n)


def is_pm_unit_square(m: Residue) -> bool:
    return m in pm_unit_squares(m.modulus)


# ------------------------------------------------------------------ unit group

def unit_group_structure(n: int):
    """Invariant-factor decomposition of (Z_n)^*."""
    from .fgab import FgAbGroup

    _check_modulus(n)
    cyclic_orders = []
    for p, e in factorize(n):
        if p == 2:
            if e == 2:
                cyclic_orders.append(2)
            elif e >= 3:
                cyclic_orders += [2, 2 ** (e - 2)]
        else:
            cyclic_orders.append(p ** (e - 1) * (p - 1))
    return FgAbGroup.from_cyclic_orders(cyclic_orders)


# ------------------------------------------------------------------------- CRT

def crt_split(m: Residue, f: Factorization) -> list[Residue]:
    if f.n != m.modulus:
        raise ValueError(f"factorization of {f.n} does not match modulus {m.modulus}")
    return [Residue.of(m.value, q) for q in f.prime_powers()]


def crt_combine(parts: list[Residue]) -> Residue:
    """Inverse of crt_split for pairwise coprime moduli."""
    value, modulus = 0, 1
    for r in parts:
        if math.gcd(modulus, r.modulus) != 1:
            raise ValueError("moduli must be pairwise coprime")
        # solve x ≡ value (modulus), x ≡ r.value (r.modulus)
        t = (r.value - value) * pow(modulus, -1, r.modulus) % r.modulus
        value += modulus * t
        modulus *= r.modulus
    return Residue.of(value, modulus)
