"""Oracle-agreement sweeps shared by the self-check command and the test suite."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import homotopy_data as hd
from .classifier import (AttachingClass, LinkingFormClass, condition_I, condition_II,
                         condition_II_oracle_table, is_fibration, linking_form_of,
                         m_coefficient, star)
from .fgab import abelian_groups_of_order, brute_force_epi_oracle, exists_epimorphism
from .modring import Residue, pm_unit_square_mask_crt, pm_unit_squares_bruteforce
from .serre import fiber_homology, normalize_hopf_table, replay_fiber


class BudgetExhausted(Exception):
    pass


@dataclass
class SweepResult:
    name: str
    checked: int = 0
    mismatches: list = field(default_factory=list)
    complete: bool = True
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        tail = "" if self.complete else " (stopped at budget)"
        return f"{status} {self.name}: {self.checked} checks, {len(self.mismatches)} mismatches{tail}"


def _runner(name: str, deadline: float | None):
    res = SweepResult(name)
    start = time.perf_counter()

    def tick():
        if deadline is not None and time.perf_counter() > deadline:
            raise BudgetExhausted

    def finish():
        res.seconds = time.perf_counter() - start
        return res

    return res, tick, finish


def sweep_pm_unit_squares(n_max: int, deadline: float | None = None) -> SweepResult:
    """Brute-force enumeration against the CRT fast path, every residue, every n."""
    res, tick, finish = _runner("pm_unit_squares brute force vs CRT", deadline)
    try:
        for n in range(1, n_max + 1):
            tick()
            brute = np.zeros(n, dtype=bool)
            brute[pm_unit_squares_bruteforce(n)] = True
            fast = pm_unit_square_mask_crt(n)
            if not np.array_equal(brute, fast):
                res.mismatches.append((n, np.flatnonzero(brute != fast)[:5].tolist()))
            res.checked += n
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_condition_II(n_max: int, deadline: float | None = None) -> SweepResult:
    res, tick, finish = _runner("condition_II vs oracle", deadline)
    try:
        for n in range(1, n_max + 1):
            tick()
            oracle = condition_II_oracle_table(n)
            for v in range(n):
                got = condition_II(LinkingFormClass(n, Residue(v, n)))
                if got != bool(oracle[v]):
                    res.mismatches.append((n, v, got))
            res.checked += n
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_epimorphisms(order_max: int, deadline: float | None = None) -> SweepResult:
    """Layered p-rank decision against exhaustive search on all finite pairs."""
    res, tick, finish = _runner("exists_epimorphism vs brute force", deadline)
    groups = [g for m in range(1, order_max + 1) for g in abelian_groups_of_order(m)]
    try:
        for A in groups:
            tick()
            for B in groups:
                if exists_epimorphism(A, B) != brute_force_epi_oracle(A, B):
                    res.mismatches.append((str(A), str(B)))
                res.checked += 1
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_realizability(k_values, n_max: int, deadline: float | None = None) -> SweepResult:
    """is_fibration vs conditions (I)+(II) vs Hopf normalization, every a < n2."""
    res, tick, finish = _runner("realizability three-way agreement", deadline)
    try:
        for k in k_values:
            for n in range(1, n_max + 1):
                tick()
                witness = normalize_hopf_table(k, n)
                for a in range(hd.n2(k, n)):
                    f = AttachingClass.of(k, n, a)
                    lam = m_coefficient(f).value % n
                    direct = is_fibration(f)
                    linking = condition_I(f) and condition_II(linking_form_of(f))
                    hopf = bool(witness[lam])
                    if not direct == linking == hopf:
                        res.mismatches.append((k, n, a, direct, linking, hopf))
                    res.checked += 1
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_spectral(k_values, n_values, lam_values, max_degree: int | None = None,
                   deadline: float | None = None) -> SweepResult:
    res, tick, finish = _runner("spectral replay vs fiber homology", deadline)
    try:
        for k in k_values:
            top = max_degree if max_degree is not None else 4 * k + 2 * (2 * k - 1)
            for n in n_values:
                for lam in lam_values:
                    tick()
                    rep = replay_fiber(k, n, lam, top)
                    expected = fiber_homology(k, lam, top)
                    if list(rep.homology) != expected:
                        res.mismatches.append((k, n, lam))
                    res.checked += 1
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_star(n_max: int, deadline: float | None = None) -> SweepResult:
    """star(n) against brute-force search for τ with τ² = -1 mod n."""
    res, tick, finish = _runner("star vs -1 a unit square", deadline)
    try:
        for n in range(2, n_max + 1):
            if n % 500 == 0:
                tick()
            tau = np.arange(1, n, dtype=np.int64)
            tau = tau[np.gcd(tau, n) == 1]
            brute = bool(((tau * tau) % n == n - 1).any())
            if star(n) != brute:
                res.mismatches.append(n)
            res.checked += 1
    except BudgetExhausted:
        res.complete = False
    return finish()


def sweep_registry(registry: hd.Registry | None = None) -> SweepResult:
    """Order of i_*(K) for k <= 12, n <= 100, and that every record instantiates."""
    res, _, finish = _runner("registry consistency", None)
    reg = registry or hd.default_registry()
    reg.validate()
    for k in range(2, 13):
        for n in range(2, 101):
            want = n * (2 if k not in (2, 4) and n % 2 == 0 else 1)
            got = hd.i_star_K(k, n, reg).group.order()
            if got != want:
                res.mismatches.append((k, n, got, want))
            res.checked += 1
    return finish()


DEFAULT_SUITES: dict[str, Callable[[float | None], SweepResult]] = {
    "registry": lambda d: sweep_registry(),
    "pm_unit_squares": lambda d: sweep_pm_unit_squares(2000, d),
    "condition_II": lambda d: sweep_condition_II(300, d),
    "epimorphism": lambda d: sweep_epimorphisms(32, d),
    "realizability": lambda d: sweep_realizability(range(2, 7), 60, d),
    "spectral": lambda d: sweep_spectral((2, 3), (1, 2, 3, 4), range(0, 5), None, d),
    "star": lambda d: sweep_star(2000, d),
}


def run_selfcheck(budget_seconds: float) -> list[SweepResult]:
    if budget_seconds <= 0:
        return []
    deadline = time.perf_counter() + budget_seconds
    return [suite(deadline) for suite in DEFAULT_SUITES.values()]


def gcd_star_signature(k: int, n: int) -> tuple[int, bool]:
    from .classifier import TABLE_MODULI
    return math.gcd(TABLE_MODULI[k], n), star(n)
