"""Finitely generated abelian groups as computable objects.

Groups are kept in invariant-factor form ``Z^r ⊕ Z_{d_1} ⊕ ... ⊕ Z_{d_t}``
with ``d_1 | d_2 | ... | d_t``. Their canonical generators are ordered
torsion first, then free. Homomorphisms carry an integer matrix whose column
``j`` is the image of domain generator ``j``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

OVERFLOW_BOUND = 2**127


class OracleInapplicable(ValueError):
    """Input lies outside the brute-force oracle's probe bounds."""


class OracleCancelled(RuntimeError):
    pass


def _checked(x: int) -> int:
    if not -OVERFLOW_BOUND < x < OVERFLOW_BOUND:
        raise OverflowError("intermediate value exceeds the 128-bit bound")
    return x


# ------------------------------------------------------------------ IntMatrix

@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimension")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("cols must be given for an empty matrix")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged rows")
        return cls(len(rows), cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diag(cls, values: Sequence[int], rows: int | None = None,
             cols: int | None = None) -> "IntMatrix":
        rows = len(values) if rows is None else rows
        cols = len(values) if cols is None else cols
        m = [[0] * cols for _ in range(rows)]
        for i, v in enumerate(values):
            m[i][i] = v
        return cls.from_rows(m, cols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        return [self[i, j] for i in range(self.rows)]

    @property
    def T(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self[i, j] for i in range(self.rows)] for j in range(self.cols)], self.rows)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        a, b = self.to_rows(), other.to_rows()
        out = [[_checked(sum(a[i][k] * b[k][j] for k in range(self.cols)))
                for j in range(other.cols)] for i in range(self.rows)]
        return IntMatrix.from_rows(out, other.cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def is_diagonal(self) -> bool:
        return all(self[i, j] == 0 for i in range(self.rows)
                   for j in range(self.cols) if i != j)

    def diagonal(self) -> list[int]:
        return [self[i, i] for i in range(min(self.rows, self.cols))]

    def det(self) -> int:
        """Exact determinant by Bareiss fraction-free elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        a = self.to_rows()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = _checked((a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev)
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    # text format: "rows cols" then row-major integers
    @classmethod
    def parse(cls, text: str) -> "IntMatrix":
        tokens = text.split()
        if len(tokens) < 2:
            raise ValueError("missing 'rows cols' header")
        rows, cols = int(tokens[0]), int(tokens[1])
        values = [int(t) for t in tokens[2:]]
        return cls(rows, cols, tuple(values))

    def format(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines += [" ".join(str(x) for x in r) for r in self.to_rows()]
        return "\n".join(lines) + "\n"


# --------------------------------------------------------- Smith normal form

def _snf(m: IntMatrix, track: bool = True):
    """Returns (U, D, V, Vinv) as row lists with U·M·V = D."""
    a = m.to_rows()
    nr, nc = m.rows, m.cols
    U = [[int(i == j) for j in range(nr)] for i in range(nr)] if track else None
    V = [[int(i == j) for j in range(nc)] for i in range(nc)] if track else None
    Vi = [[int(i == j) for j in range(nc)] for i in range(nc)] if track else None

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        if track:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        if track:
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        a[dst] = [_checked(x + q * y) for x, y in zip(a[dst], a[src])]
        if track:
            U[dst] = [_checked(x + q * y) for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for r in a:
            r[dst] = _checked(r[dst] + q * r[src])
        if track:
            for r in V:
                r[dst] = _checked(r[dst] + q * r[src])
            # inverse of the column op is row_src -= q * row_dst on V^{-1}
            Vi[src] = [_checked(x - q * y) for x, y in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        a[i] = [-x for x in a[i]]
        if track:
            U[i] = [-x for x in U[i]]

    def pivot_in(t):
        # smallest nonzero |entry| in the lower-right block; ties -> lowest row, column
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                v = abs(a[i][j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    t = 0
    while t < min(nr, nc):
        best = pivot_in(t)
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            clean = True
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    clean = clean and a[t][j] == 0
            if not clean:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(a[i][t]), i, t) for i in range(t + 1, nr) if a[i][t]]
                cand += [(abs(a[t][j]), t, j) for j in range(t + 1, nc) if a[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1
    return U, a, V, Vi


def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """(U, D, V) with U·M·V = D, U and V unimodular, D diagonal with d_i | d_{i+1}."""
    U, D, V, _ = _snf(m)
    return (IntMatrix.from_rows(U, m.rows), IntMatrix.from_rows(D, m.cols),
            IntMatrix.from_rows(V, m.cols))


def _smith_diagonal(m: IntMatrix) -> list[int]:
    _, D, _, _ = _snf(m, track=False)
    return [D[i][i] for i in range(min(m.rows, m.cols))]


# ----------------------------------------------------------------- FgAbGroup

def _prime_power_split(d: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= d:
        if d % p == 0:
            q = 1
            while d % p == 0:
                d //= p
                q *= p
            out.append((p, q))
        p += 1
    if d > 1:
        out.append((d, d))
    return out


def _valuation(d: int, p: int) -> int:
    v = 0
    while d % p == 0:
        d //= p
        v += 1
    return v


@dataclass(frozen=True)
class FgAbGroup:
    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        if any(d < 2 for d in self.torsion):
            raise ValueError(f"invariant factors must be >= 2: {self.torsion}")
        for d, e in zip(self.torsion, self.torsion[1:]):
            if e % d:
                raise ValueError(f"divisibility chain broken: {d} does not divide {e}")

    # constructors
    @classmethod
    def trivial(cls) -> "FgAbGroup":
        return cls()

    @classmethod
    def free(cls, rank: int = 1) -> "FgAbGroup":
        return cls(rank)

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        """Z_n with Z_0 = Z and Z_1 = 0; negative n means Z_|n|."""
        return cls.from_cyclic_orders([abs(n)])

    @classmethod
    def from_cyclic_orders(cls, orders: Iterable[int]) -> "FgAbGroup":
        """Canonical form of ⊕ Z_{o_i} for arbitrary orders (0 means Z)."""
        free, by_prime = 0, {}
        for o in orders:
            o = abs(int(o))
            if o == 0:
                free += 1
                continue
            for p, q in _prime_power_split(o):
                by_prime.setdefault(p, []).append(q)
        return cls._from_primary(free, by_prime)

    @classmethod
    def from_primary(cls, free_rank: int, parts: dict[int, Sequence[int]]) -> "FgAbGroup":
        return cls._from_primary(free_rank, {p: list(qs) for p, qs in parts.items()})

    @classmethod
    def _from_primary(cls, free: int, by_prime: dict[int, list[int]]) -> "FgAbGroup":
        for qs in by_prime.values():
            qs.sort(reverse=True)
        t = max((len(qs) for qs in by_prime.values()), default=0)
        factors = []
        for i in range(t):
            factors.append(math.prod(qs[i] for qs in by_prime.values() if i < len(qs)))
        return cls(free, tuple(sorted(factors)))

    def primary_parts(self) -> dict[int, list[int]]:
        parts: dict[int, list[int]] = {}
        for d in self.torsion:
            for p, q in _prime_power_split(d):
                parts.setdefault(p, []).append(q)
        return {p: sorted(qs) for p, qs in sorted(parts.items())}

    # structure
    @property
    def num_generators(self) -> int:
        return len(self.torsion) + self.free_rank

    @property
    def orders(self) -> tuple[int, ...]:
        """Order of each canonical generator, 0 for free ones."""
        return self.torsion + (0,) * self.free_rank

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int | None:
        return math.prod(self.torsion) if self.is_finite() else None

    def torsion_order(self) -> int:
        return math.prod(self.torsion)

    def torsion_subgroup(self) -> "FgAbGroup":
        return FgAbGroup(0, self.torsion)

    def exponent(self) -> int:
        """Exponent of the torsion subgroup."""
        return self.torsion[-1] if self.torsion else 1

    def p_primary(self, p: int) -> "FgAbGroup":
        return FgAbGroup.from_cyclic_orders(p ** _valuation(d, p) for d in self.torsion)

    def p_layer(self, p: int, j: int) -> int:
        """dim over F_p of p^{j-1}G / p^j G; each Z summand contributes 1."""
        return self.free_rank + sum(1 for d in self.torsion if _valuation(d, p) >= j)

    def direct_sum(self, other: "FgAbGroup") -> "FgAbGroup":
        return FgAbGroup.from_cyclic_orders(self.orders + other.orders)

    __add__ = direct_sum

    def relations(self) -> IntMatrix:
        g = self.num_generators
        rows = [[d if j == i else 0 for j in range(g)] for i, d in enumerate(self.torsion)]
        return IntMatrix.from_rows(rows, g)

    def elements(self) -> Iterator[tuple[int, ...]]:
        if not self.is_finite():
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.torsion))

    def __str__(self) -> str:
        parts = [f"Z_{d}" for d in self.torsion] + ["Z"] * self.free_rank
        return " ⊕ ".join(parts) if parts else "0"


def from_presentation(m: IntMatrix) -> FgAbGroup:
    """Cokernel of M: generators are columns, relations are rows."""
    diag = _smith_diagonal(m)
    rank = sum(1 for d in diag if d)
    return FgAbGroup(m.cols - rank, tuple(d for d in diag if d > 1))


def presentation_with_generators(m: IntMatrix) -> tuple[FgAbGroup, list[list[int]]]:
    """Cokernel of M plus its canonical generators as vectors over the old generators."""
    if m.rows == 0:
        eye = [[int(i == j) for j in range(m.cols)] for i in range(m.cols)]
        return FgAbGroup.free(m.cols), eye
    _, D, _, Vi = _snf(m)
    diag = [D[i][i] if i < m.rows else 0 for i in range(m.cols)]
    keep = [j for j, d in enumerate(diag) if d != 1]
    # SNF order already lists torsion ascending before the zero (free) slots
    tors = tuple(diag[j] for j in keep if diag[j])
    group = FgAbGroup(sum(1 for j in keep if diag[j] == 0), tors)
    return group, [list(Vi[j]) for j in keep]


# ------------------------------------------------------------------------ Hom

@dataclass(frozen=True)
class Hom:
    domain: FgAbGroup
    codomain: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.codomain.num_generators, self.domain.num_generators):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match generator counts "
                f"({self.codomain.num_generators}, {self.domain.num_generators})")
        cod = self.codomain.orders
        for j, d in enumerate(self.domain.orders):
            if d == 0:
                continue
            for i, e in enumerate(cod):
                x = d * self.matrix[i, j]
                if (e == 0 and x != 0) or (e and x % e):
                    raise ValueError(
                        f"generator {j} of order {d} cannot map to an element of "
                        f"order not dividing {d}")

    @classmethod
    def from_columns(cls, domain: FgAbGroup, codomain: FgAbGroup,
                     images: Sequence[Sequence[int]]) -> "Hom":
        g = codomain.num_generators
        cols = [list(v) for v in images]
        rows = [[c[i] for c in cols] for i in range(g)]
        return cls(domain, codomain, IntMatrix.from_rows(rows, len(cols)))

    @classmethod
    def zero(cls, domain: FgAbGroup, codomain: FgAbGroup) -> "Hom":
        return cls(domain, codomain,
                   IntMatrix.zeros(codomain.num_generators, domain.num_generators))

    @classmethod
    def scalar(cls, domain: FgAbGroup, codomain: FgAbGroup, c: int) -> "Hom":
        """Multiplication by c between groups with one generator each."""
        return cls(domain, codomain, IntMatrix.from_rows([[c]]))

    def compose(self, first: "Hom") -> "Hom":
        """self ∘ first."""
        if first.codomain != self.domain:
            raise ValueError("codomain/domain mismatch")
        return Hom(first.domain, self.codomain, self.matrix @ first.matrix)

    def reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        """Canonical coordinates of a codomain vector."""
        return tuple(v % e if e else v for v, e in zip(vec, self.codomain.orders))

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        m = self.matrix
        return self.reduce([sum(m[i, j] * x[j] for j in range(m.cols))
                            for i in range(m.rows)])


def _nullspace(m: IntMatrix) -> list[list[int]]:
    """Integer basis of {x : M x = 0}."""
    _, D, V, _ = _snf(m)
    rank = sum(1 for i in range(min(m.rows, m.cols)) if D[i][i])
    return [[V[r][c] for r in range(m.cols)] for c in range(rank, m.cols)]


def _lattice_basis(gens: list[list[int]], dim: int):
    """Basis rows b_i = d_i·W_i of the row lattice, plus (V, d) for coordinates."""
    if not gens:
        return [], None, []
    _, D, V, Vi = _snf(IntMatrix.from_rows(gens, dim))
    d = [D[i][i] for i in range(min(len(gens), dim)) if D[i][i]]
    basis = [[d[i] * x for x in Vi[i]] for i in range(len(d))]
    return basis, V, d


def _kernel_lattice(h: Hom) -> list[list[int]]:
    """Generators of {x ∈ Z^{g_A} : h(x) = 0 in B}."""
    gA, gB = h.domain.num_generators, h.codomain.num_generators
    rel = [(i, e) for i, e in enumerate(h.codomain.orders) if e]
    rows = []
    for i in range(gB):
        row = [h.matrix[i, j] for j in range(gA)]
        row += [-e if r == i else 0 for r, e in rel]
        rows.append(row)
    big = IntMatrix.from_rows(rows, gA + len(rel))
    return [v[:gA] for v in _nullspace(big)] if gB else \
        [[int(i == j) for j in range(gA)] for i in range(gA)]


def kernel_generators(h: Hom) -> list[list[int]]:
    """A basis of the preimage lattice of 0, in domain coordinates."""
    basis, _, _ = _lattice_basis(_kernel_lattice(h), h.domain.num_generators)
    return basis


def lattice_coordinates(basis: list[list[int]], vectors: list[list[int]]) -> list[list[int]]:
    """Integer coordinates of each vector in a basis of linearly independent rows."""
    if not vectors:
        return []
    if not basis:
        if any(any(v) for v in vectors):
            raise ArithmeticError("vector outside the zero lattice")
        return [[] for _ in vectors]
    dim = len(basis[0])
    U, D, V, _ = _snf(IntMatrix.from_rows(basis, dim))
    r = len(basis)
    d = [D[i][i] for i in range(r)]
    if any(x == 0 for x in d):
        raise ValueError("basis rows are linearly dependent")
    out = []
    for v in vectors:
        # v = c·B  <=>  v·V = (c·U^{-1})·D
        w = [sum(v[k] * V[k][i] for k in range(dim)) for i in range(dim)]
        if any(w[i] % d[i] for i in range(r)) or any(w[r:]):
            raise ArithmeticError("vector outside the lattice")
        y = [w[i] // d[i] for i in range(r)]
        out.append([sum(y[i] * U[i][j] for i in range(r)) for j in range(r)])
    return out


def kernel(h: Hom) -> FgAbGroup:
    gA = h.domain.num_generators
    basis, V, d = _lattice_basis(_kernel_lattice(h), gA)
    if not basis:
        return FgAbGroup.trivial()
    coords = []
    for rho in h.domain.relations().to_rows():
        rv = [sum(rho[k] * V[k][i] for k in range(gA)) for i in range(len(d))]
        if any(x % di for x, di in zip(rv, d)):
            raise ArithmeticError("domain relation outside the kernel lattice")
        coords.append([x // di for x, di in zip(rv, d)])
    return from_presentation(IntMatrix.from_rows(coords, len(basis)))


def image(h: Hom) -> FgAbGroup:
    gens = _kernel_lattice(h)
    return from_presentation(IntMatrix.from_rows(gens, h.domain.num_generators))


def cokernel(h: Hom) -> FgAbGroup:
    rows = h.codomain.relations().to_rows()
    rows += [h.matrix.column(j) for j in range(h.matrix.cols)]
    return from_presentation(IntMatrix.from_rows(rows, h.codomain.num_generators))


def is_surjective(h: Hom) -> bool:
    return cokernel(h).is_trivial()


def is_injective(h: Hom) -> bool:
    return kernel(h).is_trivial()


# ------------------------------------------------------- epimorphism decision

def _relevant_primes(B: FgAbGroup) -> list[int]:
    return sorted({p for d in B.torsion for p, _ in _prime_power_split(d)})


def layer_deficits(A: FgAbGroup, B: FgAbGroup, p: int) -> list[tuple[int, int, int]]:
    """Layers j where B needs more than A provides: (j, layer_A, layer_B)."""
    depth = max((_valuation(d, p) for d in B.torsion), default=0)
    out = []
    for j in range(1, depth + 1):
        a, b = A.p_layer(p, j), B.p_layer(p, j)
        if b > a:
            out.append((j, a, b))
    return out


def exists_epimorphism(A: FgAbGroup, B: FgAbGroup) -> bool:
    """Whether B is isomorphic to a quotient of A, by layered p-rank comparison."""
    if B.free_rank > A.free_rank:
        return False
    return not any(layer_deficits(A, B, p) for p in _relevant_primes(B))


# ------------------------------------------------------------ brute-force oracle

FINITE_ORDER_LIMIT = 2**10
CANDIDATE_LIMIT = 2**20
PROBE_BOX = 8


def _finite_epi_search(A: FgAbGroup, B: FgAbGroup,
                       should_cancel: Callable[[], bool] | None) -> bool:
    # elements of B encoded by mixed radix over its invariant factors
    mods = B.torsion
    size = math.prod(mods)
    elems = list(itertools.product(*(range(d) for d in mods)))
    index = {e: i for i, e in enumerate(elems)}
    add = [[index[tuple((x + y) % d for x, y, d in zip(a, b, mods))] for b in elems]
           for a in elems]
    order = []
    for i in range(size):
        k, cur = 1, i
        while cur != 0:
            cur = add[cur][i]
            k += 1
        order.append(k if i else 1)

    # allowed images: order must divide the generator's order (free: anything)
    gens = sorted(A.orders, key=lambda d: (d == 0, d), reverse=True)
    allowed = [[x for x in range(size) if d == 0 or d % order[x] == 0] for d in gens]
    reach = [max((order[x] for x in xs), default=1) for xs in allowed]
    tail = [1] * (len(gens) + 1)
    for i in range(len(gens) - 1, -1, -1):
        tail[i] = tail[i + 1] * reach[i]

    closures: dict[tuple[frozenset, int], frozenset] = {}

    def extend(H: frozenset, x: int) -> frozenset:
        key = (H, x)
        got = closures.get(key)
        if got is None:
            out, cur = set(H), x
            while cur not in H:
                out.update(add[h][cur] for h in H)
                cur = add[cur][x]
            got = closures[key] = frozenset(out)
        return got

    seen = set()
    stack = [(0, frozenset([0]))]
    steps = 0
    while stack:
        i, H = stack.pop()
        if len(H) == size:
            return True
        if i == len(gens) or len(H) * tail[i] < size or (i, H) in seen:
            continue
        seen.add((i, H))
        steps += 1
        if should_cancel is not None and steps % 256 == 0 and should_cancel():
            raise OracleCancelled("epimorphism search cancelled")
        for x in allowed[i]:
            stack.append((i + 1, extend(H, x)))
    return False


def _mixed_epi_search(A: FgAbGroup, B: FgAbGroup, box: int,
                      should_cancel: Callable[[], bool] | None) -> bool:
    tors = list(B.torsion_subgroup().elements())
    free_box = list(itertools.product(range(-box, box + 1), repeat=B.free_rank))
    choices = []
    for d in A.orders:
        if d == 0:
            choices.append([t + f for t in tors for f in free_box])
        else:
            zero = (0,) * B.free_rank
            choices.append([t + zero for t in tors
                            if all((d * x) % e == 0 for x, e in zip(t, B.torsion))])
    if math.prod(len(c) for c in choices) > CANDIDATE_LIMIT:
        raise OracleInapplicable("more than 2^20 hom candidates")
    for step, images in enumerate(itertools.product(*choices)):
        if should_cancel is not None and step % 256 == 0 and should_cancel():
            raise OracleCancelled("epimorphism search cancelled")
        if is_surjective(Hom.from_columns(A, B, images)):
            return True
    return False


def brute_force_epi_oracle(A: FgAbGroup, B: FgAbGroup, *,
                           should_cancel: Callable[[], bool] | None = None,
                           box: int = PROBE_BOX) -> bool:
    """Exhaustive search for a surjection A -> B by generator images.

    Finite targets are searched exactly, merging partial assignments that
    generate the same subgroup. Targets with a free part are searched with
    free coordinates restricted to [-box, box]. Raises OracleInapplicable
    outside the probe bounds instead of guessing.
    """
    if B.is_trivial():
        return True
    if A.free_rank > 2 or B.free_rank > 2:
        raise OracleInapplicable("free ranks above 2 are not probed")
    if A.torsion_order() > FINITE_ORDER_LIMIT or B.torsion_order() > FINITE_ORDER_LIMIT:
        raise OracleInapplicable("torsion too large for exhaustive search")
    # torsion generators land in torsion, so free images need free generators
    if B.free_rank > A.free_rank:
        return False
    if B.is_finite():
        if A.is_finite() and A.order() % B.order():
            return False
        return _finite_epi_search(A, B, should_cancel)
    return _mixed_epi_search(A, B, box, should_cancel)


# ----------------------------------------------------------------- enumeration

def _partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    largest = n if largest is None else largest
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield (k,) + rest


def abelian_groups_of_order(n: int) -> list[FgAbGroup]:
    """Every finite abelian group of order n, up to isomorphism."""
    per_prime = []
    for p, q in _prime_power_split(n):
        e = _valuation(q, p)
        per_prime.append([[p**k for k in part] for part in _partitions(e)])
    groups = []
    for combo in itertools.product(*per_prime):
        groups.append(FgAbGroup.from_cyclic_orders(x for part in combo for x in part))
    return groups
