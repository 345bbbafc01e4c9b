import itertools
import math

import pytest
from hypothesis import assume, given, settings, strategies as st

from fiblab.fgab import (FgAbGroup, Hom, IntMatrix, OracleInapplicable, abelian_groups_of_order,
                         brute_force_epi_oracle, cokernel, exists_epimorphism, from_presentation,
                         image, is_injective, is_surjective, kernel, kernel_generators,
                         layer_deficits, lattice_coordinates, presentation_with_generators,
                         smith_normal_form)

small = st.integers(min_value=-12, max_value=12)


@st.composite
def matrices(draw, max_dim=4):
    r = draw(st.integers(1, max_dim))
    c = draw(st.integers(1, max_dim))
    return IntMatrix.from_rows(draw(st.lists(st.lists(small, min_size=c, max_size=c),
                                             min_size=r, max_size=r)))


@st.composite
def finite_groups(draw, max_order=64):
    n = draw(st.integers(1, max_order))
    return draw(st.sampled_from(abelian_groups_of_order(n)))


def _brute_cokernel_order(m: IntMatrix) -> int:
    # |Z^c / row lattice| = gcd of maximal minors when full rank
    r, c = m.shape
    minors = [IntMatrix.from_rows([[m[i, j] for j in range(c)] for i in rows]).det()
              for rows in itertools.combinations(range(r), c)]
    return math.gcd(*minors) if minors else 0


def test_snf_textbook_example():
    M = IntMatrix.from_rows([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    U, D, V = smith_normal_form(M)
    assert D.to_rows() == [[2, 0, 0], [0, 6, 0], [0, 0, 12]]
    assert str(from_presentation(M)) == "Z_2 ⊕ Z_6 ⊕ Z_12"


def test_matrix_text_roundtrip():
    M = IntMatrix.parse("2 3\n1 -2 3 4 5 -6")
    assert M.to_rows() == [[1, -2, 3], [4, 5, -6]]
    assert IntMatrix.parse(M.format()) == M
    with pytest.raises(ValueError):
        IntMatrix.parse("2 2\n1 2 3")


def test_group_canonical_forms():
    g = FgAbGroup.from_cyclic_orders([4, 6, 0])
    assert g == FgAbGroup(1, (2, 12))
    assert str(g) == "Z_2 ⊕ Z_12 ⊕ Z"
    assert g.primary_parts() == {2: [2, 4], 3: [3]}
    assert FgAbGroup.from_primary(1, g.primary_parts()) == g
    assert FgAbGroup.cyclic(1).is_trivial() and str(FgAbGroup.cyclic(1)) == "0"
    assert FgAbGroup.cyclic(0) == FgAbGroup.free()
    assert FgAbGroup.cyclic(-6) == FgAbGroup(0, (6,))
    with pytest.raises(ValueError):
        FgAbGroup(0, (4, 6))


def test_hom_rejects_order_violations():
    with pytest.raises(ValueError):
        Hom.scalar(FgAbGroup.cyclic(2), FgAbGroup.cyclic(3), 1)
    with pytest.raises(ValueError):
        Hom.scalar(FgAbGroup.cyclic(2), FgAbGroup.free(), 1)
    h = Hom.scalar(FgAbGroup.cyclic(4), FgAbGroup.cyclic(8), 2)
    assert is_injective(h) and not is_surjective(h)
    assert cokernel(h) == FgAbGroup.cyclic(2)


def test_kernel_image_of_multiplication_on_Z():
    h = Hom.scalar(FgAbGroup.free(), FgAbGroup.cyclic(12), 8)
    assert kernel(h) == FgAbGroup.free()
    assert image(h) == FgAbGroup.cyclic(3)
    assert cokernel(h) == FgAbGroup.cyclic(4)


def test_epimorphism_known_cases():
    Z, Z2, Z4 = FgAbGroup.free(), FgAbGroup.cyclic(2), FgAbGroup.cyclic(4)
    assert exists_epimorphism(Z, FgAbGroup.cyclic(504))
    assert not exists_epimorphism(Z2 + Z2, Z4)
    assert not exists_epimorphism(Z, Z2 + Z2)
    assert exists_epimorphism(Z + Z, FgAbGroup.cyclic(504) + Z)
    assert layer_deficits(Z2 + Z2, Z4, 2) == [(2, 0, 1)]


def test_oracle_limits():
    with pytest.raises(OracleInapplicable):
        brute_force_epi_oracle(FgAbGroup.free(3), FgAbGroup.free())
    with pytest.raises(OracleInapplicable):
        brute_force_epi_oracle(FgAbGroup.cyclic(2**11), FgAbGroup.cyclic(2))


def test_group_counts_by_order():
    # number of partitions of each exponent, multiplied over primes
    assert [len(abelian_groups_of_order(n)) for n in (1, 8, 16, 32, 64, 72)] == [1, 3, 5, 7, 11, 6]


@given(matrices())
def test_snf_is_a_unimodular_diagonalization(M):
    U, D, V = smith_normal_form(M)
    assert (U @ M @ V) == D
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    diag = [D[i, i] for i in range(min(D.shape))]
    assert all(D[i, j] == 0 for i in range(D.shape[0]) for j in range(D.shape[1]) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[len(nz):] == [0] * (len(diag) - len(nz))


@given(matrices())
def test_cokernel_order_matches_minors(M):
    r, c = M.shape
    assume(r >= c)
    G = from_presentation(M)
    want = _brute_cokernel_order(M)
    if want == 0:
        assert G.free_rank > 0
    else:
        assert G.is_finite() and G.order() == want


@given(matrices())
def test_presentation_generators_match_group(M):
    G, gens = presentation_with_generators(M)
    assert len(gens) == G.num_generators
    assert G == from_presentation(M)


@given(finite_groups(), finite_groups())
@settings(max_examples=150, deadline=None)
def test_epimorphism_decision_matches_oracle(A, B):
    assert exists_epimorphism(A, B) == brute_force_epi_oracle(A, B)


@given(finite_groups(), finite_groups())
def test_direct_sum_surjects_onto_summands(A, B):
    assert exists_epimorphism(A + B, A) and exists_epimorphism(A + B, B)
    assert (A + B).order() == A.order() * B.order()


@given(st.integers(0, 2), st.lists(st.integers(0, 30), max_size=3),
       st.integers(0, 2), st.lists(st.integers(0, 30), max_size=3), st.data())
@settings(max_examples=150, deadline=None)
def test_first_isomorphism_theorem(fa, ta, fb, tb, data):
    A = FgAbGroup.from_cyclic_orders([0] * fa + ta)
    B = FgAbGroup.from_cyclic_orders([0] * fb + tb)
    assume(A.num_generators and B.num_generators)
    cols = []
    for d in A.orders:
        col = []
        for e in B.orders:
            if d == 0:
                col.append(data.draw(st.integers(-5, 5)))
            elif e == 0:
                col.append(0)
            else:
                # multiples of e / gcd(d, e) are the legal images of an order-d generator
                step = e // math.gcd(d, e)
                col.append(step * data.draw(st.integers(0, 5)))
        cols.append(col)
    h = Hom.from_columns(A, B, cols)
    K, I, C = kernel(h), image(h), cokernel(h)
    assert K.free_rank + I.free_rank == A.free_rank
    assert I.free_rank + C.free_rank == B.free_rank
    if A.is_finite():
        assert K.order() * I.order() == A.order()
    if B.is_finite():
        assert I.order() * C.order() == B.order()
    for v in kernel_generators(h):
        assert all(x == 0 for x in h(v))
    assert is_surjective(h) == C.is_trivial()


@given(st.lists(st.lists(st.integers(-6, 6), min_size=3, max_size=3), min_size=1, max_size=3),
       st.lists(st.integers(-4, 4), min_size=1, max_size=3))
def test_lattice_coordinates_recover_combinations(basis, coeffs):
    B = IntMatrix.from_rows(basis)
    assume(from_presentation(B).free_rank == 3 - len(basis))  # independent rows
    coeffs = coeffs[:len(basis)] + [0] * (len(basis) - len(coeffs))
    v = [sum(c * row[i] for c, row in zip(coeffs, basis)) for i in range(3)]
    assert lattice_coordinates(basis, [v]) == [coeffs]
