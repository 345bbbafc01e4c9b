import pytest
from hypothesis import given, settings, strategies as st

from fiblab.fgab import FgAbGroup, IntMatrix
from fiblab.serre import (BigradedPage, DifferentialRecord, FibrationModel, Kind, NotDivisible,
                          PageIndexError, apply_d2k, apply_d4k1, apply_transgression, build_E2,
                          cohomology_to_homology, fiber_homology, homology_to_cohomology,
                          hopf_action, hopf_lambda_is_pm_square, lambda_of_extension,
                          normalize_hopf, normalize_hopf_table, replay_fiber,
                          sphere_bundle_total_space, sphere_fiber_check)

Z = FgAbGroup.free()


def _fmt(groups):
    return [(d, str(g)) for d, g in groups]


def test_fiber_homology_frozen():
    assert _fmt(fiber_homology(2, 3, 14)) == [(3, "Z"), (6, "Z_3"), (9, "Z_3"), (12, "Z_3")]
    assert _fmt(fiber_homology(2, -2, 12)) == [(3, "Z"), (6, "Z_2"), (9, "Z_2"), (12, "Z_2")]
    assert _fmt(fiber_homology(2, 1, 20)) == [(3, "Z")]
    # λ = 0: the d_{4k-1} differential vanishes, so the free classes in degree 3j+1 survive
    assert _fmt(fiber_homology(2, 0, 10)) == [(3, "Z"), (6, "Z"), (7, "Z"), (9, "Z"), (10, "Z")]


def test_sphere_fiber_detection():
    assert sphere_fiber_check(2, 1) and sphere_fiber_check(3, -1)
    assert not sphere_fiber_check(2, 2) and not sphere_fiber_check(2, 0)


def test_sphere_bundle_total_space():
    assert _fmt(sphere_bundle_total_space(2, 3)) == [(0, "Z"), (4, "Z_3"), (7, "Z")]
    assert _fmt(sphere_bundle_total_space(3, 1)) == [(0, "Z"), (11, "Z")]


def test_normalize_hopf_witness_example():
    w = normalize_hopf(2, 5, 4)
    assert (w.u, w.h, w.sign, w.lifted_lambda) == (1, -1, -1, 4)
    assert w.check() and w.realized_hopf() == -5
    assert normalize_hopf(2, 5, 2) is None


def test_transgression_on_loop_fibration():
    model = FibrationModel(Kind.LOOP_FIBER_OVER_TOP_SPHERE, 2, hopf=3)
    page = apply_transgression(build_E2(model, 12), model)
    assert page.group(7, 0) == FgAbGroup.cyclic(3)
    assert page.group(0, 6).is_trivial()
    assert page.differential_log[0].format() == "d 7: (0,6)->(7,0) matrix=[[3]]"


def test_page_order_is_enforced():
    model = FibrationModel(Kind.LOOP_FIBER_OVER_X, 2, 3, 1)
    e2 = build_E2(model, 12)
    with pytest.raises(PageIndexError):
        apply_d4k1(e2, model, 1)
    e5 = apply_d2k(e2, model)
    with pytest.raises(PageIndexError):
        apply_d2k(e5, model)
    with pytest.raises(PageIndexError):
        apply_transgression(e2, model)


def test_page_validation():
    with pytest.raises(ValueError):
        BigradedPage(1, {}, 5)
    with pytest.raises(ValueError):
        FibrationModel(Kind.LOOP_FIBER_OVER_X, 2, None, 1)
    bad = DifferentialRecord(3, (0, 4), (2, 2), IntMatrix.from_rows([[1]]))
    with pytest.raises(ValueError):
        BigradedPage(3, {}, 10, (bad,))


def test_lambda_of_extension():
    assert lambda_of_extension(12, 4) == 3
    with pytest.raises(NotDivisible):
        lambda_of_extension(13, 4)
    with pytest.raises(NotDivisible):
        lambda_of_extension(1, 0)


@given(st.integers(2, 3), st.integers(1, 6), st.integers(-6, 12))
@settings(max_examples=60, deadline=None)
def test_replay_matches_closed_form(k, n, lam):
    top = 4 * k + 2 * (2 * k - 1)
    assert list(replay_fiber(k, n, lam, top).homology) == fiber_homology(k, lam, top)


@given(st.integers(2, 6), st.integers(-30, 30), st.integers(5, 40))
def test_universal_coefficients_roundtrip(k, lam, top):
    hom = fiber_homology(k, lam, top)
    coh = homology_to_cohomology(hom, top)
    back = [(d, g) for d, g in cohomology_to_homology(coh, top - 1) if d > 0]
    assert back == [(d, g) for d, g in hom if d <= top - 1]


@given(st.integers(2, 6), st.integers(-30, 30))
def test_fiber_is_sphere_iff_lambda_is_unit(k, lam):
    assert sphere_fiber_check(k, lam) == (abs(lam) == 1)


@given(st.integers(-10**6, 10**6), st.integers(1, 10**3),
       st.integers(-10**3, 10**3), st.integers(-10**3, 10**3))
def test_hopf_action_is_affine(h0, n, a, b):
    assert hopf_action(hopf_action(h0, n, a), n, b) == hopf_action(h0, n, a + b)
    assert lambda_of_extension(hopf_action(n * h0, n, a), n) == h0 + n * a


@given(st.integers(2, 6), st.integers(1, 120), st.integers())
@settings(deadline=None)
def test_normalize_hopf_witnesses_check(k, n, lam):
    w = normalize_hopf(k, n, lam)
    assert (w is not None) == bool(normalize_hopf_table(k, n)[lam % n])
    if w is not None:
        assert w.check()
        assert w.lifted_lambda % n == lam % n


@given(st.integers(1, 200), st.integers())
def test_witness_exists_iff_pm_square_for_h_space_spheres(n, lam):
    for k in (2, 4):
        assert (normalize_hopf(k, n, lam) is not None) == hopf_lambda_is_pm_square(n, lam)
