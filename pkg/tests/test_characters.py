import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pjet.characters import (
    T0,
    T0p,
    T0pp,
    T1,
    T1p,
    DeltaPoint2,
    Verdict,
    curve_report,
    default_degree,
    genuine_point,
    k_eff_for,
    l11delta_eval,
    order1_additivity,
    order1_character_search,
    prolonged_group_law,
    psi2_build,
    psi2_eval,
    psi2_is_additive,
)
from pjet.elliptic import WeierstrassCurve, count_points_fp
from pjet.padic import PrecisionError


@pytest.fixture(scope="module")
def curve():
    return WeierstrassCurve.from_ints(7, 0, 1, 4)


@pytest.fixture(scope="module")
def law(curve):
    return prolonged_group_law(curve, 6)


def test_bounds_helpers():
    assert default_degree(6, 7) == 8
    assert k_eff_for(6, 10, 7) == 3
    assert k_eff_for(6, 6, 7) == 4


def test_prolonged_law_matches_direct_jets(curve, law):
    rng = random.Random(0)
    for _ in range(20):
        a = DeltaPoint2.jet(genuine_point(curve.ring, rng))
        b = DeltaPoint2.jet(genuine_point(curve.ring, rng))
        c, c1, c2 = law.jets_of_sum(a, b)
        assert c1 == c.delta()
        assert c2 == c.delta().delta()


def test_structural_and_closed_form_agree(curve):
    a = prolonged_group_law(curve, 5, order=1, jet_weight=1, structural=True)
    b = prolonged_group_law(curve, 5, order=1, jet_weight=1, structural=False)
    assert a.F1 == b.F1


def test_weight0_window_needs_degree(curve):
    with pytest.raises(PrecisionError):
        prolonged_group_law(curve, 3)


def test_fiber_law_is_addition(law):
    # on the fiber t = s = 0 the J^1 law is t' + s'
    A = law.ambient
    z = A.zero()
    fiber = law.F1.substitute({T0: z, T1: z, T0p: A.var(T0p), T1p: A.var(T1p)}, A)
    assert fiber == (A.var(T0p) + A.var(T1p)).with_prec(fiber.prec)


@pytest.mark.parametrize("p,a4,a6", [(7, 0, 1), (5, 0, 1), (7, 2, 3)])
def test_psi2_shape(p, a4, a6):
    E = WeierstrassCurve.from_ints(p, a4, a6, 4)
    psi = psi2_build(E)
    assert psi.integral and psi.t2_divisible
    assert psi.t2_coefficient == E.ring(p)
    assert psi.tprime_coefficient == E.ring(-psi.a_p)
    assert psi.shape_ok()


def test_psi2_zero_jet(curve):
    psi = psi2_build(curve)
    assert psi.poly.constant_term().is_zero()
    zero = DeltaPoint2.jet(curve.ring.zero)
    assert psi2_eval(psi, zero).is_zero()


def test_psi2_additive_small(curve, law):
    psi = psi2_build(curve, 6)
    rep = psi2_is_additive(curve, psi, trials=10, seed=1, law=law)
    assert rep.jets_agree and rep.inverse_ok
    assert rep.ok, rep.failures


def test_psi2_sees_perturbation(curve):
    # off the genuine jets the t'' coefficient p is visible
    psi = psi2_build(curve, 6)
    t = curve.ring(7 * 3)
    a = DeltaPoint2.jet(t)
    b = DeltaPoint2(a.t, a.t1, a.t2 + 1)
    assert (psi2_eval(psi, b) - psi2_eval(psi, a)).valuation() == 1


def test_l11delta_genuine_jets_vanish(curve, law):
    rng = random.Random(2)
    for _ in range(20):
        t = genuine_point(curve.ring, rng)
        d = t.delta()
        assert l11delta_eval(law, t, d, d).is_zero()


def test_l11delta_fiber_exact(curve, law):
    # (t, t1) = (t, t') + (0, u) gives u back
    rng = random.Random(3)
    r = curve.ring
    for _ in range(20):
        t = genuine_point(r, rng)
        tp, u = r(rng.randrange(7**4), 3), r(rng.randrange(7**4), 3)
        t1 = law.F1.evaluate({T0: t, T1: r.zero, T0p: tp, T1p: u})
        assert l11delta_eval(law, t, tp, t1) == u.with_prec(3)
    with pytest.raises(PrecisionError):
        l11delta_eval(law, r(7), r(1, 2), r(1, 2))


@given(st.integers(1, 7**3 - 1), st.integers(1, 7**3 - 1))
@settings(max_examples=30)
def test_l11delta_nonzero_off_jets(curve, law, a, e):
    r = curve.ring
    t = r(7 * a)
    d = t.delta()
    assert not l11delta_eval(law, t, d, d + r(e, 3)).is_zero()


def test_order1_zero_in_kernel(curve):
    res = order1_character_search(curve, 4, 4, 3)
    assert res.unknowns and res.equations > 0
    assert res.kernel_log_size >= res.nontrivial_log_size >= 0
    # generator orders are bounded by the working precision
    for vec, order in res.kernel:
        assert 1 <= order <= 3
    obj = res.to_json()
    assert obj["unknowns"] == len(res.unknowns)


def test_order1_found_character_is_additive():
    E = WeierstrassCurve.from_ints(7, 0, 1, 4)
    res = order1_character_search(E, 8, 8, 4)
    assert res.nonzero and res.nonzero_tprime
    chk = order1_additivity(E, res, trials=10, seed=0)
    assert chk["ok"] and chk["min_digits"] >= 4


def test_order1_tprime_unit_iff_ordinary():
    # ordinary curves give t - u t' + ... with u = a_p mod p; the window must reach t-degree p
    # to see the Witt term C_p(t, s) of F1, otherwise t' alone looks additive
    for p, a4, a6 in [(7, 0, 1), (7, 2, 3), (5, 0, 1)]:
        E = WeierstrassCurve.from_ints(p, a4, a6, 4)
        res = order1_character_search(E, 8, 6, 3)
        ap = count_points_fp(E)
        assert (res.tprime_valuation == 0) == (ap % p != 0)
        if ap % p:
            coeff = int(res.best["T0'"][0])
            assert (-coeff - ap) % p == 0


def test_order1_window_guard(curve):
    with pytest.raises(ValueError):
        order1_character_search(curve, 3, 3, 3)


def test_curve_report_small():
    E = WeierstrassCurve.from_ints(5, 0, 1, 4)
    rep = curve_report(E, kprime=3, degree_t=4, degree_tp=4, trials=5)
    obj = rep.to_json()
    assert obj["a_p"] == 0 and not obj["is_ordinary"]
    assert obj["verdict"] == Verdict.INCONCLUSIVE.value
    assert obj["psi2"]["checks"]["shape_ok"]
    assert obj["additivity"]["ok"]
    assert set(obj["bounds"]) == {"degree", "k", "kprime", "degree_t", "degree_tprime", "k_eff"}
