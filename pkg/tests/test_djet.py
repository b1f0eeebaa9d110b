import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pjet.djet import (
    DELTA,
    DELTA1,
    Ambient,
    DeltaPolynomial,
    JetOrderError,
    JetVariable,
    RingMapSpec,
    UnboundVariableError,
    apply_map,
    compose_maps,
    jet_ambient,
    jet_eval,
    prolong,
    prolong_frobenius,
    random_poly,
    square_rings,
    verify_jet_square,
)
from pjet.padic import PrecisionError

from conftest import make_ring


def base_poly(amb, rng, degree, nterms, nbase=1):
    """Random polynomial in the first nbase order-0 variables, lifted into amb."""
    sub = Ambient(amb.ring, amb.variables[:nbase], degree)
    f = random_poly(sub, rng, degree, nterms)
    pad = (0,) * (amb.nvars - nbase)
    return DeltaPolynomial(amb, {e + pad: c for e, c in f.terms.items()}, f.prec)


def test_variable_names_roundtrip():
    for text in ["T0", "T0'", "T0''", "T0'1", "T0''1", "T3'1'", "T0'@2"]:
        assert str(JetVariable.parse(text)) == text
    v = JetVariable.parse("T0''1")
    assert v.word == (DELTA, DELTA1) and v.jet_order == 2
    with pytest.raises(ValueError):
        JetVariable.parse("X0")


def test_prolong_examples():
    ring = make_ring(5, 4)
    A = jet_ambient(ring, 1, 2, max_degree=10)
    T, Tp, Tpp = A.gens()
    assert prolong(T) == Tp.with_prec(3)
    assert prolong(Tp) == Tpp.with_prec(3)
    c = ring(7)
    assert prolong(A.const(c)) == A.const(c.delta())
    expected = (T**5 * Tp).scale(2) + (Tp * Tp).scale(5)
    assert prolong(T * T) == expected.with_prec(3)
    # cross-check the T^2 formula at 20 random points
    rng = random.Random(0)
    for _ in range(20):
        a = ring.random(rng)
        assert jet_eval(expected.with_prec(3), a) == (a * a).delta()


def test_prolong_errors():
    ring = make_ring(5, 4)
    A = jet_ambient(ring, 1, 1, max_degree=10)
    with pytest.raises(JetOrderError):
        prolong(A.var("T0'"))
    B = jet_ambient(make_ring(5, 4), 1, 2, max_degree=10)
    with pytest.raises(PrecisionError):
        prolong(B.var("T0", prec=1))


def test_prolong_jet_eval_compatibility():
    # degree-5 polynomials in T, T'; ambient degree 5p so nothing is cut
    ring = make_ring(5, 4)
    A = jet_ambient(ring, 1, 2, max_degree=25)
    rng = random.Random(1)
    for _ in range(30):
        f = random_poly(Ambient(ring, A.variables[:2], 5), rng, 5, 4)
        f = DeltaPolynomial(A, {e + (0,): c for e, c in f.terms.items()}, f.prec)
        a = ring.random(rng)
        assert jet_eval(prolong(f), a) == jet_eval(f, a).delta()


def test_prolong_routes_agree_d2():
    ring = make_ring(3, 4, 2)
    A = jet_ambient(ring, 2, 1, max_degree=9)
    rng = random.Random(2)
    for _ in range(10):
        f = base_poly(A, rng, 3, 4, nbase=2)
        assert prolong(f) == prolong_frobenius(f)
        a, b = ring.random(rng), ring.random(rng)
        assert jet_eval(prolong(f), (a, b)) == jet_eval(f, (a, b)).delta()


def test_fold_order_independent():
    ring = make_ring(3, 4)
    A = jet_ambient(ring, 2, 1, max_degree=8)
    rng = random.Random(3)
    for _ in range(20):
        f = base_poly(A, rng, 2, 4, nbase=2)
        assert prolong(f, fold="left") == prolong(f, fold="right")


@given(st.integers(0, 10**6), st.sampled_from([3, 5]))
def test_leibniz_and_sum_laws(seed, p):
    ring = make_ring(p, 4)
    A = jet_ambient(ring, 1, 1, max_degree=8)
    rng = random.Random(seed)
    f, g = base_poly(A, rng, 2, 3), base_poly(A, rng, 2, 3)
    df, dg = prolong(f), prolong(g)
    assert prolong(f * g) == (f**p) * dg + (g**p) * df + (df * dg).scale(p)
    from pjet.witt import cp_eval

    assert prolong(f + g) == df + dg + cp_eval(f, g, p)


def test_truncation_invariants():
    ring = make_ring(5, 3)
    A = jet_ambient(ring, 1, 1, max_degree=3)
    T, Tp = A.gens()
    f = T**2 * Tp**2 + T**3
    assert all(A.wdeg(e) <= 3 for e in f.terms)
    assert (T - T).terms == {}
    g = DeltaPolynomial(A, {(1, 0): 125, (0, 1): 3}, 3)
    assert list(g.terms) == [(0, 1)]


def test_jet_eval_examples():
    ring = make_ring(5, 4)
    A = jet_ambient(ring, 1, 2, max_degree=10)
    rng = random.Random(4)
    for _ in range(10):
        a = ring.random(rng)
        assert jet_eval(A.var("T0'"), a) == a.delta()
        assert jet_eval(A.var("T0''"), a) == a.delta().delta()
        assert jet_eval(A.const(17), a) == ring(17)
        assert jet_eval(A.var("T0''"), a).prec == 2
    with pytest.raises(PrecisionError):
        jet_eval(A.var("T0''"), ring(3, 2))


@given(st.integers(0, 10**6))
def test_jet_eval_is_ring_hom(seed):
    ring = make_ring(3, 4)
    A = jet_ambient(ring, 1, 1, max_degree=None)
    rng = random.Random(seed)
    f, g = random_poly(A, rng, 3, 3), random_poly(A, rng, 3, 3)
    a = ring.random(rng)
    assert jet_eval(f * g, a) == jet_eval(f, a) * jet_eval(g, a)
    assert jet_eval(f + g, a) == jet_eval(f, a) + jet_eval(g, a)


def test_apply_map_examples():
    ring = make_ring(3, 3)
    sq = square_rings(ring, 6)
    tl, left = sq["tl"], sq["left"]
    assert apply_map(RingMapSpec.identity(tl), tl.var("T0''1")) == tl.var("T0''1")
    assert apply_map(left, tl.var("T0''1")) == sq["bl"].var("T0''")
    assert apply_map(left, tl.var("T0'1")) == sq["bl"].var("T0'")
    with pytest.raises(UnboundVariableError):
        apply_map(RingMapSpec(tl, tl, {}), tl.var("T0"))


def test_apply_map_functorial():
    ring = make_ring(3, 3)
    sq = square_rings(ring, 6)
    rng = random.Random(5)
    composite = compose_maps(sq["left"], sq["top"])
    for _ in range(20):
        f = random_poly(sq["tr"], rng, 3, 5)
        assert apply_map(composite, f) == apply_map(sq["left"], apply_map(sq["top"], f))


def test_frobenius_twist_map_d2():
    ring = make_ring(5, 3, 2)
    A = jet_ambient(ring, 1, 0, max_degree=4)
    f = DeltaPolynomial(A, {(1,): ring.xi.coeffs}, 3)
    g = apply_map(RingMapSpec(A, A, {JetVariable(0): A.var("T0")}, twist=1), f)
    assert g.coefficient((1,)) == ring.xi.frobenius()


def test_diagram_generators():
    ring = make_ring(3, 3)
    sq = square_rings(ring, 6)
    for name in ["T0", "T0'@1", "T0'@2"]:
        g = sq["tr"].var(name)
        a = apply_map(sq["left"], apply_map(sq["top"], g))
        b = apply_map(sq["bottom"], apply_map(sq["right"], g))
        assert a == b
    # 1 (x) dT goes to d1T on top, then to dT on the left
    assert apply_map(sq["top"], sq["tr"].var("T0'@2")) == sq["tl"].var("T0'1")
    rep = verify_jet_square(6, 3, 3)
    assert rep.ok and rep.mismatches == []
    assert rep.checked_generators == ["T0", "T0'@1", "T0'@2"]


def test_diagram_detects_broken_map():
    import pjet.djet as djet

    ring = make_ring(3, 3)
    sq = square_rings(ring, 4)
    bl = sq["bl"]
    broken = dict(sq["left"].assignment)
    broken[JetVariable.parse("T0''1")] = bl.var("T0'")  # should be T0''
    sq_left = RingMapSpec(sq["tl"], bl, broken)
    images = {v: djet._variable_image(sq_left, v) for v in sq["tl"].variables}
    assert len(set(images.values())) < len(images)


def test_diagram_two_coordinates():
    rep = verify_jet_square(4, 5, 3, n_base=2, samples=3)
    assert rep.ok


def test_json_roundtrip():
    ring = make_ring(5, 4)
    A = jet_ambient(ring, 1, 2, max_degree=10)
    T, Tp, Tpp = A.gens()
    f = T**2 * Tp + Tpp.scale(7) + 3
    obj = f.to_json()
    assert obj["terms"]["T0^2*T0'"] == ["1"]
    assert obj["terms"]["1"] == ["3"]
    assert DeltaPolynomial.from_json(A, obj) == f
