import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from pjet.padic import (
    NonUnitError,
    PrecisionError,
    RingError,
    RingParams,
    default_modulus,
    elements,
    frobenius,
    inv,
    p_derivation,
    ring_new,
)

from conftest import make_ring

RINGS = [(3, 5, 1), (5, 4, 1), (7, 4, 1), (3, 4, 2), (5, 4, 2), (7, 3, 2), (3, 3, 3)]


def elements_of(ring):
    return st.lists(st.integers(0, ring.N - 1), min_size=ring.d, max_size=ring.d).map(ring)


def test_ring_new_examples():
    r = ring_new(RingParams(3, 5))
    assert (r.p, r.d, r.k, r.N) == (3, 1, 5, 243)
    r2 = ring_new(RingParams(5, 4, 2, (2, 4, 1)))
    assert r2.d == 2
    # X^2 + 4X + 2 has no roots mod 5, so it is irreducible
    assert all((x * x + 4 * x + 2) % 5 for x in range(5))


def test_ring_new_errors():
    with pytest.raises(RingError, match="p not prime"):
        ring_new(RingParams(4, 3))
    with pytest.raises(RingError, match="k must be >= 2"):
        ring_new(RingParams(3, 1))
    with pytest.raises(RingError, match="reducible"):
        ring_new(RingParams(5, 3, 2, (4, 0, 1)))  # X^2 - 1
    with pytest.raises(RingError):
        ring_new(RingParams(5, 3, 2, None))
    with pytest.raises(RingError):
        ring_new(RingParams(2, 3))


def test_default_modulus_irreducible():
    x = sympy.Symbol("x")
    for p in (3, 5, 7, 11):
        for d in (1, 2, 3):
            m = default_modulus(p, d)
            assert len(m) == d + 1 and m[-1] == 1
            assert sympy.Poly(list(reversed(m)), x, modulus=p).is_irreducible


@pytest.mark.parametrize("p,k,d", RINGS)
def test_frobenius_is_ring_hom(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(p * 100 + d)
    for _ in range(100):
        a, b = ring.random(rng), ring.random(rng)
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)
        assert frobenius(a).with_prec(1) == (a**p).with_prec(1)
    assert frobenius(ring.one) == ring.one


@pytest.mark.parametrize("p,k,d", RINGS)
def test_frobenius_order_d(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(7)
    for _ in range(20):
        a = ring.random(rng)
        b = a
        for _ in range(d):
            b = frobenius(b)
        assert b == a
        if d > 1:
            assert not frobenius(ring.xi) == ring.xi


def test_frobenius_d1_is_identity():
    ring = make_ring(5, 4)
    for a in elements(ring, 2):
        assert frobenius(a) == a


def test_frobenius_of_xi_is_root():
    ring = ring_new(RingParams(5, 4, 2, (2, 4, 1)))
    r = frobenius(ring.xi)
    assert r * r + 4 * r + 2 == ring.zero
    assert r.with_prec(1) == (ring.xi**5).with_prec(1)
    assert frobenius(r) == ring.xi


def test_delta_examples():
    ring = make_ring(3, 4)
    assert p_derivation(ring.zero) == ring.zero
    assert p_derivation(ring.one) == ring.zero
    d2 = p_derivation(ring(2))
    assert d2.prec == 3 and d2 == ring(-2, 3)
    for p in (3, 5, 7):
        r = make_ring(p, 5)
        assert p_derivation(r(p)) == r(1 - p ** (p - 1), 4)
    with pytest.raises(PrecisionError):
        p_derivation(ring(2, 1))


@pytest.mark.parametrize("p,k,d", RINGS)
def test_ring_axioms(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(11)
    for _ in range(100):
        a, b, c = ring.random(rng), ring.random(rng), ring.random(rng)
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)
        assert a + (-a) == ring.zero
        assert a * b == b * a


def test_inverse_examples():
    ring = make_ring(3, 4)
    assert inv(ring(2)).coeffs == (41,)
    with pytest.raises(NonUnitError):
        inv(ring(3))
    rng = random.Random(3)
    for p, k, d in RINGS:
        r = make_ring(p, k, d)
        for _ in range(20):
            u = r.random_unit(rng)
            assert u * inv(u) == r.one


def test_precision_is_min():
    ring = make_ring(5, 4)
    a, b = ring(7, 2), ring(3, 4)
    assert (a + b).prec == 2 and (a * b).prec == 2
    assert ring(7, 2) == ring(32, 4)  # agree mod 25
    assert not ring(7, 4) == ring(32, 4)
    with pytest.raises(PrecisionError):
        a.with_prec(3)


def test_json_roundtrip():
    ring = make_ring(5, 4, 2)
    a = ring([3, 17], 3)
    b = ring.from_json(a.to_json())
    assert b == a and b.prec == 3
    assert a.to_json() == {"digits": ["3", "17"], "prec": 3}


@given(st.data())
def test_delta_laws_property(data):
    p, k, d = data.draw(st.sampled_from(RINGS))
    ring = make_ring(p, k, d)
    a = data.draw(elements_of(ring))
    b = data.draw(elements_of(ring))
    from pjet.witt import cp_eval

    assert (a + b).delta() == a.delta() + b.delta() + cp_eval(a, b, p)
    assert (a * b).delta() == (a**p) * b.delta() + (b**p) * a.delta() + p * a.delta() * b.delta()
    assert a.frobenius() == a**p + p * a.delta()
