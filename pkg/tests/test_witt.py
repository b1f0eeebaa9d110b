import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from pjet.witt import WittPair, cp_eval, cp_polynomial, ghost, is_p_derivation, witt_add, witt_mul

from conftest import make_ring


def rand_pair(ring, rng, p):
    return WittPair(ring.random(rng), ring.random(rng), p)


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_cp_coefficients(p):
    cp = cp_polynomial(p)
    X, Y = sympy.symbols("X Y")
    poly = sum(c * X**i * Y**j for (i, j), c in cp.coefficients)
    assert sympy.expand(p * poly - (X**p + Y**p - (X + Y) ** p)) == 0
    assert cp_eval(5, 0, p) == 0 and cp_eval(0, 5, p) == 0


def test_witt_add_example():
    x = WittPair(1, 0, 3)
    s = witt_add(x, x)
    assert (s.a0, s.a1) == (2, -2)
    ring = make_ring(3, 4)
    z = WittPair(ring(5), ring(7), 3)
    zero = WittPair(ring.zero, ring.zero, 3)
    s = witt_add(z, zero)
    assert s.a0 == z.a0 and s.a1 == z.a1


@pytest.mark.parametrize("p,k,d", [(3, 5, 1), (5, 4, 2)])
def test_ghost_additive(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(1)
    for _ in range(100):
        x, y = rand_pair(ring, rng, p), rand_pair(ring, rng, p)
        gs, gx, gy = ghost(witt_add(x, y)), ghost(x), ghost(y)
        assert gs[0] == gx[0] + gy[0] and gs[1] == gx[1] + gy[1]


@pytest.mark.parametrize("p,k,d", [(3, 5, 1), (7, 4, 2)])
def test_ghost_multiplicative(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(2)
    for _ in range(100):
        x, y = rand_pair(ring, rng, p), rand_pair(ring, rng, p)
        gm, gx, gy = ghost(witt_mul(x, y)), ghost(x), ghost(y)
        assert gm[0] == gx[0] * gy[0] and gm[1] == gx[1] * gy[1]


def test_witt_identities():
    ring = make_ring(5, 4, 2)
    rng = random.Random(4)
    one = WittPair(ring.one, ring.zero, 5)
    zero = WittPair(ring.zero, ring.zero, 5)
    for _ in range(30):
        x, y, z = (rand_pair(ring, rng, 5) for _ in range(3))
        m = witt_mul(x, one)
        assert m.a0 == x.a0 and m.a1 == x.a1
        m0 = witt_mul(x, zero)
        assert m0.a0 == ring.zero and m0.a1 == ring.zero
        lhs = witt_mul(x, witt_add(y, z))
        rhs = witt_add(witt_mul(x, y), witt_mul(x, z))
        assert lhs.a0 == rhs.a0 and lhs.a1 == rhs.a1
        a1, a2 = witt_add(witt_add(x, y), z), witt_add(x, witt_add(y, z))
        assert a1.a0 == a2.a0 and a1.a1 == a2.a1
        c1, c2 = witt_add(x, y), witt_add(y, x)
        assert c1.a1 == c2.a1


@pytest.mark.parametrize("p", [3, 5, 7])
def test_ghost_symbolic(p):
    a0, a1, b0, b1 = sympy.symbols("a0 a1 b0 b1")
    x, y = WittPair(a0, a1, p), WittPair(b0, b1, p)
    gs, gm = ghost(witt_add(x, y)), ghost(witt_mul(x, y))
    gx, gy = ghost(x), ghost(y)
    for i in range(2):
        assert sympy.expand(gs[i] - gx[i] - gy[i]) == 0
        assert sympy.expand(gm[i] - gx[i] * gy[i]) == 0
    assert ghost(WittPair(0, 1, p)) == (0, p)
    assert ghost(WittPair(1, 1, p)) == (1, 1 + p)


def test_ghost_injective():
    p, k = 5, 4
    ring = make_ring(p, k)
    rng = random.Random(5)
    for _ in range(50):
        x = rand_pair(ring, rng, p)
        g0, g1 = ghost(x)
        # recover a1 = (g1 - a0^p)/p, meaningful to k - 1 digits
        diff = (g1 - g0**p).lift()
        assert diff % p == 0
        assert ring(diff // p, k - 1) == x.a1.with_prec(k - 1)


@pytest.mark.parametrize("p,k,d", [(3, 5, 1), (5, 4, 1), (3, 3, 2), (5, 3, 2)])
def test_builtin_delta_is_p_derivation(p, k, d):
    ring = make_ring(p, k, d)
    rng = random.Random(6)
    samples = [ring.random(rng) for _ in range(12)]
    assert is_p_derivation(lambda a: a.delta(), samples, p)


def test_builtin_delta_exhaustive_small():
    ring = make_ring(3, 2)
    from pjet.padic import elements

    samples = list(elements(ring))
    assert is_p_derivation(lambda a: a.delta(), samples, 3)


def test_zero_map_is_not_p_derivation():
    p, k = 5, 3
    ring = make_ring(p, k)
    res = is_p_derivation(lambda a: ring(0, k - 1), [ring(1), ring(2)], p)
    assert not res.ok
    assert res.law == "add"
    a, b = res.counterexample
    assert a == ring(1) and b == ring(1)
    assert cp_eval(1, 1, p) % p != 0


def test_fermat_quotient_on_z_mod_p2():
    p = 5
    ring = make_ring(p, 2)
    samples = [ring(a) for a in range(p * p)]

    def fermat(a):
        x = a.lift()
        return ring(((x - x**p) // p) % p, 1)

    assert is_p_derivation(fermat, samples, p, pairs=[(a, b) for a in samples[:8] for b in samples[:8]])


@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50),
       st.sampled_from([3, 5, 7]))
def test_witt_over_integers_property(a0, a1, b0, b1, p):
    x, y = WittPair(a0, a1, p), WittPair(b0, b1, p)
    assert ghost(witt_add(x, y)) == tuple(u + v for u, v in zip(ghost(x), ghost(y)))
    assert ghost(witt_mul(x, y)) == tuple(u * v for u, v in zip(ghost(x), ghost(y)))
