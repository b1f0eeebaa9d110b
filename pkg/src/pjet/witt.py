"""Length-2 Witt vectors over an arbitrary commutative ring.

The base ring only needs ``+``, ``*``, ``**`` and multiplication by Python
ints, so the same code runs over Z, Z/p^k, R_{d,k}, sympy expressions and
delta-polynomials.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Any, Callable, Iterable, Sequence

from .trace import operation

__all__ = [
    "WittPair",
    "CpPolynomial",
    "cp_polynomial",
    "cp_eval",
    "witt_add",
    "witt_mul",
    "ghost",
    "is_p_derivation",
    "DerivationCheck",
]
__operations__ = ["witt_add", "witt_mul", "ghost", "is_p_derivation"]


@dataclass(frozen=True)
class CpPolynomial:
    """C_p(X, Y) = (X^p + Y^p - (X + Y)^p) / p as {(i, p - i): coefficient}."""

    p: int
    coefficients: tuple[tuple[tuple[int, int], int], ...]

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.coefficients)


@lru_cache(maxsize=None)
def cp_polynomial(p: int) -> CpPolynomial:
    coeffs = []
    for i in range(1, p):
        b = comb(p, i)
        assert b % p == 0
        coeffs.append(((i, p - i), -(b // p)))
    return CpPolynomial(p, tuple(coeffs))


def cp_eval(x: Any, y: Any, p: int) -> Any:
    """C_p(x, y) in whatever ring x and y live in."""
    coeffs = cp_polynomial(p).coefficients
    xp = [None] * p
    yp = [None] * p
    xp[1], yp[1] = x, y
    for i in range(2, p):
        xp[i] = xp[i - 1] * x
        yp[i] = yp[i - 1] * y
    total = None
    for (i, j), c in coeffs:
        term = c * (xp[i] * yp[j])
        total = term if total is None else total + term
    return total


@dataclass(frozen=True)
class WittPair:
    a0: Any
    a1: Any
    p: int

    def __add__(self, other: "WittPair") -> "WittPair":
        return witt_add(self, other)

    def __mul__(self, other: "WittPair") -> "WittPair":
        return witt_mul(self, other)


@operation(
    anchor="Witt vector addition (a0 + b0, a1 + b1 + C_p(a0, b0))",
    tests=("test_witt.py::test_ghost_additive", "test_witt.py::test_witt_add_example"),
    precision="componentwise min; exact as polynomial identity",
)
def witt_add(x: WittPair, y: WittPair) -> WittPair:
    if x.p != y.p:
        raise ValueError("Witt vectors for different primes")
    return WittPair(x.a0 + y.a0, x.a1 + y.a1 + cp_eval(x.a0, y.a0, x.p), x.p)


@operation(
    anchor="Witt vector multiplication (a0 b0, a0^p b1 + b0^p a1 + p a1 b1)",
    tests=("test_witt.py::test_ghost_multiplicative", "test_witt.py::test_witt_identities"),
    precision="componentwise min; exact as polynomial identity",
)
def witt_mul(x: WittPair, y: WittPair) -> WittPair:
    if x.p != y.p:
        raise ValueError("Witt vectors for different primes")
    p = x.p
    return WittPair(
        x.a0 * y.a0,
        (x.a0**p) * y.a1 + (y.a0**p) * x.a1 + p * (x.a1 * y.a1),
        p,
    )


@operation(
    anchor="Ghost map (a0, a1) -> (a0, a0^p + p a1)",
    tests=("test_witt.py::test_ghost_symbolic", "test_witt.py::test_ghost_injective"),
    precision="exact",
)
def ghost(x: WittPair) -> tuple[Any, Any]:
    return (x.a0, x.a0**x.p + x.p * x.a1)


@dataclass(frozen=True)
class DerivationCheck:
    ok: bool
    law: str | None = None
    counterexample: tuple | None = None

    def __bool__(self):
        return self.ok


@operation(
    anchor="p-derivation: a -> (a, delta a) is a ring homomorphism into W_2",
    tests=("test_witt.py::test_builtin_delta_is_p_derivation", "test_witt.py::test_zero_map_is_not_p_derivation"),
    precision="checked at the precision of delta's output",
)
def is_p_derivation(
    delta: Callable[[Any], Any],
    samples: Sequence[Any],
    p: int,
    pairs: Iterable[tuple[Any, Any]] | None = None,
) -> DerivationCheck:
    """Check the W_2-homomorphism property of ``delta`` on sampled pairs.

    ``pairs`` defaults to all ordered pairs of ``samples``.  The first failing
    law and its arguments are returned as a witness.
    """
    if not samples:
        return DerivationCheck(True)
    zero = samples[0] * 0
    one = samples[0] ** 0
    if not (delta(zero) == zero):
        return DerivationCheck(False, "zero", (zero,))
    if not (delta(one) == zero):
        return DerivationCheck(False, "one", (one,))
    if pairs is None:
        pairs = ((a, b) for a in samples for b in samples)
    for a, b in pairs:
        wa, wb = WittPair(a, delta(a), p), WittPair(b, delta(b), p)
        s = witt_add(wa, wb)
        if not (s.a0 == a + b and s.a1 == delta(a + b)):
            return DerivationCheck(False, "add", (a, b))
        m = witt_mul(wa, wb)
        if not (m.a0 == a * b and m.a1 == delta(a * b)):
            return DerivationCheck(False, "mul", (a, b))
    return DerivationCheck(True)
