"""Truncated unramified extensions R = W(F_q)/p^k with Frobenius and p-derivation.

An element of R_{d,k} is a coordinate vector in the basis 1, xi, ..., xi^(d-1),
where xi is the class of X in (Z/p^k)[X]/(m).  Every element carries its own
precision exponent ``prec``: its coordinates are meaningful modulo p^prec and
are stored reduced into [0, p^prec).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import sympy

from .trace import operation

__all__ = [
    "RingParams",
    "UnramifiedRing",
    "UnramifiedElement",
    "RingError",
    "PrecisionError",
    "NonUnitError",
    "ring_new",
    "frobenius",
    "p_derivation",
    "add",
    "mul",
    "neg",
    "inv",
    "valuation_int",
    "default_modulus",
]
__operations__ = ["ring_new", "frobenius", "p_derivation", "add"]


class RingError(ValueError):
    """Invalid ring parameters."""


class PrecisionError(ArithmeticError):
    """Not enough p-adic digits left to carry out an operation."""


class NonUnitError(ZeroDivisionError):
    """Inversion of an element that is not a unit."""


def valuation_int(n: int, p: int, cap: int) -> int:
    """p-adic valuation of an integer, capped (the valuation of 0 is ``cap``)."""
    if n == 0:
        return cap
    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class RingParams:
    """Parameters of R_{d,k}.  ``modulus`` is the monic defining polynomial,
    little-endian (constant term first, leading 1 last)."""

    p: int
    k: int
    d: int = 1
    modulus: tuple[int, ...] | None = None

    def resolved_modulus(self) -> tuple[int, ...]:
        if self.modulus is None:
            if self.d != 1:
                raise RingError("a defining polynomial is required when d > 1")
            return (0, 1)
        return tuple(int(c) for c in self.modulus)


class UnramifiedRing:
    """Ring context for R_{d,k}; immutable after construction."""

    def __init__(self, params: RingParams):
        p, k, d = params.p, params.k, params.d
        m = params.resolved_modulus()
        if p < 3 or not sympy.isprime(p):
            raise RingError("p not prime" if p >= 2 and not sympy.isprime(p)
                            else "p must be an odd prime")
        if k < 2:
            raise RingError("k must be >= 2")
        if d < 1:
            raise RingError("d must be >= 1")
        if len(m) != d + 1 or m[-1] != 1:
            raise RingError(f"modulus must be monic of degree {d}")
        x = sympy.Symbol("x")
        poly = sympy.Poly(list(reversed(m)), x, modulus=p)
        if not poly.is_irreducible:
            raise RingError("m reducible mod p")
        self.params = params
        self.p, self.k, self.d = p, k, d
        self.modulus = m
        self.N = p**k
        # xi^j for d <= j <= 2d-2, expressed in the basis 1..xi^(d-1)
        self._red = self._reduction_table()
        self._frob_cols = self._frobenius_columns()

    def __repr__(self):
        return f"UnramifiedRing(p={self.p}, d={self.d}, k={self.k}, m={self.modulus})"

    def __eq__(self, other):
        return isinstance(other, UnramifiedRing) and self.params == other.params

    def __hash__(self):
        return hash(self.params)

    # -- raw coordinate arithmetic (tuples of ints modulo M) ------------------

    def _reduction_table(self):
        d, N = self.d, self.N
        table = {}
        cur = [(-c) % N for c in self.modulus[:d]]  # xi^d
        for j in range(d, 2 * d - 1):
            table[j] = tuple(cur)
            # multiply by xi
            top = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(cur[i] - top * self.modulus[i]) % N for i in range(d)]
        return table

    def _raw_mul(self, a: Sequence[int], b: Sequence[int], M: int) -> tuple[int, ...]:
        d = self.d
        if d == 1:
            return ((a[0] * b[0]) % M,)
        prod = [0] * (2 * d - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    prod[i + j] += ai * bj
        out = prod[:d]
        for j in range(d, 2 * d - 1):
            c = prod[j]
            if c:
                r = self._red[j]
                for i in range(d):
                    out[i] += c * r[i]
        return tuple(c % M for c in out)

    def _raw_pow(self, a, n: int, M: int):
        result = tuple([1 % M] + [0] * (self.d - 1))
        base = tuple(c % M for c in a)
        while n:
            if n & 1:
                result = self._raw_mul(result, base, M)
            n >>= 1
            if n:
                base = self._raw_mul(base, base, M)
        return result

    def _raw_add(self, a, b, M):
        return tuple((x + y) % M for x, y in zip(a, b))

    def _raw_sub(self, a, b, M):
        return tuple((x - y) % M for x, y in zip(a, b))

    def _raw_eval_poly(self, coeffs: Sequence[int], r, M):
        # Horner evaluation of an integer polynomial (little-endian) at r
        acc = tuple([0] * self.d)
        one = tuple([1] + [0] * (self.d - 1))
        for c in reversed(coeffs):
            acc = self._raw_mul(acc, r, M)
            acc = self._raw_add(acc, tuple(c * x for x in one), M)
        return acc

    def _raw_inv(self, a, M: int):
        p = self.p
        if all(c % p == 0 for c in a):
            raise NonUnitError("element is not a unit")
        if self.d == 1:
            return (pow(a[0], -1, M),)
        # inverse modulo p from Fermat in F_{p^d}, then Newton lifting
        x = self._raw_pow(tuple(c % p for c in a), p**self.d - 2, p)
        mod = p
        two = tuple([2] + [0] * (self.d - 1))
        while mod < M:
            mod = min(mod * mod, M)
            ax = self._raw_mul(a, x, mod)
            x = self._raw_mul(x, self._raw_sub(two, ax, mod), mod)
        return tuple(c % M for c in x)

    def _frobenius_columns(self):
        """Images phi(xi)^j for j < d, mod p^k.  phi(xi) is the root of m that
        reduces to xi^p, obtained by Newton iteration from xi^p."""
        d, N, p = self.d, self.N, self.p
        if d == 1:
            return ((1,),)
        xi = tuple([0, 1] + [0] * (d - 2))
        r = self._raw_pow(xi, p, N)
        m = self.modulus
        dm = [i * m[i] for i in range(1, d + 1)]
        for _ in range(2 * self.k + 2):
            f = self._raw_eval_poly(m, r, N)
            if not any(f):
                break
            fp = self._raw_eval_poly(dm, r, N)
            r = self._raw_sub(r, self._raw_mul(f, self._raw_inv(fp, N), N), N)
        assert not any(self._raw_eval_poly(m, r, N)), "Hensel iteration did not converge"
        assert r == tuple(c % N for c in r)
        cols = [tuple([1] + [0] * (d - 1))]
        for _ in range(1, d):
            cols.append(self._raw_mul(cols[-1], r, N))
        return tuple(cols)

    def _raw_frobenius(self, a, M):
        if self.d == 1:
            return (a[0] % M,)
        out = [0] * self.d
        for j, aj in enumerate(a):
            if aj:
                col = self._frob_cols[j]
                for i in range(self.d):
                    out[i] += aj * col[i]
        return tuple(c % M for c in out)

    def _raw_delta(self, a, e: int):
        """delta of coordinates known mod p^e; result mod p^(e-1)."""
        p = self.p
        M = p**e
        diff = self._raw_sub(self._raw_frobenius(a, M), self._raw_pow(a, p, M), M)
        assert all(c % p == 0 for c in diff), "phi(a) - a^p not divisible by p"
        return tuple(c // p for c in diff)

    # -- element construction ---------------------------------------------------

    def __call__(self, value=0, prec: int | None = None) -> "UnramifiedElement":
        prec = self.k if prec is None else prec
        if not 0 <= prec <= self.k:
            raise PrecisionError(f"precision {prec} outside [0, {self.k}]")
        if isinstance(value, UnramifiedElement):
            if value.ring != self:
                raise ValueError("element belongs to another ring")
            return value.with_prec(min(prec, value.prec))
        if isinstance(value, int):
            coeffs = [value] + [0] * (self.d - 1)
        else:
            coeffs = [int(c) for c in value]
            if len(coeffs) != self.d:
                raise ValueError(f"expected {self.d} coordinates")
        M = self.p**prec
        return UnramifiedElement(self, tuple(c % M for c in coeffs), prec)

    @property
    def zero(self):
        return self(0)

    @property
    def one(self):
        return self(1)

    @property
    def xi(self):
        if self.d == 1:
            return self(0)
        return self([0, 1] + [0] * (self.d - 2))

    def random(self, rng: random.Random, prec: int | None = None, valuation: int = 0):
        prec = self.k if prec is None else prec
        M = self.p**prec
        scale = self.p**valuation
        return self([rng.randrange(M) * scale for _ in range(self.d)], prec)

    def random_unit(self, rng: random.Random, prec: int | None = None):
        while True:
            a = self.random(rng, prec)
            if a.is_unit():
                return a

    def from_json(self, obj) -> "UnramifiedElement":
        return self([int(c) for c in obj["digits"]], int(obj["prec"]))


class UnramifiedElement:
    """Immutable element of R_{d,k} with explicit precision."""

    __slots__ = ("ring", "coeffs", "prec")

    def __init__(self, ring: UnramifiedRing, coeffs: tuple[int, ...], prec: int):
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "prec", prec)

    def __setattr__(self, name, value):
        raise AttributeError("UnramifiedElement is immutable")

    __hash__ = None  # equality is precision-aware, hence not transitive

    def __repr__(self):
        if self.ring.d == 1:
            return f"{self.coeffs[0]} + O({self.ring.p}^{self.prec})"
        return f"{list(self.coeffs)} + O({self.ring.p}^{self.prec})"

    # -- coercion ------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, UnramifiedElement):
            if other.ring != self.ring:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def with_prec(self, prec: int) -> "UnramifiedElement":
        """Forget digits: the same value asserted modulo p^prec (prec <= self.prec)."""
        if prec > self.prec:
            raise PrecisionError("cannot increase precision")
        if prec < 0:
            raise PrecisionError("negative precision")
        M = self.ring.p**prec
        return UnramifiedElement(self.ring, tuple(c % M for c in self.coeffs), prec)

    # -- ring operations ------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = min(self.prec, other.prec)
        return UnramifiedElement(self.ring, self.ring._raw_add(self.coeffs, other.coeffs, self.ring.p**e), e)

    __radd__ = __add__

    def __neg__(self):
        M = self.ring.p**self.prec
        return UnramifiedElement(self.ring, tuple((-c) % M for c in self.coeffs), self.prec)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = min(self.prec, other.prec)
        return UnramifiedElement(self.ring, self.ring._raw_mul(self.coeffs, other.coeffs, self.ring.p**e), e)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return UnramifiedElement(self.ring, self.ring._raw_pow(self.coeffs, n, self.ring.p**self.prec), self.prec)

    def inverse(self) -> "UnramifiedElement":
        if self.prec == 0:
            raise PrecisionError("element carries no digits")
        M = self.ring.p**self.prec
        return UnramifiedElement(self.ring, self.ring._raw_inv(self.coeffs, M), self.prec)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        e = min(self.prec, other.prec)
        M = self.ring.p**e
        return all((a - b) % M == 0 for a, b in zip(self.coeffs, other.coeffs))

    # -- p-adic structure -------------------------------------------------------

    def frobenius(self) -> "UnramifiedElement":
        M = self.ring.p**self.prec
        return UnramifiedElement(self.ring, self.ring._raw_frobenius(self.coeffs, M), self.prec)

    def delta(self) -> "UnramifiedElement":
        if self.prec < 2:
            raise PrecisionError("p-derivation needs prec >= 2")
        return UnramifiedElement(self.ring, self.ring._raw_delta(self.coeffs, self.prec), self.prec - 1)

    def valuation(self) -> int:
        return min(valuation_int(c, self.ring.p, self.prec) for c in self.coeffs)

    def is_unit(self) -> bool:
        return self.prec > 0 and any(c % self.ring.p for c in self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def lift(self) -> int:
        """The integer representative in [0, p^prec) (d = 1 only)."""
        if self.ring.d != 1:
            raise ValueError("lift() is only defined for d = 1")
        return self.coeffs[0]

    def to_json(self) -> dict:
        return {"digits": [str(c) for c in self.coeffs], "prec": self.prec}


@operation(
    anchor="Ring context R_{d,k}: validated p, k and irreducible defining polynomial",
    tests=("test_padic.py::test_ring_new_examples", "test_padic.py::test_ring_new_errors"),
    precision="contexts carry k; elements default to prec k",
)
def ring_new(params: RingParams) -> UnramifiedRing:
    return UnramifiedRing(params)


def default_modulus(p: int, d: int) -> tuple[int, ...]:
    """First monic irreducible of degree d mod p, scanning x^d + c with c small first."""
    if d == 1:
        return (0, 1)
    x = sympy.Symbol("x")
    for n in range(p**d):
        low = []
        for _ in range(d):
            n, c = divmod(n, p)
            low.append(c)
        m = tuple(low) + (1,)
        if sympy.Poly(list(reversed(m)), x, modulus=p).is_irreducible:
            return m
    raise RingError("no irreducible polynomial found")  # pragma: no cover


@operation(
    anchor="Frobenius automorphism lifting x -> x^p",
    tests=("test_padic.py::test_frobenius_is_ring_hom", "test_padic.py::test_frobenius_order_d"),
    precision="output prec = input prec",
)
def frobenius(a: UnramifiedElement) -> UnramifiedElement:
    return a.frobenius()


@operation(
    anchor="p-derivation delta(a) = (phi(a) - a^p)/p",
    tests=("test_padic.py::test_delta_examples", "test_witt.py::test_builtin_delta_is_p_derivation"),
    precision="output prec = input prec - 1",
)
def p_derivation(a: UnramifiedElement) -> UnramifiedElement:
    return a.delta()


@operation(
    anchor="Ring operations add, mul, neg, inv of R_{d,k}",
    tests=("test_padic.py::test_ring_axioms", "test_padic.py::test_inverse_examples"),
    precision="min of input precisions",
)
def add(a: UnramifiedElement, b: UnramifiedElement) -> UnramifiedElement:
    return a + b


def mul(a: UnramifiedElement, b: UnramifiedElement) -> UnramifiedElement:
    return a * b


def neg(a: UnramifiedElement) -> UnramifiedElement:
    return -a


def inv(a: UnramifiedElement) -> UnramifiedElement:
    return a.inverse()


def elements(ring: UnramifiedRing, prec: int | None = None) -> Iterable[UnramifiedElement]:
    """Every element of R_{d,prec}; only sensible for tiny rings."""
    prec = ring.k if prec is None else prec
    M = ring.p**prec
    total = M**ring.d
    for n in range(total):
        coeffs = []
        for _ in range(ring.d):
            n, c = divmod(n, M)
            coeffs.append(c)
        yield ring(coeffs, prec)
