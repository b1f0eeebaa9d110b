"""Short Weierstrass curves over Z/p^k, point counts, the affine group law and
the formal group of the curve near the origin.

Formal-group coordinates: z = -x/y is the disk parameter and w = -1/y.  The
curve equation becomes w = z^3 + a4 z w^2 + a6 w^3, solved for w as a power
series by fixed-point iteration.  Series are ``DeltaPolynomial`` values on
the variables T0 (= t) and T1 (= s).
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .djet import Ambient, DeltaPolynomial, JetVariable
from .padic import NonUnitError, RingParams, UnramifiedElement, UnramifiedRing, ring_new, valuation_int
from .trace import operation

__all__ = [
    "SingularReductionError",
    "WeierstrassCurve",
    "TruncatedSeries",
    "ROSTER",
    "count_points_fp",
    "weierstrass_add",
    "weierstrass_neg",
    "hensel_lift_point",
    "random_lifted_point",
    "formal_w",
    "formal_group_law",
    "formal_log",
    "invariant_differential",
    "formal_point",
    "chord_tangent_t",
    "series_ambient",
    "log_degree",
    "fraction_mod",
]
__operations__ = ["count_points_fp", "formal_group_law", "formal_log", "weierstrass_add"]

T = JetVariable(0)
S = JetVariable(1)
U = JetVariable(2)


class SingularReductionError(ValueError):
    """The curve has bad reduction at p (or p < 5)."""

    def __init__(self, message: str, witness: dict):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True, eq=False)
class WeierstrassCurve:
    """y^2 = x^3 + a4 x + a6 over Z/p^k with good reduction and p >= 5."""

    a4: UnramifiedElement
    a6: UnramifiedElement

    def __post_init__(self):
        ring = self.a4.ring
        if self.a6.ring != ring:
            raise ValueError("coefficients in different rings")
        if ring.d != 1:
            raise ValueError("curves are defined over R_{1,k} = Z/p^k")
        p = ring.p
        if p < 5:
            raise SingularReductionError("short Weierstrass form needs p >= 5", {"p": p})
        core = 4 * self.a4_int**3 + 27 * self.a6_int**2
        if core % p == 0:
            raise SingularReductionError(
                f"singular reduction: 4*a4^3 + 27*a6^2 = {core} = 0 mod {p}",
                {"p": p, "a4": self.a4_int, "a6": self.a6_int, "4a4^3+27a6^2": core,
                 "discriminant": -16 * core},
            )

    @classmethod
    def from_ints(cls, p: int, a4: int, a6: int, k: int = 6) -> "WeierstrassCurve":
        ring = ring_new(RingParams(p, k))
        return cls(ring(a4), ring(a6))

    @property
    def ring(self) -> UnramifiedRing:
        return self.a4.ring

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def k(self) -> int:
        return self.ring.k

    @property
    def a4_int(self) -> int:
        return self.a4.lift()

    @property
    def a6_int(self) -> int:
        return self.a6.lift()

    def discriminant(self) -> int:
        return -16 * (4 * self.a4_int**3 + 27 * self.a6_int**2)

    def rhs(self, x):
        return x**3 + self.a4_int * x + self.a6_int

    def on_curve(self, P) -> bool:
        if P is None:
            return True
        x, y = P
        return y * y == self.rhs(x)

    def label(self) -> str:
        return f"y^2 = x^3 + {self.a4_int}x + {self.a6_int} over Z/{self.p}^{self.k}"


# Curves used throughout the tests, scripts and documentation.
ROSTER = (
    {"name": "cm-canonical", "p": 7, "a4": 0, "a6": 1, "note": "CM by Z[zeta_3], p = 1 mod 3: canonical lift"},
    {"name": "supersingular", "p": 5, "a4": 0, "a6": 1, "note": "p = 2 mod 3: supersingular"},
    {"name": "ordinary-non-cm", "p": 7, "a4": 2, "a6": 3, "note": "ordinary, j not integral: no CM"},
)


@operation(
    anchor="Trace of Frobenius a_p = p + 1 - #E(F_p) by enumeration",
    tests=("test_elliptic.py::test_roster_counts", "test_elliptic.py::test_hasse_bound"),
    precision="exact integer",
)
def count_points_fp(E: WeierstrassCurve) -> int:
    """a_p = p + 1 - #E(F_p), counting x in F_p with the Euler criterion."""
    p = E.p
    count = 1  # point at infinity
    for x in range(p):
        v = E.rhs(x) % p
        if v == 0:
            count += 1
        elif pow(v, (p - 1) // 2, p) == 1:
            count += 2
    return p + 1 - count


def _is_zero(v) -> bool:
    if isinstance(v, UnramifiedElement):
        return v.is_zero()
    return v == 0


def weierstrass_neg(P):
    if P is None:
        return None
    return (P[0], -P[1])


@operation(
    anchor="Chord-tangent group law on y^2 = x^3 + a4 x + a6 (affine, infinity = None)",
    tests=("test_elliptic.py::test_add_identity_and_inverse", "test_elliptic.py::test_add_associative"),
    precision="coordinates at min input precision; denominators must be units",
)
def weierstrass_add(E: WeierstrassCurve, P, Q):
    """P + Q for points with coordinates in Q (Fraction) or Z/p^k.

    Over Z/p^k every division must be by a unit; otherwise NonUnitError is
    raised (doubling at 2-torsion and additions of points that are congruent
    mod p are out of reach of the affine formulas).
    """
    if P is None:
        return Q
    if Q is None:
        return P
    x1, y1 = P
    x2, y2 = Q
    if _is_zero(x1 - x2):
        if _is_zero(y1 + y2):
            return None
        num, den = 3 * x1 * x1 + E.a4_int, 2 * y1
    else:
        num, den = y2 - y1, x2 - x1
    if isinstance(den, UnramifiedElement):
        if not den.is_unit():
            raise NonUnitError("denominator of the group law is not a unit")
        lam = num * den.inverse()
    else:
        lam = Fraction(num) / Fraction(den)
    x3 = lam * lam - x1 - x2
    y3 = lam * (x1 - x3) - y1
    return (x3, y3)


def hensel_lift_point(E: WeierstrassCurve, x0: int, y0: int, k: int | None = None):
    """Lift an F_p-point with y0 != 0 to Z/p^k, keeping x fixed."""
    p = E.p
    k = E.k if k is None else k
    if (y0 * y0 - E.rhs(x0)) % p:
        raise ValueError("not a point mod p")
    if y0 % p == 0:
        raise ValueError("2-torsion points do not lift with fixed x by Newton")
    ring = ring_new(RingParams(p, k))
    N = p**k
    y = y0 % p
    for _ in range(k.bit_length() + 1):
        y = (y - (y * y - E.rhs(x0)) * pow(2 * y, -1, N)) % N
    assert (y * y - E.rhs(x0)) % N == 0
    return (ring(x0), ring(y))


def random_lifted_point(E: WeierstrassCurve, rng: random.Random, k: int | None = None):
    p = E.p
    candidates = [(x, y) for x in range(p) for y in range(1, p) if (y * y - E.rhs(x)) % p == 0]
    if not candidates:
        raise ValueError("no affine F_p-points with y != 0")
    x0, y0 = rng.choice(candidates)
    # move x within its residue class so lifted points vary p-adically
    N = p ** (E.k if k is None else k)
    x = (x0 + p * rng.randrange(N // p)) % N
    return hensel_lift_point(E, x, y0, k)


# ---------------------------------------------------------------------------------
# formal group


@dataclass
class TruncatedSeries:
    """A truncated power series poly / p^den_exponent.

    ``ledger`` records, per monomial, how many of the den_exponent powers of p
    are genuinely needed (the p-adic valuation of the true denominator); it is
    empty for integral series.
    """

    poly: DeltaPolynomial
    names: tuple[str, ...]
    den_exponent: int = 0
    ledger: dict[tuple[int, ...], int] = field(default_factory=dict)

    @property
    def degree(self) -> int | None:
        return self.poly.ambient.max_degree

    @property
    def prec(self) -> int:
        return self.poly.prec

    @property
    def value_prec(self) -> int:
        """Coefficients of the represented series are known mod p^value_prec."""
        return self.poly.prec - self.den_exponent

    def coefficient(self, exps) -> Fraction:
        """Coefficient as an exact rational, using the symmetric lift of the stored value."""
        c = self.poly.coefficient(exps).lift()
        M = self.poly.ring.p**self.poly.prec
        if c > M // 2:
            c -= M
        return Fraction(c, self.poly.ring.p**self.den_exponent)

    def to_json(self) -> dict:
        out = self.poly.to_json()
        out["variables"] = list(self.names)
        out["den_exponent"] = self.den_exponent
        out["degree"] = self.degree
        return out


def series_ambient(ring: UnramifiedRing, nvars: int, degree: int) -> Ambient:
    return Ambient(ring, tuple(JetVariable(i) for i in range(nvars)), degree)


def formal_w(E: WeierstrassCurve, degree: int, ring: UnramifiedRing | None = None) -> DeltaPolynomial:
    """w(z) = z^3 + a4 z^7 + ... with w = z^3 + a4 z w^2 + a6 w^3, to z-degree ``degree``."""
    ring = E.ring if ring is None else ring
    A = series_ambient(ring, 1, degree)
    z = A.var(T)
    z3 = z**3
    w = z3
    # each pass fixes at least the next z-degree, starting from 3
    for _ in range(degree + 1):
        nxt = z3 + (z * w * w).scale(E.a4_int) + (w**3).scale(E.a6_int)
        if nxt == w:
            break
        w = nxt
    else:
        raise AssertionError("w-series iteration did not converge")
    return w


@operation(
    anchor="Formal group law F(t, s) of the curve from collinear points in the (z, w) chart",
    tests=(
        "test_elliptic.py::test_formal_group_identities",
        "test_elliptic.py::test_formal_group_matches_chord_tangent",
        "test_acceptance.py::test_criterion_4_formal_group",
    ),
    precision="integral coefficients mod p^k, truncated at total degree D",
)
def formal_group_law(E: WeierstrassCurve, degree: int, ring: UnramifiedRing | None = None) -> TruncatedSeries:
    """F(t, s) = t + s + (2 a4 lam nu + 3 a6 lam^2 nu) / (1 + a4 lam^2 + a6 lam^3).

    lam is the slope of the line through (t, w(t)) and (s, w(s)), nu its
    intercept; the third intersection has z3 = -t - s - (...), and F = -z3.
    """
    if degree < 3:
        raise ValueError("formal group needs degree >= 3")
    ring = E.ring if ring is None else ring
    w = formal_w(E, degree + 1, ring)
    A = series_ambient(ring, 2, degree)
    t, s = A.var(T), A.var(S)
    # (s^n - t^n)/(s - t) = sum_{i<n} t^i s^(n-1-i)
    lam_terms: dict[tuple[int, int], int] = {}
    for (n,), c in w.terms.items():
        for i in range(n):
            key = (i, n - 1 - i)
            lam_terms[key] = lam_terms.get(key, 0) + c
    lam = DeltaPolynomial(A, lam_terms, ring.k)
    w_t = DeltaPolynomial(A, {(n, 0): c for (n,), c in w.terms.items()}, ring.k)
    nu = w_t - lam * t
    a4, a6 = E.a4_int, E.a6_int
    lam2 = lam * lam
    num = (lam * nu).scale(2 * a4) + (lam2 * nu).scale(3 * a6)
    den = A.one() + lam2.scale(a4) + (lam2 * lam).scale(a6)
    F = t + s + num * den.inverse_series()
    return TruncatedSeries(F, ("t", "s"))


def formal_inverse(F: TruncatedSeries) -> DeltaPolynomial:
    """i(t) = -t for short Weierstrass curves (the inverse is (x, y) -> (x, -y))."""
    A = F.poly.ambient
    return -A.var(T)


def log_degree(degree: int, prec: int, p: int) -> int:
    """Degree to which L must be known so terms beyond it vanish in the windows used here."""
    return degree + prec + int(math.log(max(degree + prec, 2), p)) + 2


def invariant_differential(E: WeierstrassCurve, degree: int, ring: UnramifiedRing | None = None) -> DeltaPolynomial:
    """sum b_n z^(n-1) with dx/(2y) = (1 + z u'/(2u)) dz, u = w/z^3; b_1 = 1."""
    ring = E.ring if ring is None else ring
    w = formal_w(E, degree + 3, ring)
    A = series_ambient(ring, 1, degree)
    u = DeltaPolynomial(A, {(n - 3,): c for (n,), c in w.terms.items()}, ring.k)
    z = A.var(T)
    inv2 = pow(2, -1, ring.p**ring.k)
    return A.one() + (z * u.derivative(T) * u.inverse_series()).scale(inv2)


@operation(
    anchor="Formal logarithm L(t) = sum b_n t^n / n with L' dt the invariant differential dx/2y",
    tests=("test_elliptic.py::test_log_shape", "test_elliptic.py::test_log_additive"),
    precision="stored as p^E L with integral coefficients mod p^K; L known mod p^(K-E)",
)
def formal_log(E: WeierstrassCurve, degree: int, ring: UnramifiedRing | None = None) -> TruncatedSeries:
    """L(z) up to z^degree, stored as p^E L(z) with E = max v_p(n) for n <= degree.

    dx/(2y) = (z w' - w)/(2w) dz = (1 + z u'/(2u)) dz with u = w/z^3.
    """
    if degree < 3:
        raise ValueError("formal logarithm needs degree >= 3")
    ring = E.ring if ring is None else ring
    p, K = ring.p, ring.k
    omega = invariant_differential(E, degree, ring)
    E_exp = max(valuation_int(n, p, 10**6) for n in range(1, degree + 1))
    terms, ledger = {}, {}
    M = p**K
    for n in range(1, degree + 1):
        b = omega.terms.get((n - 1,), 0)
        v = valuation_int(n, p, 10**6)
        terms[(n,)] = b * p ** (E_exp - v) * pow(n // p**v, -1, M)
        ledger[(n,)] = v
    L = DeltaPolynomial(omega.ambient, terms, K)
    return TruncatedSeries(L, ("t",), E_exp, ledger)


# ---------------------------------------------------------------------------------
# chord-tangent oracle on formal points


def formal_point(E: WeierstrassCurve, t0: int, K: int):
    """Exact rational (x, y) for the point with parameter t0, v_p(t0) >= 1.

    w(t0) has valuation 3 v_p(t0), so it is found by Newton iteration mod
    p^(K + 3 v_p(t0)) to leave K significant digits; then x = t0/w, y = -1/w.
    """
    p = E.p
    if t0 % p:
        raise ValueError("formal points need v_p(t0) >= 1")
    if t0 == 0:
        return None
    N = p ** (K + 3 * valuation_int(t0, p, 10**6))
    a4, a6 = E.a4_int, E.a6_int
    w = pow(t0, 3, N)
    for _ in range(4 * K + 4):
        g = (t0**3 + a4 * t0 * w * w + a6 * w**3 - w) % N
        if g == 0:
            break
        dg = (2 * a4 * t0 * w + 3 * a6 * w * w - 1) % N
        w = (w - g * pow(dg, -1, N)) % N
    return (Fraction(t0) / w, Fraction(-1) / w)


def chord_tangent_t(E: WeierstrassCurve, t0: int, s0: int, K: int) -> Fraction | int:
    """The parameter -x/y of P(t0) + P(s0) mod p^K, via the affine group law.

    The affine formulas divide by x2 - x1 (or 2 y1), which costs digits when
    the points are p-adically close, so the points are built with a margin.
    """
    p = E.p
    cap = 10**6
    margin = 2 * (valuation_int(t0 - s0, p, cap) if t0 != s0 else valuation_int(t0, p, cap))
    margin += 2 * valuation_int(t0 + s0, p, cap) if t0 + s0 else 0
    margin += 3 * (valuation_int(t0, p, cap) + valuation_int(s0, p, cap)) + 2
    P, Q = formal_point(E, t0, K + margin), formal_point(E, s0, K + margin)
    R = weierstrass_add(E, P, Q)
    if R is None:
        return 0
    return -R[0] / R[1]


def fraction_mod(q: Fraction | int, p: int, k: int) -> int:
    q = Fraction(q)
    if q.denominator % p == 0:
        raise ValueError("not p-integral")
    N = p**k
    return (q.numerator * pow(q.denominator, -1, N)) % N
