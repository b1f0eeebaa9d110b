"""delta-polynomial rings O(X)[T', ..., T^(n)] over R_{d,k}.

Polynomials are sparse maps from exponent vectors to coefficients, attached to
an ``Ambient`` that fixes the variable order, the truncation rule and the
coefficient ring.  Truncation drops every monomial whose weighted degree
exceeds ``max_degree``; weights default to 1 for every variable.

Two prolongation routes are provided:

* ``prolong`` -- structural recursion with the Witt-vector sum and product
  laws (variables get the direction appended, constants get the ring's delta);
* ``prolong_frobenius`` -- the closed form (f^phi(x^p + p x') - f^p) / p.

Both are exact modulo the truncation ideal when every jet variable of positive
order has weight >= 1, or when ``max_degree`` is at least the coefficient
precision (monomials beyond the cut then only feed terms divisible by
p^prec).
"""
from __future__ import annotations

import itertools
import operator
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .padic import PrecisionError, UnramifiedElement, UnramifiedRing
from .trace import operation
from .witt import cp_polynomial

__all__ = [
    "DELTA",
    "DELTA1",
    "JetVariable",
    "Ambient",
    "DeltaPolynomial",
    "RingMapSpec",
    "JetOrderError",
    "UnboundVariableError",
    "prolong",
    "prolong_frobenius",
    "jet_eval",
    "apply_map",
    "compose_maps",
    "verify_jet_square",
    "DiagramReport",
    "jet_ambient",
]
__operations__ = ["prolong", "jet_eval", "apply_map", "verify_jet_square"]

DELTA = "d"
DELTA1 = "d1"
_SUFFIX = {DELTA: "'", DELTA1: "'1"}


class JetOrderError(ValueError):
    """A prolonged variable is not part of the ambient ring."""


class UnboundVariableError(KeyError):
    """A ring map has no image for a variable that occurs in its argument."""


@dataclass(frozen=True, order=True)
class JetVariable:
    """T_i with a word of derivations applied (applied left to right).

    ``factor`` distinguishes tensor factors (0 = none); it is used for the
    ring O(X)[dT] (x) O(X)[dT] of the cartesian-square check.
    """

    base_index: int
    word: tuple[str, ...] = ()
    factor: int = 0

    @property
    def jet_order(self) -> int:
        return len(self.word)

    def derive(self, direction: str = DELTA) -> "JetVariable":
        if direction not in _SUFFIX:
            raise ValueError(f"unknown direction {direction!r}")
        return JetVariable(self.base_index, self.word + (direction,), self.factor)

    def __str__(self):
        s = f"T{self.base_index}" + "".join(_SUFFIX[w] for w in self.word)
        return s + (f"@{self.factor}" if self.factor else "")

    _PATTERN = re.compile(r"^T(\d+)((?:'1|')*)(?:@(\d+))?$")

    @classmethod
    def parse(cls, text: str) -> "JetVariable":
        m = cls._PATTERN.match(text)
        if not m:
            raise ValueError(f"not a jet variable: {text!r}")
        word = tuple(DELTA1 if tok == "'1" else DELTA for tok in re.findall(r"'1|'", m.group(2)))
        return cls(int(m.group(1)), word, int(m.group(3) or 0))


@dataclass(frozen=True, eq=True)
class Ambient:
    """Variables, truncation rule and coefficient ring of a delta-polynomial ring."""

    ring: UnramifiedRing
    variables: tuple[JetVariable, ...]
    max_degree: int | None = None
    weights: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variables")
        if self.weights is not None and len(self.weights) != len(self.variables):
            raise ValueError("one weight per variable")

    @cached_property
    def index(self) -> dict[JetVariable, int]:
        return {v: i for i, v in enumerate(self.variables)}

    @cached_property
    def _w(self) -> tuple[int, ...]:
        return self.weights if self.weights is not None else (1,) * len(self.variables)

    def wdeg(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self._w, exps))

    def keeps(self, exps: Sequence[int]) -> bool:
        return self.max_degree is None or self.wdeg(exps) <= self.max_degree

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def zero(self, prec: int | None = None) -> "DeltaPolynomial":
        return DeltaPolynomial(self, {}, self.ring.k if prec is None else prec)

    def one(self, prec: int | None = None) -> "DeltaPolynomial":
        return self.const(1, prec)

    def const(self, c, prec: int | None = None) -> "DeltaPolynomial":
        if isinstance(c, UnramifiedElement):
            prec = c.prec if prec is None else min(prec, c.prec)
            raw = c.coeffs[0] if self.ring.d == 1 else c.coeffs
        else:
            prec = self.ring.k if prec is None else prec
            raw = int(c) if self.ring.d == 1 else tuple([int(c)] + [0] * (self.ring.d - 1))
        return DeltaPolynomial(self, {(0,) * self.nvars: raw}, prec)

    def var(self, v: JetVariable | str, prec: int | None = None) -> "DeltaPolynomial":
        if isinstance(v, str):
            v = JetVariable.parse(v)
        if v not in self.index:
            raise JetOrderError(f"{v} is not a variable of this ambient")
        exps = [0] * self.nvars
        exps[self.index[v]] = 1
        one = 1 if self.ring.d == 1 else tuple([1] + [0] * (self.ring.d - 1))
        return DeltaPolynomial(self, {tuple(exps): one}, self.ring.k if prec is None else prec)

    def gens(self, prec: int | None = None) -> list["DeltaPolynomial"]:
        return [self.var(v, prec) for v in self.variables]

    def monomial_str(self, exps: Sequence[int]) -> str:
        parts = []
        for v, e in zip(self.variables, exps):
            if e == 1:
                parts.append(str(v))
            elif e > 1:
                parts.append(f"{v}^{e}")
        return "*".join(parts) if parts else "1"

    def parse_monomial(self, text: str) -> tuple[int, ...]:
        exps = [0] * self.nvars
        if text.strip() == "1":
            return tuple(exps)
        for factor in text.split("*"):
            name, _, e = factor.partition("^")
            v = JetVariable.parse(name.strip())
            if v not in self.index:
                raise JetOrderError(f"{v} is not a variable of this ambient")
            exps[self.index[v]] += int(e) if e else 1
        return tuple(exps)

    def monomials(self, degree: int) -> Iterable[tuple[int, ...]]:
        """All exponent vectors of weighted degree <= degree (positive weights only)."""
        w = self._w
        if any(x <= 0 for x in w):
            raise ValueError("monomial enumeration needs positive weights")

        def rec(i, left):
            if i == self.nvars:
                yield ()
                return
            for e in range(left // w[i] + 1):
                for rest in rec(i + 1, left - e * w[i]):
                    yield (e,) + rest

        yield from rec(0, degree)


def jet_ambient(
    ring: UnramifiedRing,
    n_base: int = 1,
    order: int = 2,
    max_degree: int | None = None,
    jet_weight: int = 1,
) -> Ambient:
    """Ambient on T_i, T_i', ..., T_i^(order) for i < n_base (direction delta)."""
    variables, weights = [], []
    for j in range(order + 1):
        for i in range(n_base):
            variables.append(JetVariable(i, (DELTA,) * j))
            weights.append(1 if j == 0 else jet_weight)
    return Ambient(ring, tuple(variables), max_degree, tuple(weights))


_add_exps = operator.add


class DeltaPolynomial:
    """Immutable truncated polynomial over R_{d,k} in jet variables.

    Coefficients are stored raw: plain ints when d = 1, coordinate tuples
    otherwise, reduced modulo p^prec.  Zero coefficients and truncated
    monomials never appear in ``terms``.
    """

    __slots__ = ("ambient", "terms", "prec")

    def __init__(self, ambient: Ambient, terms: Mapping, prec: int, _clean: bool = False):
        if prec < 0:
            raise PrecisionError("negative precision")
        if prec > ambient.ring.k:
            raise PrecisionError("precision above ring precision")
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "prec", prec)
        if _clean:
            object.__setattr__(self, "terms", terms)
            return
        M = ambient.ring.p**prec
        out = {}
        scalar = ambient.ring.d == 1
        for e, c in terms.items():
            e = tuple(e)
            if len(e) != ambient.nvars:
                raise ValueError("exponent vector has wrong length")
            if not ambient.keeps(e):
                continue
            if scalar:
                c = int(c) % M
                if c:
                    out[e] = c
            else:
                c = tuple(int(x) % M for x in c)
                if any(c):
                    out[e] = c
        object.__setattr__(self, "terms", out)

    def __setattr__(self, name, value):
        raise AttributeError("DeltaPolynomial is immutable")

    __hash__ = None

    # -- helpers -----------------------------------------------------------------

    @property
    def ring(self) -> UnramifiedRing:
        return self.ambient.ring

    @property
    def _scalar(self) -> bool:
        return self.ambient.ring.d == 1

    def _new(self, terms, prec) -> "DeltaPolynomial":
        return DeltaPolynomial(self.ambient, terms, prec)

    def _coerce(self, other):
        if isinstance(other, DeltaPolynomial):
            if other.ambient != self.ambient:
                raise ValueError("polynomials live in different ambients")
            return other
        if isinstance(other, (int, UnramifiedElement)):
            return self.ambient.const(other, None if isinstance(other, UnramifiedElement) else self.prec)
        return NotImplemented

    def __repr__(self):
        return f"DeltaPolynomial({self}, prec={self.prec})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms):
            c = self.terms[e]
            cs = str(c) if self._scalar else str(list(c))
            m = self.ambient.monomial_str(e)
            parts.append(cs if m == "1" else f"{cs}*{m}")
        return " + ".join(parts)

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        M = self.ring.p**prec
        out = dict(self.terms)
        if self._scalar:
            for e, c in other.terms.items():
                out[e] = out.get(e, 0) + c
            out = {e: c % M for e, c in out.items() if c % M}
        else:
            zero = (0,) * self.ring.d
            for e, c in other.terms.items():
                out[e] = tuple(a + b for a, b in zip(out.get(e, zero), c))
            out = {e: tuple(x % M for x in c) for e, c in out.items()}
            out = {e: c for e, c in out.items() if any(c)}
        return DeltaPolynomial(self.ambient, out, prec, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        M = self.ring.p**self.prec
        if self._scalar:
            return DeltaPolynomial(self.ambient, {e: (-c) % M for e, c in self.terms.items()}, self.prec, _clean=True)
        return DeltaPolynomial(
            self.ambient, {e: tuple((-x) % M for x in c) for e, c in self.terms.items()}, self.prec, _clean=True
        )

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

    def scale(self, n: int) -> "DeltaPolynomial":
        """Multiply by an integer without changing precision."""
        M = self.ring.p**self.prec
        if self._scalar:
            return DeltaPolynomial(self.ambient, {e: (c * n) % M for e, c in self.terms.items() if (c * n) % M},
                                   self.prec, _clean=True)
        return self._new({e: tuple(x * n for x in c) for e, c in self.terms.items()}, self.prec)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = min(self.prec, other.prec)
        return DeltaPolynomial(self.ambient, self._mul_terms(self.terms, other.terms, prec), prec, _clean=True)

    __rmul__ = __mul__

    def _mul_terms(self, A, B, prec):
        amb = self.ambient
        M = self.ring.p**prec
        D = amb.max_degree
        if len(A) > len(B):
            A, B = B, A
        if D is None:
            Bs = [(e, c, 0) for e, c in B.items()]
            Aw = [(e, c, 0) for e, c in A.items()]
            D = 0
        else:
            Bs = sorted(((e, c, amb.wdeg(e)) for e, c in B.items()), key=lambda t: t[2])
            Aw = [(e, c, amb.wdeg(e)) for e, c in A.items()]
        out: dict = {}
        get = out.get
        if self._scalar:
            for ea, ca, wa in Aw:
                lim = D - wa
                for eb, cb, wb in Bs:
                    if wb > lim:
                        break
                    e = tuple(map(_add_exps, ea, eb))
                    out[e] = get(e, 0) + ca * cb
            return {e: c % M for e, c in out.items() if c % M}
        rmul = self.ring._raw_mul
        zero = (0,) * self.ring.d
        for ea, ca, wa in Aw:
            lim = D - wa
            for eb, cb, wb in Bs:
                if wb > lim:
                    break
                e = tuple(map(_add_exps, ea, eb))
                prod = rmul(ca, cb, M)
                out[e] = tuple(x + y for x, y in zip(get(e, zero), prod))
        res = {}
        for e, c in out.items():
            c = tuple(x % M for x in c)
            if any(c):
                res[e] = c
        return res

    def __pow__(self, n: int) -> "DeltaPolynomial":
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = self.ambient.one(self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        diff = (self - other)
        return diff.is_zero()

    # -- inspection ----------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, monomial) -> UnramifiedElement:
        if isinstance(monomial, str):
            e = self.ambient.parse_monomial(monomial)
        elif isinstance(monomial, Mapping):
            exps = [0] * self.ambient.nvars
            for v, k in monomial.items():
                v = JetVariable.parse(v) if isinstance(v, str) else v
                exps[self.ambient.index[v]] = k
            e = tuple(exps)
        else:
            e = tuple(monomial)
        c = self.terms.get(e, 0 if self._scalar else (0,) * self.ring.d)
        return self.ring(c if not self._scalar else int(c), self.prec)

    def constant_term(self) -> UnramifiedElement:
        return self.coefficient((0,) * self.ambient.nvars)

    def variables_used(self) -> set[JetVariable]:
        used = set()
        for e in self.terms:
            for v, k in zip(self.ambient.variables, e):
                if k:
                    used.add(v)
        return used

    def max_jet_order(self) -> int:
        return max((v.jet_order for v in self.variables_used()), default=0)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def with_prec(self, prec: int) -> "DeltaPolynomial":
        if prec > self.prec:
            raise PrecisionError("cannot increase precision")
        return self._new(self.terms, prec)

    def coefficient_valuation(self, exps) -> int:
        c = self.terms.get(tuple(exps))
        if c is None:
            return self.prec
        return self.ring(c, self.prec).valuation()

    def items(self):
        """(monomial string, UnramifiedElement) pairs in sorted monomial order."""
        for e in sorted(self.terms):
            yield self.ambient.monomial_str(e), self.coefficient(e)

    def to_json(self) -> dict:
        terms = {}
        for e in sorted(self.terms):
            c = self.terms[e]
            digits = [str(c)] if self._scalar else [str(x) for x in c]
            terms[self.ambient.monomial_str(e)] = digits
        return {"prec": self.prec, "terms": terms}

    @classmethod
    def from_json(cls, ambient: Ambient, obj) -> "DeltaPolynomial":
        terms = {}
        for mono, digits in obj["terms"].items():
            e = ambient.parse_monomial(mono)
            terms[e] = int(digits[0]) if ambient.ring.d == 1 else tuple(int(x) for x in digits)
        return cls(ambient, terms, int(obj["prec"]))

    # -- coefficient-level maps ------------------------------------------------------

    def frobenius_twist(self, times: int = 1) -> "DeltaPolynomial":
        """Apply phi^times to every coefficient."""
        if self._scalar or times == 0:
            return self
        M = self.ring.p**self.prec
        terms = {}
        for e, c in self.terms.items():
            for _ in range(times % self.ring.d):
                c = self.ring._raw_frobenius(c, M)
            terms[e] = c
        return self._new(terms, self.prec)

    def divide_by_p(self) -> "DeltaPolynomial":
        """Exact division by p; costs one digit of precision."""
        p = self.ring.p
        if self.prec < 1:
            raise PrecisionError("no digits to divide")
        if self._scalar:
            for c in self.terms.values():
                if c % p:
                    raise ArithmeticError("coefficient not divisible by p")
            return self._new({e: c // p for e, c in self.terms.items()}, self.prec - 1)
        for c in self.terms.values():
            if any(x % p for x in c):
                raise ArithmeticError("coefficient not divisible by p")
        return self._new({e: tuple(x // p for x in c) for e, c in self.terms.items()}, self.prec - 1)

    def derivative(self, v: JetVariable | str) -> "DeltaPolynomial":
        if isinstance(v, str):
            v = JetVariable.parse(v)
        i = self.ambient.index[v]
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = e[:i] + (e[i] - 1,) + e[i + 1:]
                terms[e2] = c * e[i] if self._scalar else tuple(x * e[i] for x in c)
        return self._new(terms, self.prec)

    def shift(self, v: JetVariable | str, n: int) -> "DeltaPolynomial":
        """Multiply by v^n; n may be negative when every monomial is divisible."""
        if isinstance(v, str):
            v = JetVariable.parse(v)
        i = self.ambient.index[v]
        terms = {}
        for e, c in self.terms.items():
            if e[i] + n < 0:
                raise ArithmeticError(f"monomial not divisible by {v}^{-n}")
            terms[e[:i] + (e[i] + n,) + e[i + 1:]] = c
        return self._new(terms, self.prec)

    def truncate(self, max_degree: int) -> "DeltaPolynomial":
        """Drop monomials of weighted degree above max_degree (ambient unchanged)."""
        return DeltaPolynomial(
            self.ambient, {e: c for e, c in self.terms.items() if self.ambient.wdeg(e) <= max_degree},
            self.prec, _clean=True,
        )

    def inverse_series(self) -> "DeltaPolynomial":
        """1/f for f with unit constant term, to the ambient truncation degree.

        Requires positive weights and a finite truncation degree.
        """
        amb = self.ambient
        if amb.max_degree is None:
            raise ValueError("series inversion needs a truncation degree")
        c0 = self.constant_term()
        u = c0.inverse()
        g = self * u  # 1 + h
        h = g - 1
        # 1/(1+h) = sum (-h)^n; h has no constant term, so n <= max_degree / min weight
        minw = min(amb._w)
        if minw <= 0:
            raise ValueError("series inversion needs positive weights")
        result = amb.one(self.prec)
        term = amb.one(self.prec)
        for _ in range(amb.max_degree // minw):
            term = term * (-h)
            if term.is_zero():
                break
            result = result + term
        return result * u

    # -- substitution and evaluation --------------------------------------------------

    def substitute(
        self,
        images: Mapping[JetVariable, "DeltaPolynomial"],
        target: Ambient,
        twist: int = 0,
    ) -> "DeltaPolynomial":
        """Ring homomorphism sending each variable to its image; coefficients get phi^twist."""
        src = self.frobenius_twist(twist) if twist else self
        used = self.variables_used()
        for v in used:
            if v not in images:
                raise UnboundVariableError(str(v))
        prec = self.prec
        for v in used:
            prec = min(prec, images[v].prec)
        powers: dict[tuple[int, int], DeltaPolynomial] = {}
        order = list(range(self.ambient.nvars))

        def power(i, n):
            key = (i, n)
            if key not in powers:
                if n == 0:
                    powers[key] = target.one(prec)
                elif n == 1:
                    powers[key] = images[self.ambient.variables[i]].with_prec(prec)
                else:
                    half = power(i, n // 2)
                    sq = half * half
                    powers[key] = sq * power(i, 1) if n % 2 else sq
            return powers[key]

        partial: dict[tuple, DeltaPolynomial] = {(): target.one(prec)}

        def image(e):
            # memoize on exponent prefixes so shared prefixes are multiplied once
            for j in range(len(e), -1, -1):
                if e[:j] in partial:
                    break
            acc = partial[e[:j]]
            for i in order[j:len(e)]:
                if e[i]:
                    acc = acc * power(i, e[i])
                partial[e[:i + 1]] = acc
            return acc

        total = target.zero(prec)
        acc_terms: dict = {}
        scalar = target.ring.d == 1
        M = target.ring.p**prec
        for e in sorted(src.terms):
            c = src.terms[e]
            img = image(e)
            if scalar:
                for e2, c2 in img.terms.items():
                    acc_terms[e2] = acc_terms.get(e2, 0) + c * c2
            else:
                for e2, c2 in img.terms.items():
                    prod = target.ring._raw_mul(c, c2, M)
                    prev = acc_terms.get(e2, (0,) * target.ring.d)
                    acc_terms[e2] = tuple(a + b for a, b in zip(prev, prod))
        total = DeltaPolynomial(target, acc_terms, prec)
        return total

    def evaluate(self, values: Mapping[JetVariable, UnramifiedElement]) -> UnramifiedElement:
        """Substitute ring elements for the variables."""
        ring = self.ring
        used = self.variables_used()
        prec = self.prec
        for v in used:
            if v not in values:
                raise UnboundVariableError(str(v))
            prec = min(prec, values[v].prec)
        M = ring.p**prec
        cache: dict[tuple[int, int], object] = {}
        vars_ = self.ambient.variables

        def pw(i, n):
            key = (i, n)
            if key not in cache:
                x = values[vars_[i]]
                if self._scalar:
                    cache[key] = pow(x.coeffs[0], n, M)
                else:
                    cache[key] = ring._raw_pow(x.coeffs, n, M)
            return cache[key]

        if self._scalar:
            total = 0
            for e, c in self.terms.items():
                t = c
                for i, n in enumerate(e):
                    if n:
                        t = (t * pw(i, n)) % M
                total += t
            return ring(total % M, prec)
        total = (0,) * ring.d
        for e, c in self.terms.items():
            t = tuple(x % M for x in c)
            for i, n in enumerate(e):
                if n:
                    t = ring._raw_mul(t, pw(i, n), M)
            total = ring._raw_add(total, t, M)
        return ring(total, prec)


# ---------------------------------------------------------------------------------
# prolongation


def _delta_constant(amb: Ambient, c, prec: int) -> DeltaPolynomial:
    ring = amb.ring
    elt = ring(c if not isinstance(c, int) or ring.d == 1 else c, prec)
    return amb.const(elt.delta())


def _delta_variable(amb: Ambient, v: JetVariable, direction: str, prec: int) -> DeltaPolynomial:
    dv = v.derive(direction)
    if dv not in amb.index:
        raise JetOrderError(f"prolonging {v} needs {dv}, which is not in the ambient")
    return amb.var(dv, prec - 1)


def _delta_product(f, df, g, dg, p):
    """delta(fg) = f^p dg + g^p df + p df dg."""
    return (f**p) * dg + (g**p) * df + (df * dg).scale(p)


def _delta_sum(f, df, g, dg, p):
    """delta(f + g) = df + dg + C_p(f, g)."""
    cp = None
    fp = [None] * p
    gp = [None] * p
    fp[1], gp[1] = f, g
    for i in range(2, p):
        fp[i] = fp[i - 1] * f
        gp[i] = gp[i - 1] * g
    for (i, j), c in cp_polynomial(p).coefficients:
        term = (fp[i] * gp[j]).scale(c)
        cp = term if cp is None else cp + term
    return df + dg + cp


@operation(
    anchor="Universal p-derivation on O(X)[T', ..., T^(n)] by structural recursion",
    tests=(
        "test_djet.py::test_prolong_examples",
        "test_djet.py::test_prolong_jet_eval_compatibility",
        "test_acceptance.py::test_criterion_3_prolongation_soundness",
    ),
    precision="coefficient prec drops by 1",
)
def prolong(f: DeltaPolynomial, direction: str = DELTA, fold: str = "left") -> DeltaPolynomial:
    """delta f by the Witt-vector laws, folding the sum of terms left or right."""
    if f.prec < 2:
        raise PrecisionError("prolongation needs coefficient prec >= 2")
    amb, p, prec = f.ambient, f.ring.p, f.prec
    ring = f.ring
    var_cache: dict[tuple[int, int], tuple[DeltaPolynomial, DeltaPolynomial]] = {}

    def d_var_power(i, n):
        # (v^n, delta(v^n)) by repeated use of the product law
        key = (i, n)
        if key not in var_cache:
            v = amb.variables[i]
            if n == 1:
                var_cache[key] = (amb.var(v, prec), _delta_variable(amb, v, direction, prec))
            else:
                a, da = d_var_power(i, n - 1)
                b, db = d_var_power(i, 1)
                var_cache[key] = (a * b, _delta_product(a, da, b, db, p))
        return var_cache[key]

    def d_term(e, c):
        cpoly = amb.const(ring(c if ring.d == 1 else c, prec))
        x, dx = cpoly, _delta_constant(amb, c, prec)
        for i, n in enumerate(e):
            if n:
                y, dy = d_var_power(i, n)
                x, dx = x * y, _delta_product(x, dx, y, dy, p)
        return x, dx

    items = sorted(f.terms.items())
    if not items:
        return amb.zero(prec - 1)
    pieces = [d_term(e, c) for e, c in items]
    if fold == "right":
        pieces.reverse()
    s, ds = pieces[0]
    for t, dt in pieces[1:]:
        if fold == "right":
            s, ds = t + s, _delta_sum(t, dt, s, ds, p)
        else:
            s, ds = s + t, _delta_sum(s, ds, t, dt, p)
    return ds.with_prec(prec - 1)


def prolong_frobenius(f: DeltaPolynomial, direction: str = DELTA) -> DeltaPolynomial:
    """delta f = (f^phi(x^p + p x') - f^p) / p, the closed form of the same map."""
    if f.prec < 2:
        raise PrecisionError("prolongation needs coefficient prec >= 2")
    amb, p, prec = f.ambient, f.ring.p, f.prec
    images = {}
    for v in f.variables_used():
        x = amb.var(v, prec)
        dv = v.derive(direction)
        if dv not in amb.index:
            raise JetOrderError(f"prolonging {v} needs {dv}, which is not in the ambient")
        images[v] = x**p + amb.var(dv, prec).scale(p)
    lifted = f.substitute(images, amb, twist=1)
    return (lifted - f**p).divide_by_p()


@operation(
    anchor="Jet evaluation T^(j) -> delta^j(a) at R-points",
    tests=("test_djet.py::test_jet_eval_examples", "test_djet.py::test_prolong_jet_eval_compatibility"),
    precision="min(poly prec, a.prec - max jet order)",
)
def jet_eval(f: DeltaPolynomial, point: Sequence[UnramifiedElement] | UnramifiedElement) -> UnramifiedElement:
    """Evaluate f at the jet of a point: every variable with word w gets delta^|w| of a coordinate."""
    if isinstance(point, UnramifiedElement):
        point = (point,)
    order = f.max_jet_order()
    for a in point:
        if a.prec < order + 1:
            raise PrecisionError("point precision too small for the jet order")
    jets = []
    for a in point:
        chain = [a]
        for _ in range(order):
            chain.append(chain[-1].delta())
        jets.append(chain)
    values = {}
    for v in f.variables_used():
        values[v] = jets[v.base_index][v.jet_order]
    return f.evaluate(values)


# ---------------------------------------------------------------------------------
# ring maps


@dataclass(frozen=True)
class RingMapSpec:
    """Ring homomorphism source -> target given on variables; coefficients get phi^twist."""

    source: Ambient
    target: Ambient
    assignment: Mapping[JetVariable, DeltaPolynomial]
    twist: int = 0

    @classmethod
    def from_names(cls, source, target, mapping: Mapping[str, str], twist: int = 0) -> "RingMapSpec":
        assignment = {}
        for a, b in mapping.items():
            assignment[JetVariable.parse(a)] = target.var(b)
        return cls(source, target, assignment, twist)

    @classmethod
    def identity(cls, amb: Ambient) -> "RingMapSpec":
        return cls(amb, amb, {v: amb.var(v) for v in amb.variables})


@operation(
    anchor="Substitution homomorphisms between jet rings (the arrows of the cartesian square)",
    tests=("test_djet.py::test_apply_map_examples", "test_djet.py::test_apply_map_functorial"),
    precision="min(f prec, image precs)",
)
def apply_map(spec: RingMapSpec, f: DeltaPolynomial) -> DeltaPolynomial:
    if f.ambient != spec.source:
        raise ValueError("polynomial is not in the source ambient of the map")
    return f.substitute(spec.assignment, spec.target, spec.twist)


def compose_maps(second: RingMapSpec, first: RingMapSpec) -> RingMapSpec:
    """second o first."""
    if first.target != second.source:
        raise ValueError("maps are not composable")
    assignment = {v: apply_map(second, img) for v, img in first.assignment.items()}
    return RingMapSpec(first.source, second.target, assignment, first.twist + second.twist)


# ---------------------------------------------------------------------------------
# cartesian square for J^2(X) -> J^1(J^1(X))


@dataclass
class DiagramReport:
    degree: int
    p: int
    k: int
    commutes: bool
    cartesian: bool
    prolongation_compatible: bool
    checked_generators: list[str] = field(default_factory=list)
    checked_monomials: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.commutes and self.cartesian and self.prolongation_compatible and not self.mismatches

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "p": self.p,
            "k": self.k,
            "commutes": self.commutes,
            "cartesian": self.cartesian,
            "prolongation_compatible": self.prolongation_compatible,
            "checked_generators": list(self.checked_generators),
            "checked_monomials": self.checked_monomials,
            "mismatches": list(self.mismatches),
        }


def square_rings(ring: UnramifiedRing, degree: int, n_base: int = 1):
    """The four rings and four maps of the square, for N = n_base coordinates.

    top-left  O(X)[dT, d1T, d1dT]   <- top --    O(X)[dT] (x) O(X)[dT]   top-right
       | left                                       | right
    bottom-left O(X)[dT, d2T]      <- bottom --   O(X)[dT]                bottom-right
    """
    base = [JetVariable(i) for i in range(n_base)]
    dT = [v.derive(DELTA) for v in base]
    d1T = [v.derive(DELTA1) for v in base]
    d1dT = [v.derive(DELTA1) for v in dT]
    d2T = [v.derive(DELTA) for v in dT]
    dT_1 = [JetVariable(v.base_index, v.word, 1) for v in dT]
    dT_2 = [JetVariable(v.base_index, v.word, 2) for v in dT]
    tl = Ambient(ring, tuple(base + dT + d1T + d1dT), degree)
    tr = Ambient(ring, tuple(base + dT_1 + dT_2), degree)
    bl = Ambient(ring, tuple(base + dT + d2T), degree)
    br = Ambient(ring, tuple(base + dT), degree)
    top = RingMapSpec(tr, tl, {**{v: tl.var(v) for v in base},
                               **{a: tl.var(b) for a, b in zip(dT_1, dT)},
                               **{a: tl.var(b) for a, b in zip(dT_2, d1T)}})
    bottom = RingMapSpec(br, bl, {v: bl.var(v) for v in base + dT})
    left = RingMapSpec(tl, bl, {**{v: bl.var(v) for v in base + dT},
                                **{a: bl.var(b) for a, b in zip(d1T, dT)},
                                **{a: bl.var(b) for a, b in zip(d1dT, d2T)}})
    right = RingMapSpec(tr, br, {**{v: br.var(v) for v in base},
                                 **{a: br.var(b) for a, b in zip(dT_1, dT)},
                                 **{a: br.var(b) for a, b in zip(dT_2, dT)}})
    return {"tl": tl, "tr": tr, "bl": bl, "br": br,
            "top": top, "bottom": bottom, "left": left, "right": right}


def _variable_image(spec: RingMapSpec, v: JetVariable) -> JetVariable | None:
    img = spec.assignment[v]
    if len(img.terms) != 1:
        return None
    (e, c), = img.terms.items()
    one = 1 if img.ring.d == 1 else tuple([1] + [0] * (img.ring.d - 1))
    if c != one or sum(e) != 1:
        return None
    return spec.target.variables[e.index(1)]


@operation(
    anchor="Commutative and cartesian square J^2(X) -> J^1(J^1(X)) over J^1(X) x_{J^0} J^1(X)",
    tests=("test_djet.py::test_diagram_generators", "test_acceptance.py::test_criterion_2_diagram"),
    precision="exact (all maps have coefficients 0 and 1)",
)
def verify_jet_square(degree: int = 6, p: int = 3, k: int = 3, n_base: int = 1,
                       samples: int = 10, seed: int = 0) -> DiagramReport:
    """Check commutativity, cartesianness and compatibility with prolongation.

    Cartesianness is checked at the level of presentations: the pushout of the
    top-left and bottom-right rings over the top-right ring is the polynomial
    ring on (bottom-right variables) + (top-left variables not hit by the top
    arrow); the induced map to the bottom-left ring must be a bijection of
    monomial bases up to ``degree``.
    """
    import random

    from .padic import RingParams, ring_new

    ring = ring_new(RingParams(p, k))
    sq = square_rings(ring, degree, n_base)
    tl, tr, bl, br = sq["tl"], sq["tr"], sq["bl"], sq["br"]
    top, bottom, left, right = sq["top"], sq["bottom"], sq["left"], sq["right"]
    report = DiagramReport(degree, p, k, commutes=True, cartesian=True, prolongation_compatible=True)

    # (a) commutativity on generators and on random elements
    for g in tr.variables:
        x = tr.var(g)
        a = apply_map(left, apply_map(top, x))
        b = apply_map(bottom, apply_map(right, x))
        report.checked_generators.append(str(g))
        if not a == b:
            report.commutes = False
            report.mismatches.append(f"generator {g}: left.top -> {a}, bottom.right -> {b}")
    rng = random.Random(seed)
    for _ in range(samples):
        f = _random_poly(tr, rng, min(degree, 4), 5)
        a = apply_map(left, apply_map(top, f))
        b = apply_map(bottom, apply_map(right, f))
        if not a == b:
            report.commutes = False
            report.mismatches.append(f"element {f}: paths disagree")

    # (b) cartesianness on presentations
    var_maps = {}
    for name, spec in (("top", top), ("right", right), ("left", left), ("bottom", bottom)):
        images = {v: _variable_image(spec, v) for v in spec.source.variables}
        if any(i is None for i in images.values()):
            report.cartesian = False
            report.mismatches.append(f"{name} arrow does not send variables to variables")
        var_maps[name] = images
    if report.cartesian:
        top_image = set(var_maps["top"].values())
        if len(top_image) != len(tr.variables):
            report.cartesian = False
            report.mismatches.append("top arrow is not injective on variables")
        free_tl = [v for v in tl.variables if v not in top_image]
        pushout_vars = [("br", v) for v in br.variables] + [("tl", v) for v in free_tl]
        induced = {}
        for side, v in pushout_vars:
            induced[(side, v)] = var_maps["bottom"][v] if side == "br" else var_maps["left"][v]
        pushout = Ambient(ring, tuple(JetVariable(i, (), 0) for i in range(len(pushout_vars))), degree)
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        count = 0
        for e in pushout.monomials(degree):
            count += 1
            img = [0] * bl.nvars
            for (side, v), n in zip(pushout_vars, e):
                img[bl.index[induced[(side, v)]]] += n
            img = tuple(img)
            if img in seen:
                report.cartesian = False
                report.mismatches.append(f"monomials {seen[img]} and {e} have the same image")
            seen[img] = e
        for e in bl.monomials(degree):
            if e not in seen:
                report.cartesian = False
                report.mismatches.append(f"bottom-left monomial {bl.monomial_str(e)} not hit")
        report.checked_monomials = count
        # identifications made by the pushout must be exactly what the left arrow does
        for g in tr.variables:
            if var_maps["left"][var_maps["top"][g]] != var_maps["bottom"][var_maps["right"][g]]:
                report.cartesian = False
                report.mismatches.append(f"pushout identification fails at {g}")

    # (c) left o delta_1 == delta o left on O(X)[dT] (the morphism J^2 -> J^1(J^1))
    if k >= 2:
        big = Ambient(ring, tl.variables + tuple(v for v in bl.variables if v not in tl.index), None)
        tl_big = RingMapSpec(tl, big, {v: big.var(v) for v in tl.variables})
        left_big = RingMapSpec(big, bl, {**{v: left.assignment[v] for v in tl.variables},
                                         **{v: bl.var(v) for v in bl.variables if v not in tl.index}})
        j1 = Ambient(ring, br.variables, min(degree, 3))
        to_big = RingMapSpec(j1, big, {v: big.var(v) for v in j1.variables})
        to_bl = RingMapSpec(j1, bl, {v: bl.var(v) for v in j1.variables})
        tests = [j1.var(v) for v in j1.variables] + [_random_poly(j1, rng, 2, 3) for _ in range(samples)]
        for f in tests:
            fb = apply_map(to_big, f)
            lhs = apply_map(left_big, prolong_frobenius(fb, DELTA1))
            rhs = prolong_frobenius(apply_map(to_bl, f).with_prec(f.prec), DELTA)
            if not lhs == rhs.with_prec(lhs.prec):
                report.prolongation_compatible = False
                report.mismatches.append(f"prolongation mismatch on {f}")
        del tl_big
    return report


def _random_poly(amb: Ambient, rng, degree: int, nterms: int, prec: int | None = None) -> DeltaPolynomial:
    prec = amb.ring.k if prec is None else prec
    monos = list(amb.monomials(degree)) if all(w > 0 for w in amb._w) else None
    terms = {}
    M = amb.ring.p**prec
    for _ in range(nterms):
        if monos is not None:
            e = rng.choice(monos)
        else:
            e = tuple(rng.randrange(degree + 1) for _ in range(amb.nvars))
        terms[e] = rng.randrange(M) if amb.ring.d == 1 else tuple(rng.randrange(M) for _ in range(amb.ring.d))
    return DeltaPolynomial(amb, terms, prec)


random_poly = _random_poly
