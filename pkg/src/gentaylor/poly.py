"""Dense univariate polynomials with Euclidean division."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivisionByZeroPolynomial, MixedDomain
from .scalar import EXACT, FLOAT, Domain, Scalar, common_domain, format_scalar, lift, parse_scalar

FLOAT_RTOL = 1e-9


class Polynomial:
    """Immutable polynomial; ``coeffs[k]`` multiplies ``x**k``.

    The zero polynomial has no coefficients and degree ``-inf``.  Trailing
    coefficients that compare equal to zero are stripped, so the leading
    coefficient of a nonzero polynomial is never zero.
    """

    __slots__ = ("coeffs", "domain")

    def __init__(self, coeffs: Iterable = (), domain: Domain | None = None):
        coeffs = list(coeffs)
        if domain is None:
            domain = common_domain(coeffs)
        coeffs = [lift(c, domain) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "domain", domain)

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    # construction helpers

    @classmethod
    def zero(cls, domain: Domain = EXACT) -> "Polynomial":
        return cls((), domain)

    @classmethod
    def constant(cls, c, domain: Domain | None = None) -> "Polynomial":
        return cls((c,), domain)

    @classmethod
    def monomial(cls, k: int, c=1, domain: Domain = EXACT) -> "Polynomial":
        return cls([0] * k + [c], domain)

    @classmethod
    def x(cls, domain: Domain = EXACT) -> "Polynomial":
        return cls((0, 1), domain)

    @classmethod
    def linear_factor(cls, root, power: int = 1, domain: Domain | None = None) -> "Polynomial":
        """``(x - root)**power``."""
        if domain is None:
            domain = common_domain([root])
        return cls((-lift(root, domain), 1), domain) ** power

    # basic queries

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Scalar:
        return self.coeffs[-1] if self.coeffs else lift(0, self.domain)

    def coeff(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else lift(0, self.domain)

    def max_abs(self) -> float:
        return max((abs(float(c)) for c in self.coeffs), default=0.0)

    def to_domain(self, domain: Domain) -> "Polynomial":
        if domain is self.domain:
            return self
        if domain is EXACT:
            return Polynomial([Fraction(c) for c in self.coeffs], EXACT)
        return Polynomial([float(c) for c in self.coeffs], FLOAT)

    # arithmetic

    def _check(self, other: "Polynomial") -> None:
        if other.domain is not self.domain:
            raise MixedDomain(
                f"{self.domain.value} polynomial combined with {other.domain.value} polynomial"
            )

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial((lift(other, self.domain),), self.domain)

    def __add__(self, other) -> "Polynomial":
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial(out, self.domain)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial([-c for c in self.coeffs], self.domain)

    def __sub__(self, other) -> "Polynomial":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Polynomial":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            c = lift(other, self.domain)
            return Polynomial([a * c for a in self.coeffs], self.domain)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Polynomial.zero(self.domain)
        out = [lift(0, self.domain)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out, self.domain)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial.constant(1, self.domain)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, d: "Polynomial"):
        return poly_divmod(self, d)

    def __mod__(self, d: "Polynomial") -> "Polynomial":
        return poly_divmod(self, d)[1]

    def __floordiv__(self, d: "Polynomial") -> "Polynomial":
        return poly_divmod(self, d)[0]

    def __call__(self, x) -> Scalar:
        return evaluate(self, x)

    def derivative(self, k: int = 1) -> "Polynomial":
        return derivative(self, k)

    def compose_shift(self, c) -> "Polynomial":
        """Coefficients of ``p(x + c)``, i.e. the Taylor coefficients at ``c``."""
        c = lift(c, self.domain)
        out = list(self.coeffs)
        n = len(out)
        # repeated synthetic division
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                out[j] += c * out[j + 1]
        return Polynomial(out, self.domain)

    # comparison and display

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.domain is other.domain and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.domain, self.coeffs))

    def __repr__(self) -> str:
        return f"Polynomial([{', '.join(format_scalar(c) for c in self.coeffs)}], {self.domain.value})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            s = format_scalar(c)
            if mono and c == 1:
                s = mono
            elif mono and c == -1:
                s = "-" + mono
            elif mono:
                s = f"{s}*{mono}"
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")

    def to_strings(self) -> list[str]:
        return [format_scalar(c) for c in self.coeffs]

    @classmethod
    def from_strings(cls, items: Sequence[str], domain: Domain) -> "Polynomial":
        return cls([parse_scalar(s, domain) for s in items], domain)


def add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def derivative(p: Polynomial, k: int = 1) -> Polynomial:
    """k-th formal derivative; ``k == 0`` returns ``p``."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return p
    out = []
    for j in range(k, len(p.coeffs)):
        out.append(p.coeffs[j] * math.perm(j, k))
    return Polynomial(out, p.domain)


def evaluate(p: Polynomial, x) -> Scalar:
    """Horner evaluation."""
    x = lift(x, p.domain)
    acc = lift(0, p.domain)
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def poly_divmod(p: Polynomial, d: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Euclidean division: ``p == q*d + r`` with ``deg r < deg d``."""
    p._check(d)
    if d.is_zero():
        raise DivisionByZeroPolynomial("division by the zero polynomial")
    dn = len(d.coeffs) - 1
    if p.degree < d.degree:
        return Polynomial.zero(p.domain), p
    rem = list(p.coeffs)
    lead = d.coeffs[-1]
    quot = [lift(0, p.domain)] * (len(rem) - dn)
    for k in range(len(rem) - 1, dn - 1, -1):
        c = rem[k] / lead
        quot[k - dn] = c
        if c == 0:
            continue
        for j in range(dn + 1):
            rem[k - dn + j] -= c * d.coeffs[j]
    return Polynomial(quot, p.domain), Polynomial(rem[:dn], p.domain)


def equal_mod(p: Polynomial, q: Polynomial, h: Polynomial, rtol: float = FLOAT_RTOL) -> bool:
    """True iff ``p`` and ``q`` leave the same remainder on division by ``h``."""
    rp = poly_divmod(p, h)[1]
    rq = poly_divmod(q, h)[1]
    if p.domain is EXACT:
        return rp == rq
    return is_negligible(rp - rq, max(rp.max_abs(), rq.max_abs()), rtol)


def is_negligible(p: Polynomial, scale: float, rtol: float = FLOAT_RTOL) -> bool:
    """Every coefficient of ``p`` is within ``rtol * (1 + scale)`` of zero (exact: is zero)."""
    if p.domain is EXACT:
        return p.is_zero()
    tol = rtol * (1.0 + scale)
    return all(abs(c) <= tol for c in p.coeffs)
