"""Truncated Taylor arithmetic ("jets") and derivative evaluation.

A jet of order K at a center stores ``f^(k)(center) / k!`` for k = 0..K.
Jets over ``Fraction`` stay exact; an elementary function at a rational
argument is only allowed when its value is rational too (``exp(0)``,
``log(1)``, ``sqrt(4/9)`` ...), otherwise InexactError is raised and the
caller should switch to floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import expr as ex
from .errors import DomainError, InexactError, PoleError
from .poly import Polynomial
from .scalar import EXACT, FLOAT, Domain, Scalar, common_domain, lift

DERIVATIVE_GRID = 1024


@dataclass(frozen=True)
class Jet:
    center: Scalar
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def domain(self) -> Domain:
        return common_domain([self.center, *self.coeffs], FLOAT)

    @classmethod
    def constant(cls, value, center, order: int) -> "Jet":
        zero = value * 0
        return cls(center, (value,) + (zero,) * order)

    @classmethod
    def variable(cls, center, order: int) -> "Jet":
        zero, one = center * 0, center * 0 + 1
        coeffs = (center, one) + (zero,) * (order - 1) if order >= 1 else (center,)
        return cls(center, coeffs)

    @classmethod
    def from_polynomial(cls, p: Polynomial, center, order: int) -> "Jet":
        shifted = p.compose_shift(center)
        return cls(lift(center, p.domain), tuple(shifted.coeff(k) for k in range(order + 1)))

    def derivative(self, k: int) -> Scalar:
        return math.factorial(k) * self.coeffs[k]

    def to_polynomial(self) -> Polynomial:
        """Taylor polynomial ``sum c_k (x - center)^k`` in the monomial basis."""
        domain = self.domain
        out = Polynomial.zero(domain)
        step = Polynomial.linear_factor(self.center, 1, domain)
        power = Polynomial.constant(1, domain)
        for c in self.coeffs:
            out = out + power * c
            power = power * step
        return out

    def _zero(self):
        return self.coeffs[0] * 0

    def _wrap(self, other) -> "Jet":
        if isinstance(other, Jet):
            return other
        return Jet.constant(self.coeffs[0] * 0 + other, self.center, self.order)

    def __add__(self, other) -> "Jet":
        other = self._wrap(other)
        return Jet(self.center, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "Jet":
        return Jet(self.center, tuple(-a for a in self.coeffs))

    def __sub__(self, other) -> "Jet":
        return self + (-self._wrap(other))

    def __rsub__(self, other) -> "Jet":
        return self._wrap(other) - self

    def __mul__(self, other) -> "Jet":
        other = self._wrap(other)
        a, b = self.coeffs, other.coeffs
        return Jet(self.center, tuple(
            sum((a[j] * b[k - j] for j in range(k + 1)), self._zero()) for k in range(len(a))
        ))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Jet":
        other = self._wrap(other)
        a, b = self.coeffs, other.coeffs
        if b[0] == 0:
            raise PoleError(f"division by a series vanishing at {self.center!r}")
        c = []
        for k in range(len(a)):
            acc = a[k]
            for j in range(1, k + 1):
                acc -= b[j] * c[k - j]
            c.append(acc / b[0])
        return Jet(self.center, tuple(c))

    def __rtruediv__(self, other) -> "Jet":
        return self._wrap(other) / self

    def __pow__(self, n: int) -> "Jet":
        if n < 0:
            return 1 / (self ** -n)
        result = Jet.constant(self._zero() + 1, self.center, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


# elementary functions on jets

def _exact_value(name: str, a0: Fraction) -> Fraction:
    special = {
        ("exp", 0): 1, ("log", 1): 0, ("sin", 0): 0, ("cos", 0): 1, ("tan", 0): 0,
        ("atan", 0): 0, ("sinh", 0): 0, ("cosh", 0): 1,
    }
    if (name, a0) in special:
        return Fraction(special[name, a0])
    if name == "sqrt":
        p, q = math.isqrt(a0.numerator), math.isqrt(a0.denominator)
        if p * p == a0.numerator and q * q == a0.denominator:
            return Fraction(p, q)
    raise InexactError(f"{name}({a0}) is not rational; use the float backend")


def _head(name: str, a0):
    if isinstance(a0, Fraction):
        return _exact_value(name, a0)
    return getattr(math, name)(a0)


def _derivative_series(a: Sequence) -> list:
    return [(k + 1) * a[k + 1] for k in range(len(a) - 1)]


def _integrate(c0, d: Sequence) -> tuple:
    return (c0,) + tuple(d[k] / (k + 1) for k in range(len(d)))


def jet_exp(a: Jet) -> Jet:
    x = a.coeffs
    e = [_head("exp", x[0])]
    for k in range(1, len(x)):
        e.append(sum((j * x[j] * e[k - j] for j in range(1, k + 1)), x[0] * 0) / k)
    return Jet(a.center, tuple(e))


def jet_log(a: Jet) -> Jet:
    x = a.coeffs
    if x[0] <= 0:
        raise DomainError(f"log of nonpositive value {x[0]!r} at x={a.center!r}")
    out = [_head("log", x[0])]
    for k in range(1, len(x)):
        acc = x[k] - sum((j * out[j] * x[k - j] for j in range(1, k)), x[0] * 0) / k
        out.append(acc / x[0])
    return Jet(a.center, tuple(out))


def _sin_cos(a: Jet, hyperbolic: bool = False) -> tuple[Jet, Jet]:
    x = a.coeffs
    names = ("sinh", "cosh") if hyperbolic else ("sin", "cos")
    s, c = [_head(names[0], x[0])], [_head(names[1], x[0])]
    sign = 1 if hyperbolic else -1
    zero = x[0] * 0
    for k in range(1, len(x)):
        s.append(sum((j * x[j] * c[k - j] for j in range(1, k + 1)), zero) / k)
        c.append(sign * sum((j * x[j] * s[k - j] for j in range(1, k + 1)), zero) / k)
    return Jet(a.center, tuple(s)), Jet(a.center, tuple(c))


def jet_sin(a: Jet) -> Jet:
    return _sin_cos(a)[0]


def jet_cos(a: Jet) -> Jet:
    return _sin_cos(a)[1]


def jet_tan(a: Jet) -> Jet:
    s, c = _sin_cos(a)
    if isinstance(a.coeffs[0], Fraction):
        if a.coeffs[0] != 0:
            raise InexactError(f"tan({a.coeffs[0]}) is not rational; use the float backend")
    return s / c


def jet_sinh(a: Jet) -> Jet:
    return _sin_cos(a, hyperbolic=True)[0]


def jet_cosh(a: Jet) -> Jet:
    return _sin_cos(a, hyperbolic=True)[1]


def jet_atan(a: Jet) -> Jet:
    head = _head("atan", a.coeffs[0])
    if a.order == 0:
        return Jet(a.center, (head,))
    low = Jet(a.center, a.coeffs[:-1])
    d = Jet(a.center, tuple(_derivative_series(a.coeffs))) / (1 + low * low)
    return Jet(a.center, _integrate(head, d.coeffs))


def jet_sqrt(a: Jet) -> Jet:
    x = a.coeffs
    if x[0] < 0:
        raise DomainError(f"sqrt of negative value {x[0]!r} at x={a.center!r}")
    if x[0] == 0 and len(x) > 1:
        raise DomainError(f"sqrt is not differentiable at zero argument (x={a.center!r})")
    s = [_head("sqrt", x[0])]
    for k in range(1, len(x)):
        acc = x[k] - sum((s[j] * s[k - j] for j in range(1, k)), x[0] * 0)
        s.append(acc / (2 * s[0]))
    return Jet(a.center, tuple(s))


_UNARY = {
    "exp": jet_exp, "log": jet_log, "sin": jet_sin, "cos": jet_cos, "tan": jet_tan,
    "atan": jet_atan, "sqrt": jet_sqrt, "sinh": jet_sinh, "cosh": jet_cosh,
}


def _integer_exponent(node: ex.Expr) -> int | None:
    """The exponent as an int when it is a closed, integer-valued rational expression."""
    if ex.has_var(node):
        return None
    try:
        value = _eval(node, Jet.constant(Fraction(0), Fraction(0), 0)).coeffs[0]
    except (InexactError, PoleError, DomainError):
        return None
    if value.denominator == 1:
        return value.numerator
    return None


def _eval(node: ex.Expr, var: Jet) -> Jet:
    if isinstance(node, ex.Var):
        return var
    if isinstance(node, ex.Num):
        v = node.value if isinstance(var.coeffs[0], Fraction) else float(node.value)
        return Jet.constant(v, var.center, var.order)
    if isinstance(node, ex.Const):
        if isinstance(var.coeffs[0], Fraction):
            raise InexactError(f"constant {node.name} is irrational; use the float backend")
        return Jet.constant(math.pi if node.name == "pi" else math.e, var.center, var.order)
    if isinstance(node, ex.Neg):
        return -_eval(node.arg, var)
    if isinstance(node, ex.Call):
        return _UNARY[node.name](_eval(node.arg, var))
    left = _eval(node.left, var)
    if node.op == "^":
        n = _integer_exponent(node.right)
        if n is not None:
            return left ** n
        return jet_exp(_eval(node.right, var) * jet_log(left))
    right = _eval(node.right, var)
    if node.op == "+":
        return left + right
    if node.op == "-":
        return left - right
    if node.op == "*":
        return left * right
    return left / right


def jet_eval(f: ex.Expr, center, order: int) -> Jet:
    """Jet of ``f`` at ``center`` to ``order``; ``coeffs[k] = f^(k)(center)/k!``.

    A ``Fraction`` center evaluates exactly (InexactError if impossible);
    a float or int center evaluates in double precision.
    """
    if order < 0:
        raise ValueError("jet order must be nonnegative")
    if isinstance(f, str):
        f = ex.parse(f)
    if not isinstance(center, Fraction):
        center = float(center)
    try:
        return _eval(f, Jet.variable(center, order))
    except ZeroDivisionError as exc:
        if isinstance(exc, PoleError):
            raise
        raise PoleError(str(exc)) from None
    except (ValueError, OverflowError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"cannot evaluate at x={center!r}: {exc}") from None


def evaluate(f: ex.Expr, x) -> Scalar:
    return jet_eval(f, x, 0).coeffs[0]


def derivative_at(f: ex.Expr, x, k: int) -> Scalar:
    """``f^(k)(x)`` via a jet of order ``k``."""
    return jet_eval(f, x, k).derivative(k)


def derivative_range(f: ex.Expr, k: int, interval, grid: int = DERIVATIVE_GRID) -> tuple[float, float]:
    """(min, max) of ``f^(k)`` sampled on ``grid`` uniform points of ``[a, b]``, ends included.

    This is a sampling estimate and can miss interior extrema; widen it
    before using it as a bound.
    """
    a, b = (float(v) for v in interval)
    values = [float(derivative_at(f, t, k)) for t in np.linspace(a, b, grid)]
    return min(values), max(values)
