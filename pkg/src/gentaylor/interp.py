"""Osculating (Hermite) interpolation modulo h(x) and its remainder.

Two independent constructions are provided: the confluent Vandermonde
solve and the spectral-basis (Chinese remainder) assembly.  Both return the
unique polynomial ``g`` with ``deg g < n`` matching ``f^(k)(x_i)`` for all
``k < m_i``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import WitnessNotBracketed
from .jet import Jet, derivative_at, derivative_range, evaluate, jet_eval
from .modulus import NodeSet, build_modulus
from .poly import Polynomial
from .scalar import FLOAT, DenseMatrix, Scalar, lift, solve_linear

SAFETY = 1.05
WITNESS_GRID = 2048
UNIT_ROUNDOFF = 2.0 ** -53
LOCAL_RADIUS = 0.25
LOCAL_TERMS = 30


@dataclass(frozen=True)
class HermiteData:
    """``values[i][k] = f^(k)(x_i)`` for ``k < m_i``."""

    nodeset: NodeSet
    values: tuple

    def __post_init__(self):
        vals = tuple(tuple(lift(v, self.nodeset.domain) for v in row) for row in self.values)
        if len(vals) != self.nodeset.r:
            raise ValueError(f"expected values for {self.nodeset.r} nodes, got {len(vals)}")
        for (x, m), row in zip(self.nodeset.nodes, vals):
            if len(row) != m:
                raise ValueError(f"node {x} has multiplicity {m} but {len(row)} values")
        object.__setattr__(self, "values", vals)

    @property
    def domain(self):
        return self.nodeset.domain


@dataclass(frozen=True)
class Osculant:
    g: Polynomial
    h: Polynomial
    nodeset: NodeSet

    @property
    def n(self) -> int:
        return self.nodeset.n

    def __call__(self, x) -> Scalar:
        return self.g(x)


@dataclass(frozen=True)
class SpectralBasis:
    h: Polynomial
    nodeset: NodeSet
    idempotents: tuple


def hermite_data_from_expr(f: ex.Expr, ns: NodeSet) -> HermiteData:
    values = []
    for x, m in ns.nodes:
        jet = jet_eval(f, x, m - 1)
        values.append(tuple(jet.derivative(k) for k in range(m)))
    return HermiteData(ns, tuple(values))


def osculate_vandermonde(data: HermiteData) -> Osculant:
    """Solve the confluent Vandermonde system for the coefficients of ``g``.

    The row for condition ``(i, k)`` holds ``d^k/dx^k x^j`` at ``x_i``.
    """
    ns = data.nodeset
    n = ns.n
    zero = lift(0, ns.domain)
    rows, rhs = [], []
    for (x, m), vals in zip(ns.nodes, data.values):
        for k in range(m):
            rows.append([
                math.perm(j, k) * x ** (j - k) if j >= k else zero for j in range(n)
            ])
            rhs.append(vals[k])
    coeffs = solve_linear(DenseMatrix.from_rows(rows), rhs)
    return Osculant(Polynomial(coeffs, ns.domain), build_modulus(ns), ns)


def spectral_basis(ns: NodeSet) -> SpectralBasis:
    """Idempotents ``s_i`` of the factor ring modulo ``h``.

    ``h_i = h / (x - x_i)^m_i``; ``w_i`` is the reciprocal series of ``h_i``
    at ``x_i`` truncated to order ``m_i - 1``; ``s_i = w_i h_i mod h``.
    """
    h = build_modulus(ns)
    basis = []
    for i, (x, m) in enumerate(ns.nodes):
        hi = Polynomial.constant(1, ns.domain)
        for j, (y, mj) in enumerate(ns.nodes):
            if j != i:
                hi = hi * Polynomial.linear_factor(y, mj, ns.domain)
        w = 1 / Jet.from_polynomial(hi, x, m - 1)
        basis.append((w.to_polynomial() * hi) % h)
    return SpectralBasis(h, ns, tuple(basis))


def node_taylor_polynomial(x, derivs) -> Polynomial:
    """``sum_k derivs[k] (t - x)^k / k!``."""
    return Jet(x, tuple(d / math.factorial(k) for k, d in enumerate(derivs))).to_polynomial()


def osculate_spectral(data: HermiteData, basis: SpectralBasis | None = None) -> Osculant:
    ns = data.nodeset
    if basis is None:
        basis = spectral_basis(ns)
    g = Polynomial.zero(ns.domain)
    for (x, _), vals, s in zip(ns.nodes, data.values, basis.idempotents):
        g = g + node_taylor_polynomial(x, vals) * s
    return Osculant(g % basis.h, basis.h, ns)


def osculate(data: HermiteData) -> Osculant:
    return osculate_vandermonde(data)


def _node_index(ns: NodeSet, x) -> int | None:
    for i, xi in enumerate(ns.xs):
        if xi == x:
            return i
    return None


def rounding_allowance(g: Polynomial, x: float, f_x: float) -> float:
    """A priori rounding error of computing ``|f(x) - g(x)|`` in double precision.

    ``2 n u sum |c_k| |x|^k`` for Horner evaluation of ``g`` plus ``2 u |f(x)|``
    for evaluating ``f`` and subtracting, with ``u`` the unit roundoff.
    """
    n = max(len(g.coeffs), 1)
    ax = abs(x)
    horner = sum(abs(float(c)) * ax ** k for k, c in enumerate(g.coeffs))
    return UNIT_ROUNDOFF * (2 * n * horner + 2 * abs(f_x))


def taylor_value_with_bound(f: ex.Expr, ns: NodeSet, x, interval, osculant: Osculant | None = None,
                            drange: tuple[float, float] | None = None,
                            rounding: bool = True) -> tuple[float, float]:
    """``(g(x), bound)`` with ``bound = 1.05 * max|f^(n)| * |h(x)| / n!``.

    ``max|f^(n)|`` is sampled over ``interval`` (see ``derivative_range``),
    so the bound holds whenever the sampling brackets the true extremum.
    With ``rounding`` the floating-point error of ``|f(x) - g(x)|`` itself
    (``rounding_allowance``) is added, so the bound also covers the computed
    difference where the remainder is below one ulp.  At a node the error
    term is exactly zero and ``g(x_i) = f(x_i)``.
    """
    ns = ns.to_domain(FLOAT)
    x = float(x)
    if osculant is None:
        osculant = osculate_vandermonde(hermite_data_from_expr(f, ns))
    n = ns.n
    if _node_index(ns, x) is not None:
        return float(evaluate(f, x)), 0.0
    if drange is None:
        drange = derivative_range(f, n, interval)
    m_n = SAFETY * max(abs(drange[0]), abs(drange[1]))
    g = osculant.g.to_domain(FLOAT)
    g_x = g(x)
    bound = m_n * abs(osculant.h.to_domain(FLOAT)(x)) / math.factorial(n)
    if rounding:
        bound += rounding_allowance(g, x, float(evaluate(f, x)))
    return g_x, bound


def remainder_ratio(f: ex.Expr, osculant: Osculant, x) -> float:
    """``(f(x) - g(x)) / h(x)`` without cancellation near the nodes.

    Close to a node ``x_i`` the difference ``f - g`` is far below the
    rounding level of ``f``, so the node-centred series
    ``sum_{k >= m_i} (f_k - g_k) (x - x_i)^(k - m_i) / h_i(x)`` is summed
    instead, where ``f_k, g_k`` are Taylor coefficients at ``x_i`` and
    ``h_i = h / (x - x_i)^m_i``.  Falls back to the direct quotient when the
    series does not converge fast enough.
    """
    x = float(x)
    ns = osculant.nodeset.to_domain(FLOAT)
    g = osculant.g.to_domain(FLOAT)
    i = min(range(ns.r), key=lambda j: abs(ns.xs[j] - x))
    xi, mi = ns.nodes[i]
    d = x - xi
    others = [abs(y - xi) for y in ns.xs if y != xi]
    if d != 0 and abs(d) <= LOCAL_RADIUS * min(others + [1.0]):
        order = mi + LOCAL_TERMS
        fk = jet_eval(f, xi, order).coeffs
        gk = g.compose_shift(xi)
        terms = [(fk[k] - gk.coeff(k)) * d ** (k - mi) for k in range(mi, order + 1)]
        total = math.fsum(terms)
        if abs(terms[-1]) <= 1e-17 * abs(total) or total == 0:
            hi = 1.0
            for y, m in ns.nodes:
                if y != xi:
                    hi *= (x - y) ** m
            return total / hi
    h_x = osculant.h.to_domain(FLOAT)(x)
    if h_x == 0:
        return float(singular_limit(f, None, Osculant(g, osculant.h.to_domain(FLOAT), ns), i))
    return (float(evaluate(f, x)) - g(x)) / h_x


def remainder_quotient(f: ex.Expr, osculant: Osculant, x) -> float:
    """``q = n! (f(x) - g(x)) / h(x)``, which equals ``f^(n)(c)`` for some ``c``."""
    return math.factorial(osculant.n) * remainder_ratio(f, osculant, x)


def c_witness(f: ex.Expr, ns: NodeSet, x, interval, osculant: Osculant | None = None) -> float:
    """A point ``c`` in ``(a, b)`` with ``f^(n)(c) = n! (f(x) - g(x)) / h(x)``.

    Scans a 2048-point grid of the open interval for the leftmost sign change
    of ``f^(n) - q`` and refines it by bisection.
    """
    ns = ns.to_domain(FLOAT)
    x = float(x)
    if _node_index(ns, x) is not None:
        raise ValueError("the witness is undefined at a node (h(x) = 0); use singular_limit")
    if osculant is None:
        osculant = osculate_vandermonde(hermite_data_from_expr(f, ns))
    n = ns.n
    q = remainder_quotient(f, osculant, x)
    tol = 1e-8 * (1 + abs(q))
    a, b = (float(v) for v in interval)
    ts = a + (b - a) * np.arange(1, WITNESS_GRID + 1) / (WITNESS_GRID + 1)

    def phi(t):
        return float(derivative_at(f, float(t), n)) - q

    vals = [phi(t) for t in ts]
    if max(vals) - min(vals) <= 1e-9 * (1 + abs(q)) and abs(vals[0]) <= tol:
        return (a + b) / 2
    for j, v in enumerate(vals):
        if abs(v) <= 1e-9 * (1 + abs(q)):
            return float(ts[j])
        if j + 1 < len(vals) and (v < 0) != (vals[j + 1] < 0):
            c, residual = _bisect(phi, float(ts[j]), float(ts[j + 1]), v)
            if residual <= tol:
                return c
            break
    fn = [v + q for v in vals]
    raise WitnessNotBracketed(q, min(fn), max(fn))


def _bisect(phi, lo: float, hi: float, flo: float) -> tuple[float, float]:
    """Bisect down to floating-point resolution; return the best point and its |phi|."""
    best, best_val = lo, abs(flo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = phi(mid)
        if abs(fm) < best_val:
            best, best_val = mid, abs(fm)
        if fm == 0:
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return best, best_val


def singular_limit(f: ex.Expr, data: HermiteData, osculant: Osculant, i: int) -> Scalar:
    """``lim_{x -> x_i} (f - g)/h = (f^(m)(x_i) - g^(m)(x_i)) / h^(m)(x_i)`` with ``m = m_i``."""
    x, m = (data.nodeset if data is not None else osculant.nodeset).nodes[i]
    fm = derivative_at(f, x, m)
    gm = osculant.g.derivative(m)(x)
    hm = osculant.h.derivative(m)(x)
    return (fm - gm) / hm
