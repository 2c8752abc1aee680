"""Rational approximants u/v with v(0) = 1 and f*v - u = 0 mod h."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expr as ex
from .errors import DegenerateTable, DegreeSplitError, PoleAtNode, PoleError, SingularMatrix
from .interp import SAFETY, UNIT_ROUNDOFF, HermiteData, osculate
from .jet import DERIVATIVE_GRID, Jet, jet_eval
from .modulus import NodeSet, build_modulus
from .poly import Polynomial, is_negligible
from .scalar import EXACT, FLOAT, DenseMatrix, Scalar, lift, solve_consistent, solve_linear

POLE_RTOL = 1e-12
CONGRUENCE_RTOL = 1e-8


@dataclass(frozen=True)
class RationalApproximant:
    u: Polynomial
    v: Polynomial
    nodeset: NodeSet

    @property
    def h(self) -> Polynomial:
        return build_modulus(self.nodeset)

    def __call__(self, x) -> Scalar:
        return rational_eval(self, x)


def _is_pole(v: Polynomial, value) -> bool:
    if v.domain is EXACT:
        return value == 0
    return abs(value) <= POLE_RTOL * (1.0 + v.max_abs())


def rational_fit(data: HermiteData, deg_u: int, deg_v: int) -> RationalApproximant:
    """Fit ``u`` (degree <= deg_u) and ``v = 1 + b_1 x + ...`` (degree <= deg_v).

    The conditions ``remainder(G v - u, h) = 0`` with ``G`` the osculant give
    ``n`` linear equations in ``deg_u + deg_v + 1`` unknowns.  A square split
    is solved directly.  A split with fewer unknowns than conditions is
    accepted only when the conditions are consistent (e.g. when ``f`` is
    itself a low-degree rational function); more unknowns than conditions
    is rejected.
    """
    ns = data.nodeset
    n = ns.n
    if deg_u < 0 or deg_v < 0:
        raise DegreeSplitError("degrees must be nonnegative")
    unknowns = deg_u + deg_v + 1
    if unknowns > n:
        raise DegreeSplitError(
            f"deg_u + deg_v + 1 = {unknowns} exceeds n = {n}: the system is underdetermined; "
            f"use a split with deg_u + deg_v = {n - 1}, e.g. deg_u={max(n - 1 - deg_v, 0)}, "
            f"deg_v={min(deg_v, n - 1)}"
        )
    domain = ns.domain
    zero, one = lift(0, domain), lift(1, domain)
    G = osculate(data).g
    h = build_modulus(ns)
    columns = []
    for k in range(deg_u + 1):
        columns.append([-one if j == k else zero for j in range(n)])
    xg = G
    for _ in range(deg_v):
        xg = (xg * Polynomial.x(domain)) % h
        columns.append([xg.coeff(j) for j in range(n)])
    rhs = [-G.coeff(j) for j in range(n)]
    A = DenseMatrix.from_rows([[col[j] for col in columns] for j in range(n)])
    try:
        if unknowns == n:
            sol = solve_linear(A, rhs)
        else:
            sol = solve_consistent(A, rhs, CONGRUENCE_RTOL)
    except SingularMatrix as exc:
        raise DegenerateTable(
            f"no rational approximant with deg_u={deg_u}, deg_v={deg_v} satisfies the "
            f"congruence ({exc})"
        ) from None
    u = Polynomial(sol[:deg_u + 1], domain)
    v = Polynomial([one, *sol[deg_u + 1:]], domain)
    for x in ns.xs:
        if _is_pole(v, v(x)):
            raise PoleAtNode(f"denominator vanishes at node {x}; the congruence holds only vacuously")
    return RationalApproximant(u, v, ns)


def rational_eval(R: RationalApproximant, x) -> Scalar:
    """``u(x) / v(x)``; PoleError where ``|v(x)|`` is negligible."""
    u, v = R.u, R.v
    if isinstance(x, float) or u.domain is FLOAT:
        x = float(x)
        u, v = u.to_domain(FLOAT), v.to_domain(FLOAT)
    vx = v(x)
    if _is_pole(v, vx):
        raise PoleError(f"denominator vanishes at x={x!r}")
    return u(x) / vx


def _horner_error(p: Polynomial, x: float) -> float:
    ax = abs(x)
    return 2 * max(len(p.coeffs), 1) * sum(abs(float(c)) * ax ** k for k, c in enumerate(p.coeffs))


def rational_rounding_allowance(R: RationalApproximant, x: float, f_x: float) -> float:
    """Rounding error of computing ``|f(x) - u(x)/v(x)|`` in double precision."""
    u, v = R.u.to_domain(FLOAT), R.v.to_domain(FLOAT)
    vx = abs(v(x))
    ratio = abs(u(x)) / vx
    return UNIT_ROUNDOFF * ((_horner_error(u, x) + ratio * _horner_error(v, x)) / vx
                            + ratio + 2 * abs(f_x))


def rational_remainder_bound(f: ex.Expr, R: RationalApproximant, x, interval,
                             grid: int = DERIVATIVE_GRID, fv_max: float | None = None,
                             rounding: bool = True) -> float:
    """``1.05 * M |h(x)| / (n! |v(x)|)`` with ``M`` the sampled max of ``|[f v]^(n)|``.

    With ``rounding`` the floating-point error of the computed difference is
    added (see ``rational_rounding_allowance``).
    """
    x = float(x)
    n = R.nodeset.n
    v = R.v.to_domain(FLOAT)
    vx = v(x)
    if _is_pole(v, vx):
        raise PoleError(f"denominator vanishes at x={x!r}")
    hx = build_modulus(R.nodeset.to_domain(FLOAT))(x)
    bound = 0.0
    if hx != 0:
        if fv_max is None:
            fv_max = max_product_derivative(f, v, n, interval, grid)
        bound = SAFETY * fv_max * abs(hx) / (math.factorial(n) * abs(vx))
    if rounding:
        bound += rational_rounding_allowance(R, x, float(jet_eval(f, x, 0).coeffs[0]))
    return bound


def max_product_derivative(f: ex.Expr, v: Polynomial, n: int, interval, grid: int = DERIVATIVE_GRID) -> float:
    """Sampled ``max |[f v]^(n)|`` on ``grid`` points, via the Cauchy product of jets."""
    v = v.to_domain(FLOAT)
    a, b = (float(t) for t in interval)
    best = 0.0
    for t in np.linspace(a, b, grid):
        t = float(t)
        prod = jet_eval(f, t, n) * Jet.from_polynomial(v, t, n)
        best = max(best, abs(prod.derivative(n)))
    return best


def verify_congruence(R: RationalApproximant, data: HermiteData, rtol: float = CONGRUENCE_RTOL) -> bool:
    """Recompute the osculant ``G`` and check ``remainder(G v - u, h) = 0``."""
    G = osculate(data).g
    h = build_modulus(data.nodeset)
    u, v = R.u.to_domain(G.domain), R.v.to_domain(G.domain)
    r = (G * v - u) % h
    return is_negligible(r, max((G * v).max_abs(), u.max_abs()), rtol)
