import math
from fractions import Fraction as F

import mpmath as mp
import pytest

from gentaylor.errors import WitnessNotBracketed
from gentaylor.expr import parse
from gentaylor.interp import (
    HermiteData,
    c_witness,
    hermite_data_from_expr,
    osculate_spectral,
    osculate_vandermonde,
    remainder_quotient,
    rounding_allowance,
    singular_limit,
    spectral_basis,
    taylor_value_with_bound,
)
from gentaylor.jet import derivative_at, derivative_range, evaluate
from gentaylor.modulus import NodeSet, build_modulus
from gentaylor.poly import Polynomial as P
from gentaylor.poly import equal_mod, poly_divmod
from gentaylor.scalar import FLOAT

from conftest import random_fraction, random_nodeset, random_poly

E = math.e
EXP = parse("exp(x)")
NS22 = NodeSet([(0.0, 2), (1.0, 2)])

# exact 4x4 solve with symbolic e: g = 1 + x + (2e-5) x^2 + (3-e) x^3
CUBIC = [1.0, 1.0, 2 * E - 5, 3 - E]
# mpmath at 40 digits: e^(1/2) - (5/8 + 3e/8), and 1.05 e (1/16) / 24
ERR_HALF = 4.365585027986183588e-3
BOUND_HALF = 7.432801874692702130e-3
Q_HALF = 1.676384650746694498
C_HALF = 0.5166394809463888937


def random_data(rng, max_r=4, max_m=4):
    ns = random_nodeset(rng, max_r=max_r, max_m=max_m)
    return HermiteData(ns, tuple(tuple(random_fraction(rng) for _ in range(m)) for m in ns.ms))


def test_hermite_data_examples():
    d = hermite_data_from_expr(EXP, NS22)
    assert d.values[0] == (1.0, 1.0)
    assert d.values[1] == pytest.approx((E, E))
    assert hermite_data_from_expr(parse("x^3"), NodeSet([(1, 2)])).values == ((1, 3),)
    assert hermite_data_from_expr(parse("sin(x)"), NodeSet([(0.0, 3)])).values == ((0.0, 1.0, -0.0),)


def test_hermite_data_shape_checked():
    with pytest.raises(ValueError):
        HermiteData(NodeSet([(0, 2)]), ((1,),))


def test_vandermonde_exp_cubic():
    g = osculate_vandermonde(hermite_data_from_expr(EXP, NS22)).g
    assert list(g.coeffs) == pytest.approx(CUBIC, rel=1e-12)


def test_single_node_is_taylor():
    g = osculate_vandermonde(hermite_data_from_expr(EXP, NodeSet([(F(0), 3)]))).g
    assert g == P([1, 1, F(1, 2)])
    g = osculate_spectral(hermite_data_from_expr(EXP, NodeSet([(F(0), 3)]))).g
    assert g == P([1, 1, F(1, 2)])


def test_single_node_shifted_taylor(rng):
    for _ in range(20):
        x0 = random_fraction(rng)
        n = rng.randint(1, 7)
        vals = tuple(random_fraction(rng) for _ in range(n))
        data = HermiteData(NodeSet([(x0, n)]), (vals,))
        taylor = P()
        for k, v in enumerate(vals):
            taylor = taylor + P.linear_factor(x0, k) * (v / math.factorial(k))
        assert osculate_vandermonde(data).g == taylor
        assert osculate_spectral(data).g == taylor


def test_polynomial_reproduced():
    f = parse("2 - x + 3*x^2")
    ns = NodeSet([(F(-1), 2), (F(2), 2)])
    g = osculate_vandermonde(hermite_data_from_expr(f, ns)).g
    assert g == P([2, -1, 3])


def test_spectral_basis_examples():
    s = spectral_basis(NodeSet([(0, 1), (1, 1)])).idempotents
    assert s == (P([1, -1]), P([0, 1]))
    assert spectral_basis(NodeSet([(F(3), 4)])).idempotents == (P([1]),)
    ns = NodeSet([(0, 2), (1, 2)])
    h = build_modulus(ns)
    s0, s1 = spectral_basis(ns).idempotents
    assert equal_mod(s0 + s1, P([1]), h)
    assert equal_mod(s0 * s0, s0, h) and equal_mod(s1 * s1, s1, h)


def test_spectral_basis_invariants(rng):
    for _ in range(40):
        ns = random_nodeset(rng)
        basis = spectral_basis(ns)
        h = basis.h
        total = P()
        for i, s in enumerate(basis.idempotents):
            assert s.degree < ns.n
            total = total + s
            assert (s * s) % h == s
            x, m = ns.nodes[i]
            assert (P.linear_factor(x, m) * s) % h == P()
            for j, t in enumerate(basis.idempotents):
                if j != i:
                    assert (s * t) % h == P()
        assert total % h == P([1])


def test_spectral_linear_interpolation():
    data = HermiteData(NodeSet([(0, 1), (1, 1)]), ((F(3),), (F(7),)))
    assert osculate_spectral(data).g == P([3, 4])


def test_spectral_matches_vandermonde_float():
    data = hermite_data_from_expr(EXP, NS22)
    a, b = osculate_vandermonde(data).g, osculate_spectral(data).g
    assert list(a.coeffs) == pytest.approx(list(b.coeffs), rel=1e-12)


def test_cross_method_exact(rng):
    for _ in range(60):
        data = random_data(rng)
        a = osculate_vandermonde(data)
        assert a.g == osculate_spectral(data).g
        assert a.g.degree < a.h.degree
        for (x, m), vals in zip(data.nodeset.nodes, data.values):
            for k in range(m):
                assert a.g.derivative(k)(x) == vals[k]


def test_euclidean_equivalence(rng):
    for _ in range(60):
        p = random_poly(rng, 10)
        ns = random_nodeset(rng, max_r=3, max_m=3)
        coeffs = " + ".join(f"({c.numerator}/{c.denominator})*x^{k}" for k, c in enumerate(p.coeffs)) or "0"
        data = hermite_data_from_expr(parse(coeffs), ns)
        assert osculate_vandermonde(data).g == poly_divmod(p, build_modulus(ns))[1]


def test_value_with_bound_exp():
    g_half, bound = taylor_value_with_bound(EXP, NS22, 0.5, (0, 1))
    assert g_half == pytest.approx(0.625 + 0.375 * E, abs=1e-9)
    assert abs(math.exp(0.5) - g_half) == pytest.approx(ERR_HALF, abs=1e-6)
    assert bound == pytest.approx(BOUND_HALF, rel=1e-9)
    assert abs(math.exp(0.5) - g_half) <= bound


def test_value_with_bound_at_node():
    g1, bound = taylor_value_with_bound(EXP, NS22, 1.0, (0, 1))
    assert bound == 0.0 and g1 == math.e


def test_value_with_bound_polynomial():
    f = parse("1 + x - x^2")
    ns = NodeSet([(F(0), 2), (F(1), 2)])
    g, bound = taylor_value_with_bound(f, ns, 0.3, (0, 1), rounding=False)
    assert bound == 0.0
    assert g == pytest.approx(evaluate(f, 0.3), abs=1e-15)
    g, bound = taylor_value_with_bound(f, ns, 0.3, (0, 1))
    assert abs(g - evaluate(f, 0.3)) <= bound < 1e-14


def test_remainder_ratio_near_high_multiplicity_node():
    # f - g ~ d^6 / 720 is far below the rounding level of exp(x)
    ns = NodeSet([(0.3, 6)])
    osc = osculate_vandermonde(hermite_data_from_expr(EXP, ns))
    for d in (1e-3, -2e-3, 1e-2):
        q = remainder_quotient(EXP, osc, 0.3 + d)
        assert math.exp(0.3) <= q <= math.exp(0.3 + d) or math.exp(0.3 + d) <= q <= math.exp(0.3)


def test_rounding_allowance_scale():
    g = P([1.0, -2.0, 4.0], FLOAT)
    assert rounding_allowance(g, 0.5, 1.0) == pytest.approx(2 ** -53 * (2 * 3 * 3.0 + 2.0))


def test_witness_exp():
    c = c_witness(EXP, NS22, 0.5, (0, 1))
    assert 0 < c < 1
    assert c == pytest.approx(C_HALF, abs=1e-7)
    assert math.exp(c) == pytest.approx(Q_HALF, rel=1e-8)
    assert remainder_quotient(EXP, osculate_vandermonde(hermite_data_from_expr(EXP, NS22)), 0.5) == \
        pytest.approx(Q_HALF, rel=1e-10)


def test_witness_constant_derivative():
    f = parse("2*x^3 - x")
    ns = NodeSet([(0.0, 1), (0.5, 1), (1.0, 1)])
    assert c_witness(f, ns, 0.25, (0, 1)) == 0.5


def test_witness_sin():
    ns = NodeSet([(0.0, 1), (math.pi, 1)])
    c = c_witness(parse("sin(x)"), ns, math.pi / 2, (0, math.pi))
    # q = -8/pi^2, -sin(c) = q: asin(8/pi^2) or pi - asin(8/pi^2); leftmost wins
    assert c == pytest.approx(0.9451238454093936, abs=1e-7)


def test_witness_at_node_rejected():
    with pytest.raises(ValueError):
        c_witness(EXP, NS22, 1.0, (0, 1))


def test_witness_not_bracketed():
    # interval (0.6, 1) excludes the true witness near 0.517
    with pytest.raises(WitnessNotBracketed):
        c_witness(EXP, NS22, 0.5, (0.6, 1.0))


def test_singular_limit_examples():
    data = hermite_data_from_expr(EXP, NS22)
    lim = singular_limit(EXP, data, osculate_vandermonde(data), 0)
    assert lim == pytest.approx((11 - 4 * E) / 2, abs=1e-12)
    assert 1 / 24 <= lim <= E / 24
    ns = NodeSet([(F(0), 3)])
    data = hermite_data_from_expr(EXP, ns)
    assert singular_limit(EXP, data, osculate_vandermonde(data), 0) == F(1, 6)
    f = parse("x^2 - 3*x")
    ns = NodeSet([(F(0), 2), (F(1), 2)])
    data = hermite_data_from_expr(f, ns)
    assert singular_limit(f, data, osculate_vandermonde(data), 1) == 0


def test_singular_limit_is_the_limit():
    data = hermite_data_from_expr(EXP, NS22)
    osc = osculate_vandermonde(data)
    lim = singular_limit(EXP, data, osc, 1)
    with mp.workdps(40):
        g = [mp.mpf(1), mp.mpf(1), 2 * mp.e - 5, 3 - mp.e]
        t = 1 - mp.mpf("1e-12")
        ratio = (mp.exp(t) - mp.polyval(g[::-1], t)) / (t ** 2 * (t - 1) ** 2)
    assert lim == pytest.approx(float(ratio), rel=1e-9)


@pytest.mark.parametrize("text", ["exp(x)", "sin(x)", "1/(1+x^2)"])
def test_remainder_range_and_bound(text, rng):
    f = parse(text)
    for _ in range(4):
        r = rng.randint(1, 3)
        xs = sorted(rng.sample(range(0, 11), r))
        ns = NodeSet([(x / 10, rng.randint(1, 2)) for x in xs], domain=FLOAT)
        osc = osculate_vandermonde(hermite_data_from_expr(f, ns))
        lo, hi = derivative_range(f, ns.n, (0, 1))
        delta = 1e-6 * (1 + abs(hi))
        for _ in range(20):
            x = rng.random()
            if x in ns.xs:
                continue
            q = remainder_quotient(f, osc, x)
            assert lo - delta <= q <= hi + delta
            g_x, bound = taylor_value_with_bound(f, ns, x, (0, 1), osc, (lo, hi))
            assert abs(evaluate(f, x) - g_x) <= bound
