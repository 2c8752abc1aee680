from fractions import Fraction as F

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gentaylor.errors import DivisionByZeroPolynomial, MixedDomain
from gentaylor.modulus import build_modulus
from gentaylor.poly import Polynomial as P
from gentaylor.poly import add, derivative, equal_mod, evaluate, mul, poly_divmod
from gentaylor.scalar import FLOAT

from conftest import random_nodeset, random_poly

X = P.x()


def test_add_examples():
    assert add(P([1, 1]), P([-1, -1])) == P()
    assert add(P([1, 1]), P([1, -1])) == P([2])
    assert add(P([0, 0, 1]), P([-2, 3])) == P([-2, 3, 1])


def test_zero_polynomial_degree():
    assert P().degree == -math.inf
    assert P([0, 0]).is_zero()
    assert P([1, 2, 0]).degree == 1


def test_mul_examples():
    assert mul(P([-1, 1]), P([-1, 1])) == P([1, -2, 1])
    assert mul(P([3, 4]), P()) == P()
    assert mul(P([0, 0, 1]), P([1, -2, 1])) == P([0, 0, 1, -2, 1])


def test_derivative_examples():
    assert derivative(P([0, 0, 0, 1]), 1) == P([0, 0, 3])
    assert derivative(P([0, 0, 1, -2, 1]), 2) == P([2, -12, 12])
    assert derivative(P([7]), 1) == P()
    p = P([1, 2, 3])
    assert derivative(p, 0) is p


def test_eval_examples():
    assert evaluate(P([1, -2, 1]), 1) == 0
    assert evaluate(P([0, 0, 1, -2, 1]), F(1, 2)) == F(1, 16)
    assert evaluate(P(), 5) == 0


def test_divmod_examples():
    q, r = poly_divmod(P([0, 0, 0, 1]), P([1, -2, 1]))
    assert (q, r) == (P([2, 1]), P([-2, 3]))
    assert q * P([1, -2, 1]) + r == P([0, 0, 0, 1])
    p = P([1, 2])
    assert poly_divmod(p, P([0, 0, 1])) == (P(), p)
    assert poly_divmod(P([1, -2, 1]), P([-1, 1])) == (P([-1, 1]), P())


def test_divmod_by_zero():
    with pytest.raises(DivisionByZeroPolynomial):
        poly_divmod(P([1]), P())


def test_equal_mod_examples():
    h = P([1, -2, 1])
    p = P([3, 1, 4, 1, 5])
    assert equal_mod(p, p, h)
    assert equal_mod(P([0, 0, 0, 1]), P([-2, 3]), h)
    assert not equal_mod(P([0, 0, 0, 1]), P([0, 1]), h)


def test_equal_mod_float_tolerance():
    h = P([1.0, -2.0, 1.0], FLOAT)
    assert equal_mod(P([0, 0, 0, 1.0], FLOAT), P([-2.0, 3.0 + 1e-12], FLOAT), h)
    assert not equal_mod(P([0, 0, 0, 1.0], FLOAT), P([-2.0, 3.0 + 1e-6], FLOAT), h)


def test_mixed_domain():
    with pytest.raises(MixedDomain):
        P([F(1)]) + P([1.0])
    with pytest.raises(MixedDomain):
        P([F(1), 2]) * 0.5


def test_serialization_round_trip():
    p = P([F(-1, 2), 0, 3])
    assert p.to_strings() == ["-1/2", "0", "3"]
    assert P.from_strings(p.to_strings(), p.domain) == p
    assert P([0.1, 2.0], FLOAT).to_strings() == ["0.1", "2.0"]


def test_compose_shift_matches_taylor():
    p = P([1, -3, 0, 2])
    c = F(2, 3)
    shifted = p.compose_shift(c)
    for k in range(4):
        assert shifted.coeff(k) == p.derivative(k)(c) / math.factorial(k)


polys = st.lists(st.fractions(min_value=-30, max_value=30, max_denominator=12), max_size=13).map(P)


@settings(max_examples=150, deadline=None)
@given(polys, polys)
def test_euclidean_identity(p, d):
    if d.is_zero():
        return
    q, r = poly_divmod(p, d)
    assert q * d + r == p
    assert r.degree < d.degree
    assert poly_divmod(r, d)[1] == r


@settings(max_examples=100, deadline=None)
@given(polys, polys, st.fractions(max_denominator=9), st.fractions(max_denominator=9),
       st.integers(0, 6))
def test_derivative_linear(p, q, a, b, k):
    assert derivative(p * a + q * b, k) == derivative(p, k) * a + derivative(q, k) * b


@settings(max_examples=100, deadline=None)
@given(polys, polys)
def test_degree_additive(p, q):
    if p.is_zero() or q.is_zero():
        return
    assert (p * q).degree == p.degree + q.degree


def test_congruence_matches_derivative_agreement(rng):
    for _ in range(100):
        p = random_poly(rng, 14)
        ns = random_nodeset(rng, max_r=4, max_m=3)
        h = build_modulus(ns)
        r = poly_divmod(p, h)[1]
        for x, m in ns.nodes:
            for k in range(m):
                assert p.derivative(k)(x) == r.derivative(k)(x)
