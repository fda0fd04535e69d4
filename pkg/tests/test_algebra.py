from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polylog_lipschitz.algebra import (
    Polynomial,
    poly_derivative,
    poly_eval,
    poly_integral_01,
    poly_moment,
)

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=50)
polynomials = st.lists(rationals, max_size=6).map(lambda cs: Polynomial(tuple(cs)))

B2 = Polynomial((Fraction(1, 6), Fraction(-1), Fraction(1)))


def test_eval_examples():
    assert poly_eval(B2, Fraction(0)) == Fraction(1, 6)
    assert poly_eval(Polynomial((Fraction(-1, 2), 1)), Fraction(1, 2)) == 0
    assert poly_eval(Polynomial((7, 3, 2)), 0) == 7
    assert B2(Fraction(1)) == Fraction(1, 6)


def test_eval_float_complex_and_arrays():
    assert poly_eval(B2, 0.5) == pytest.approx(1 / 6 - 0.25)
    z = 0.5 + 1j
    assert poly_eval(B2, z) == pytest.approx(z * z - z + 1 / 6)
    xs = np.array([0.0, 0.5, 1.0])
    assert np.allclose(poly_eval(B2, xs), [1 / 6, 1 / 6 - 0.25, 1 / 6])


def test_zero_polynomial():
    zero = Polynomial()
    assert zero.is_zero()
    assert zero.degree == -1
    assert str(zero) == "0"
    assert Polynomial((0, 0, 0)) == zero
    assert poly_eval(zero, Fraction(3)) == 0


def test_str_and_json():
    assert str(B2) == "x^2 - x + 1/6"
    assert B2.to_json() == ["1/6", "-1", "1"]
    assert Polynomial.from_json(["1/6", "-1", "1"]) == B2
    assert str(Polynomial((0, -1))) == "-x"


def test_derivative_and_integrals():
    assert poly_derivative(B2) == Polynomial((-1, 2))
    assert poly_integral_01(B2) == 0
    assert poly_moment(Polynomial.x(), 2) == Fraction(1, 4)
    assert poly_moment(B2, 0) == poly_integral_01(B2)


@given(polynomials, polynomials, rationals)
def test_evaluation_is_a_ring_homomorphism(p, q, x):
    assert poly_eval(p * q, x) == poly_eval(p, x) * poly_eval(q, x)
    assert poly_eval(p + q, x) == poly_eval(p, x) + poly_eval(q, x)
    assert poly_eval(p - q, x) == poly_eval(p, x) - poly_eval(q, x)


@given(polynomials, polynomials)
def test_product_commutes_and_derivative_is_leibniz(p, q):
    assert p * q == q * p
    assert poly_derivative(p * q) == poly_derivative(p) * q + p * poly_derivative(q)


@given(polynomials, polynomials, polynomials)
def test_product_is_associative(p, q, r):
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
