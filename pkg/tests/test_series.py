from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given
from hypothesis import strategies as st

from polylog_lipschitz.commons import CompositionError, NonUnitError, RingMismatchError
from polylog_lipschitz.multipoly import MultiPoly
from polylog_lipschitz.series import (
    TruncatedSeries,
    cos_series,
    exp_series,
    expm1_over_t_series,
    identity_series,
    log1p_series,
    one_series,
    series_compose,
    series_div,
    series_mul,
    series_reversion,
    sinc_series,
    specialize_series,
)

ORDER = 8
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=9)
series = st.lists(rationals, min_size=ORDER + 1, max_size=ORDER + 1).map(
    lambda cs: TruncatedSeries.rational(cs, ORDER)
)
units = series.filter(lambda s: s.coefficients[0] != 0)
no_constant = series.map(lambda s: TruncatedSeries.rational((0,) + s.coefficients[1:], ORDER))
invertible = no_constant.filter(lambda s: s.coefficients[1] != 0)


def test_bernoulli_numbers_from_division():
    quotient = series_div(one_series(6), expm1_over_t_series(6))
    numbers = [c * factorial(k) for k, c in enumerate(quotient.coefficients)]
    assert numbers == [1, Fraction(-1, 2), Fraction(1, 6), 0, Fraction(-1, 30), 0, Fraction(1, 42)]


def test_reversion_of_log1p_is_expm1():
    expm1 = TruncatedSeries.from_function(lambda k: Fraction(1, factorial(k)) if k else 0, ORDER)
    assert series_reversion(log1p_series(ORDER)) == expm1
    assert series_compose(log1p_series(ORDER), expm1) == identity_series(ORDER)


def test_exp_times_exp_of_minus_t():
    minus = TruncatedSeries.from_function(lambda k: Fraction((-1) ** k, factorial(k)), ORDER)
    assert series_mul(exp_series(ORDER), minus) == one_series(ORDER)


def test_sinc_and_cos_coefficients():
    assert sinc_series(4).coefficients == (1, 0, Fraction(-1, 6), 0, Fraction(1, 120))
    assert cos_series(4).coefficients == (1, 0, Fraction(-1, 2), 0, Fraction(1, 24))


def test_errors():
    with pytest.raises(NonUnitError):
        series_div(one_series(4), identity_series(4))
    with pytest.raises(CompositionError):
        series_compose(exp_series(4), exp_series(4))
    with pytest.raises(NonUnitError):
        series_reversion(TruncatedSeries.rational((0, 0, 1), 4))
    with pytest.raises(RingMismatchError):
        series_mul(one_series(4), one_series(5))
    with pytest.raises(RingMismatchError):
        series_mul(one_series(4), one_series(4, "multipoly", 2))


def test_shift_down_and_truncate():
    s = TruncatedSeries.rational((0, 0, 1, 2), 3)
    assert s.shift_down(2).coefficients == (1, 2)
    assert s.valuation() == 2
    with pytest.raises(NonUnitError):
        s.shift_down(3)
    with pytest.raises(RingMismatchError):
        s.truncate(5)


def test_multipoly_series_specialize():
    c1 = MultiPoly.variable(1, 2)
    c2 = MultiPoly.variable(2, 2)
    f = TruncatedSeries.multipoly([0, 1, c1 * Fraction(1, 2), c2 * Fraction(1, 3)], 3, 2)
    g = series_reversion(f)
    # G(t) = t − c1 t²/2 + (c1²/2 − c2/3) t³
    assert g.coefficients[2] == c1 * Fraction(-1, 2)
    assert g.coefficients[3] == c1**2 * Fraction(1, 2) - c2 * Fraction(1, 3)
    assert specialize_series(g, [-1, 1]).coefficients == (0, 1, Fraction(1, 2), Fraction(1, 6))
    with pytest.raises(RingMismatchError):
        specialize_series(one_series(3), [1])


@given(units, series)
def test_division_inverts_multiplication(b, a):
    assert series_mul(series_div(a, b), b) == a


@given(series, series, series)
def test_product_ring_axioms(a, b, c):
    assert series_mul(a, b) == series_mul(b, a)
    assert series_mul(series_mul(a, b), c) == series_mul(a, series_mul(b, c))


@given(invertible)
def test_reversion_is_a_two_sided_inverse(f):
    g = series_reversion(f)
    identity = identity_series(ORDER)
    assert series_compose(f, g) == identity
    assert series_compose(g, f) == identity


@given(series, no_constant, no_constant)
def test_composition_is_associative(a, b, c):
    assert series_compose(series_compose(a, b), c) == series_compose(a, series_compose(b, c))
