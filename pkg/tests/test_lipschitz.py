import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from polylog_lipschitz.algebra import Polynomial
from polylog_lipschitz.appell import Q_CASE, AppellDescriptor, builtin_descriptors
from polylog_lipschitz.commons import DomainError
from polylog_lipschitz.lipschitz import (
    DELTA_DERIVATIVE,
    LOG_CONSTANT,
    POLY_LOG_REMAINDER,
    boundary_value_check,
    classical_lipschitz_check,
    contour_pairing,
    contour_pairing_report,
    exact_pairing,
    kernel_check,
    lipschitz_defect,
    periodic_pairing_report,
    phi_repr,
    representing_function,
    translate_sum,
    translate_tail_estimate,
)
from polylog_lipschitz.series import TruncatedSeries

DESCRIPTORS = builtin_descriptors(12)
BERNOULLI = DESCRIPTORS["bernoulli"]
A_SEQ = DESCRIPTORS["a-seq"]
TAUS = [1j, 0.25 + 1j, 0.5 + 2j]


def poly(*coefficients):
    return Polynomial(tuple(Fraction(c) for c in coefficients))


def rf(n, descriptor=BERNOULLI, sign_case=None):
    return representing_function(descriptor, n, sign_case)


def test_cases():
    assert rf(-2).case == DELTA_DERIVATIVE
    assert rf(0).case == LOG_CONSTANT
    one = rf(1)
    assert one.case == POLY_LOG_REMAINDER
    assert one.poly == poly(Fraction(-1, 2), 1)
    assert one.remainder == poly(1)
    assert rf(3, A_SEQ).to_json()["descriptor"] == "a-seq"


def test_phi_repr_examples():
    assert phi_repr(rf(-1), 1j) == pytest.approx(-1 / math.pi)
    expected = -(1.5 * math.log(0.5) + 1) / math.pi
    assert phi_repr(rf(1), 2.0) == pytest.approx(expected, abs=1e-15)
    # τ²φ(τ) → 1/(2π) for the n = 0 function
    for tau in (1e3, -1e3):
        assert tau**2 * phi_repr(rf(0), tau) == pytest.approx(1 / (2 * math.pi), rel=1e-3)


@pytest.mark.parametrize("tau", [0.0, 0.5, 1.0])
def test_phi_repr_rejects_the_segment(tau):
    with pytest.raises(DomainError):
        phi_repr(rf(1), tau)


def test_phi_repr_accepts_arrays():
    taus = np.array([2 + 0j, 0.5 + 1j, 10 - 3j])
    values = phi_repr(rf(2), taus)
    assert values.shape == (3,)
    for tau, value in zip(taus, values):
        assert value == pytest.approx(phi_repr(rf(2), complex(tau)))


@pytest.mark.parametrize("n", [0, 1, 2, 4])
def test_near_and_far_field_agree(n):
    # the two evaluation paths meet at |τ| = 4
    r = rf(n, A_SEQ)
    for angle in np.linspace(0.1, 3.0, 7):
        tau = 4 * cmath.exp(1j * angle)
        far = phi_repr(r, tau)
        near = phi_repr(r, tau * (1 - 1e-12))
        assert abs(far - near) <= 1e-8 * abs(far) + 1e-13


def test_log_branch_is_continuous_off_the_segment():
    r = rf(2)
    for x in (-0.7, -0.05, 1.05, 2.5):
        above = phi_repr(r, complex(x, 1e-9))
        below = phi_repr(r, complex(x, -1e-9))
        assert abs(above - below) < 1e-6


@pytest.mark.parametrize("label", sorted(DESCRIPTORS))
@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2, 4, 6])
def test_decay_at_infinity(label, n):
    r = rf(n, DESCRIPTORS[label])
    for direction in (1, 1j, cmath.exp(2j)):
        near, far = abs(phi_repr(r, 10 * direction)), abs(phi_repr(r, 100 * direction))
        exponent = math.log10(near / far)
        assert exponent >= 0.99


def test_translate_sum_cotangent_identity():
    tau, K = 1j, 1000
    value = translate_sum(rf(-1), tau, K)
    exact = math.pi / cmath.sin(math.pi * tau) ** 2
    assert abs(value - exact) <= translate_tail_estimate(rf(-1), tau, K)


def test_translate_sum_converges():
    r = rf(-2)
    a, b = translate_sum(r, 0.3 + 1j, 500), translate_sum(r, 0.3 + 1j, 1000)
    assert abs(a - b) < 2 / 500**2
    r = rf(1)
    a, b = translate_sum(r, 0.5 + 2j, 10_000), translate_sum(r, 0.5 + 2j, 20_000)
    assert abs(a - b) < 1e-4


def test_translate_sum_preconditions():
    with pytest.raises(DomainError):
        translate_sum(rf(1), 0.5, 10)
    with pytest.raises(ValueError):
        translate_sum(rf(1), 1j, 0)


def test_lipschitz_examples():
    report = lipschitz_defect(rf(-1), 1j, 100_000, tolerance=1e-3)
    q = math.exp(-2 * math.pi)
    assert report.rhs == pytest.approx(-4 * math.pi * q / (1 - q) ** 2, rel=1e-12)
    assert report.abs_defect <= report.tail_estimate
    assert lipschitz_defect(rf(-2), 0.25 + 1j, 10_000).abs_defect < 1e-8
    assert lipschitz_defect(rf(0), 2j, 100_000).abs_defect < 1e-4


@pytest.mark.parametrize("descriptor", [BERNOULLI, A_SEQ], ids=lambda d: d.label)
@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
def test_lipschitz_both_half_planes(descriptor, n):
    r = rf(n, descriptor)
    for tau in TAUS:
        for point in (tau, tau.conjugate()):
            report = lipschitz_defect(r, point, 20_000, descriptor=descriptor, tolerance=1e-3)
            assert report.passed, report.to_json()


ROUNDOFF_FLOOR = 1e-10


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
def test_lipschitz_rate(n):
    r = rf(n, A_SEQ)
    tau = 0.25 + 1j
    coarse = lipschitz_defect(r, tau, 1000, descriptor=A_SEQ).abs_defect
    fine = lipschitz_defect(r, tau, 2000, descriptor=A_SEQ).abs_defect
    if fine < ROUNDOFF_FLOOR:
        # n = 2 sits at the rounding level of the sum
        assert coarse < 10 * ROUNDOFF_FLOOR
    else:
        assert coarse >= 1.8 * fine


@pytest.mark.slow
@pytest.mark.parametrize("n", [-2, -1, 0, 1, 2])
def test_lipschitz_at_full_truncation(n):
    for tau in TAUS:
        for point in (tau, tau.conjugate()):
            report = lipschitz_defect(rf(n, A_SEQ), point, 100_000, descriptor=A_SEQ, tolerance=1e-3)
            assert report.passed


def test_lipschitz_reports_both_signs_in_the_q_case():
    # g = 1 + t has φ_2 = −2, so its Q projection is not zero
    shifted = AppellDescriptor(TruncatedSeries.rational((1, 1), 8), "shifted", 6)
    r = rf(2, shifted, Q_CASE)
    assert r.poly == poly(1, -2)
    upper = lipschitz_defect(r, 0.25 + 0.2j, 20_000, descriptor=shifted)
    assert upper.abs_defect < 1e-3
    lower = lipschitz_defect(r, 0.25 - 0.2j, 20_000, descriptor=shifted)
    assert lower.parameters["closing_sign"] == "(-1)^n"
    candidates = lower.parameters["sign_candidates"]
    assert candidates["(-1)^n"] < 1e-3
    assert candidates["(-1)^(n-1)"] > 1e-2


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("z", [1j, 0.5 + 1j, 0.3 + 0.7j])
def test_classical_lipschitz(k, z):
    report = classical_lipschitz_check(k, z, tolerance=1e-8)
    assert report.rel_defect < 1e-8
    assert report.passed


@pytest.mark.parametrize("z, bound", [(1j, 1e-10), (0.3 + 0.7j, 1e-9)])
def test_classical_lipschitz_against_the_cosecant(z, bound):
    report = classical_lipschitz_check(2, z)
    exact = math.pi**2 / cmath.sin(math.pi * z) ** 2
    assert abs(report.lhs - exact) < bound
    assert report.abs_defect < bound
    assert classical_lipschitz_check(3, 1j).abs_defect < 1e-10


def test_classical_lipschitz_preconditions():
    with pytest.raises(ValueError):
        classical_lipschitz_check(1, 1j)
    with pytest.raises(DomainError):
        classical_lipschitz_check(2, 0.5 - 1j)


def test_contour_pairing_examples():
    assert contour_pairing(rf(1), poly(0, 1)) == pytest.approx(-1 / 12, abs=1e-9)
    assert abs(contour_pairing(rf(2), poly(1))) < 1e-9
    assert abs(contour_pairing(rf(-1), poly(0, 0, 1))) < 1e-9
    assert contour_pairing(rf(-1), poly(0, 1)) == pytest.approx(-1, abs=1e-9)
    assert exact_pairing(rf(1), poly(0, 1)) == Fraction(-1, 12)


def test_contour_pairing_accepts_a_callable():
    r = rf(-2)
    value = contour_pairing(lambda t: phi_repr(r, t), poly(0, 0, 1))
    assert value == pytest.approx(2, abs=1e-9)


@pytest.mark.parametrize("label", sorted(DESCRIPTORS))
@pytest.mark.parametrize("n", [-2, 0, 1, 3])
def test_contour_pairing_matches_moments(label, n):
    r = rf(n, DESCRIPTORS[label])
    for m in range(5):
        psi = poly(*([0] * m + [1]))
        report = contour_pairing_report(r, psi, tolerance=1e-9)
        assert report.passed, report.to_json()


def test_contour_pairing_is_linear():
    r = rf(2, A_SEQ)
    p1, p2 = poly(1, 2), poly(0, 0, 3, -1)
    combined = contour_pairing(r, p1 * 2 - p2 * 3)
    assert abs(combined - (2 * contour_pairing(r, p1) - 3 * contour_pairing(r, p2))) < 1e-10


def test_contour_independence():
    for n in (-1, 0, 2):
        r = rf(n)
        psi = poly(1, -1, 2)
        wide = contour_pairing(r, psi, (-0.5, 1.5, -0.5, 0.5))
        narrow = contour_pairing(r, psi, (-0.3, 1.3, -0.25, 0.35))
        assert abs(wide - narrow) < 1e-9


def test_contour_must_clear_the_segment():
    with pytest.raises(DomainError):
        contour_pairing(rf(1), poly(1), (-0.05, 1.5, -0.5, 0.5))
    with pytest.raises(DomainError):
        contour_pairing(rf(1), poly(1), (-0.5, 1.5, 0.2, 0.5))


@pytest.mark.parametrize("n", [-1, 0, 1, 2])
@pytest.mark.parametrize("m", [-1, 0, 1, 2])
def test_periodic_pairing(n, m):
    report = periodic_pairing_report(rf(n), m, tolerance=1e-8)
    assert report.abs_defect < 1e-8


def test_periodic_pairing_height():
    with pytest.raises(ValueError):
        periodic_pairing_report(rf(1), 1, height=1.5)


def test_boundary_value_examples():
    report = boundary_value_check(-2, 0.5)
    assert report.rhs == pytest.approx(-math.pi**2 / 6)
    assert report.abs_defect < 1e-6
    report = boundary_value_check(-1, 0.25)
    assert report.rhs == pytest.approx(2j * math.pi * 0.25)
    assert report.abs_defect < 1e-6


def test_boundary_defect_shrinks_with_epsilon():
    raw = boundary_value_check(-3, 0.3, epsilon=0.1).parameters["raw_defects"]
    assert raw[0] > raw[1] > raw[2]


@pytest.mark.parametrize("n", [-2, -3, -4])
def test_boundary_value_for_appell_descriptors(n):
    for x in (0.25, 0.6):
        assert boundary_value_check(n, x, descriptor=A_SEQ).abs_defect < 1e-6


def test_boundary_value_preconditions():
    with pytest.raises(ValueError):
        boundary_value_check(0, 0.5)
    with pytest.raises(DomainError):
        boundary_value_check(-1, 1.0)
    with pytest.raises(ValueError):
        boundary_value_check(-1, 0.5, epsilon=0.5)


@pytest.mark.parametrize("n", [0, 1, 3])
def test_kernel_translates_to_zero(n):
    report = kernel_check(rf(n), 0.3 + 1j, 10_000)
    assert report.abs_defect < 1e-3
    assert report.passed
    with pytest.raises(DomainError):
        kernel_check(rf(n), 2.0, 10)
