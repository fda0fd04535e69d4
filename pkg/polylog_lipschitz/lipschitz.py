"""
Representing functions of the compactly supported hyperfunctions B̄ₙ (and
their Appell analogues), sums over integer translates, and the numerical
checks of the Lipschitz summation formulae.

With the Cauchy kernel c_τ(x) = 1/(π(x − τ)) a hyperfunction u on [0, 1] is
represented by φ(τ) = u(c_τ) and recovered by u(ψ) = (i/2)∮ φψ dτ
(counterclockwise around [0, 1]).
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np

from .algebra import Polynomial, poly_eval, poly_integral_01, poly_moment
from .appell import (
    P_CASE,
    Q_CASE,
    AppellDescriptor,
    appell_poly,
    bernoulli_descriptor,
    bernoulli_numbers,
    default_sign_case,
    fourier_coefficient,
    phi_vector,
    projected_poly,
    r_poly,
)
from .commons import DEFAULT_TOLERANCE, DomainError, ensure_finite
from .delta import (
    TWO_PI_I,
    ExtendedDeltaSpec,
    delta_eval,
    extended_delta_eval,
)
from .quadrature import (
    line_integral,
    poly_geometric_tail,
    rectangle_contour_integral,
    richardson,
    truncation_for,
)
from .reports import DefectReport

DELTA_DERIVATIVE = "delta-derivative"
LOG_CONSTANT = "log-constant"
POLY_LOG_REMAINDER = "poly-log-remainder"

FAR_FIELD_RADIUS = 4.0
MOMENT_TERMS = 48
EULER_MACLAURIN_TERMS = 6

ComplexLike = Union[complex, np.ndarray]


@dataclass(frozen=True)
class RepresentingFunction:
    n: int
    label: str
    case: str
    poly: Optional[Polynomial] = None
    remainder: Optional[Polynomial] = None
    sign_case: str = P_CASE
    c0: Fraction = Fraction(0)
    moments: Tuple[Fraction, ...] = field(default=(), repr=False)

    def to_json(self) -> dict:
        out = {"n": self.n, "descriptor": self.label, "case": self.case, "sign_case": self.sign_case}
        if self.poly is not None:
            out["poly"] = self.poly.to_json()
            out["remainder"] = self.remainder.to_json()
            out["c0"] = self.c0
        return out


def _moments(n: int, poly: Optional[Polynomial], count: int) -> Tuple[Fraction, ...]:
    """u(x^j), j < count, for the hyperfunction represented by case n."""
    if n < 0:
        m = -n
        return tuple(
            Fraction((-1) ** m * factorial(m)) if j == m else Fraction(0) for j in range(count)
        )
    if n == 0:
        return tuple((1 if j == 0 else 0) - Fraction(1, j + 1) for j in range(count))
    scale = Fraction(-1, factorial(n))
    return tuple(scale * poly_moment(poly, j) for j in range(count))


@lru_cache(maxsize=256)
def representing_function(
    descriptor: Optional[AppellDescriptor], n: int, sign_case: Optional[str] = None
) -> RepresentingFunction:
    """
    φ for the periodic hyperfunction of degree n: δ^{(−n)} for n < 0, δ − 1 for
    n = 0, and −Pₙ/n! on [0, 1] for n > 0 with Pₙ the c₀-subtracted projection.
    """
    descriptor = descriptor or bernoulli_descriptor()
    count = max(MOMENT_TERMS, -n + 1)
    if n < 0:
        return RepresentingFunction(n, descriptor.label, DELTA_DERIVATIVE, moments=_moments(n, None, count))
    if n == 0:
        return RepresentingFunction(n, descriptor.label, LOG_CONSTANT, moments=_moments(0, None, count))
    phi = phi_vector(descriptor, n)
    sign_case = sign_case or default_sign_case(phi)
    poly = projected_poly(descriptor, n, sign_case)
    c0 = poly_integral_01(appell_poly(descriptor, n))
    return RepresentingFunction(
        n,
        descriptor.label,
        POLY_LOG_REMAINDER,
        poly,
        r_poly(poly),
        sign_case,
        c0,
        _moments(n, poly, count),
    )


def _far_field(rf: RepresentingFunction, tau: np.ndarray) -> np.ndarray:
    # φ(τ) = −(1/π) Σ_j u(x^j) τ^{−j−1}
    w = 1.0 / tau
    coeffs = np.array([float(m) for m in rf.moments])
    return -(w / math.pi) * np.polynomial.polynomial.polyval(w, coeffs)


def _near_field(rf: RepresentingFunction, tau: np.ndarray) -> np.ndarray:
    if rf.case == DELTA_DERIVATIVE:
        m = -rf.n
        return (-1) ** (m + 1) * factorial(m) / (math.pi * tau ** (m + 1))
    log_term = np.log(1.0 - 1.0 / tau)
    if rf.case == LOG_CONSTANT:
        return -(1.0 / (math.pi * tau)) * (1.0 + tau * log_term)
    p = poly_eval(rf.poly, tau)
    r = poly_eval(rf.remainder, tau)
    return -(p * log_term + r) / (math.pi * factorial(rf.n))


def phi_repr(rf: RepresentingFunction, tau: ComplexLike) -> ComplexLike:
    """φ(τ) for τ off [0, 1]; accepts a complex scalar or a numpy array."""
    scalar = np.isscalar(tau) or isinstance(tau, (complex, float, int))
    if scalar:
        tau = ensure_finite(tau, "tau")
        if tau.imag == 0 and 0 <= tau.real <= 1:
            raise DomainError("on the segment [0,1]", f"tau={tau}")
    z = np.atleast_1d(np.asarray(tau, dtype=complex))
    out = np.empty_like(z)
    far = np.abs(z) >= FAR_FIELD_RADIUS
    if rf.case == DELTA_DERIVATIVE:
        out[:] = _near_field(rf, z)
    else:
        if far.any():
            out[far] = _far_field(rf, z[far])
        if (~far).any():
            out[~far] = _near_field(rf, z[~far])
    return complex(out[0]) if scalar else out.reshape(np.shape(tau))


def translate_sum(rf: RepresentingFunction, tau: complex, K: int) -> complex:
    """Σ_{k=−K}^{K} φ(τ + k); the symmetric truncation is required for n >= 0."""
    tau = ensure_finite(tau, "tau")
    if tau.imag == 0:
        raise DomainError("on the real axis", f"tau={tau}")
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    ks = np.arange(1, K + 1, dtype=float)
    pairs = phi_repr(rf, tau + ks) + phi_repr(rf, tau - ks)
    # smallest terms first
    return complex(phi_repr(rf, tau) + np.sum(pairs[::-1]))


def translate_tail_estimate(rf: RepresentingFunction, tau: complex, K: int) -> float:
    """Leading size of Σ_{|k|>K} φ(τ + k) from the moment expansion."""
    if rf.case == DELTA_DERIVATIVE:
        m = -rf.n
        return 2.0 * factorial(m) / (math.pi * m * max(K - abs(tau.real), 1.0) ** m)
    mu0, mu1 = float(rf.moments[0]), float(rf.moments[1])
    return 2.0 * (abs(mu0) * (abs(tau) + 1.0) + abs(mu1)) / (math.pi * K)


@lru_cache(maxsize=256)
def _extended_spec(descriptor: AppellDescriptor, n: int, sign_case: str) -> ExtendedDeltaSpec:
    return ExtendedDeltaSpec.from_descriptor(descriptor, n, sign_case)


def _extended(rf: RepresentingFunction, descriptor: Optional[AppellDescriptor]) -> Callable[[complex], complex]:
    """Δ_{−n} as a function of q for the representing function's degree."""
    n = rf.n
    if n <= 0:
        return lambda q: delta_eval(-n, q).value
    spec = _extended_spec(descriptor or bernoulli_descriptor(), -n, rf.sign_case)
    return lambda q: extended_delta_eval(spec, q).value


def q_series_side(
    rf: RepresentingFunction,
    tau: complex,
    descriptor: Optional[AppellDescriptor] = None,
    lower_sign: Optional[int] = None,
) -> complex:
    """
    2i(2πi)^{−n}Δ_{−n}(q) for Im τ > 0, and 2i(2πi)^{−n}·s·Δ_{−n}(1/q) for
    Im τ < 0 with s = (−1)^{n−1} unless ``lower_sign`` is given.
    """
    n = rf.n
    q = cmath.exp(TWO_PI_I * tau)
    delta = _extended(rf, descriptor)
    scale = 2j * TWO_PI_I ** (-n)
    if tau.imag > 0:
        return scale * delta(q)
    sign = lower_sign if lower_sign is not None else (-1) ** ((n - 1) % 2)
    return scale * sign * delta(1 / q)


def lipschitz_defect(
    rf: RepresentingFunction,
    tau: complex,
    K: int,
    descriptor: Optional[AppellDescriptor] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DefectReport:
    """
    Translate sum against the q-series side. In the lower half-plane of a
    Q-case function both sign candidates are evaluated and the one that
    closes the identity is reported.
    """
    tau = ensure_finite(tau, "tau")
    lhs = translate_sum(rf, tau, K)
    parameters: Dict[str, object] = {"sign_case": rf.sign_case}
    if tau.imag < 0 and rf.case == POLY_LOG_REMAINDER and rf.sign_case == Q_CASE:
        signs = {"(-1)^(n-1)": (-1) ** ((rf.n - 1) % 2), "(-1)^n": (-1) ** (rf.n % 2)}
        sides = {name: q_series_side(rf, tau, descriptor, s) for name, s in signs.items()}
        candidates = {name: abs(lhs - side) for name, side in sides.items()}
        closing = min(candidates, key=candidates.get)
        parameters["sign_candidates"] = candidates
        parameters["closing_sign"] = closing
        rhs = sides[closing]
    else:
        rhs = q_series_side(rf, tau, descriptor)
    report = DefectReport(
        identity="lipschitz",
        n=rf.n,
        lhs=lhs,
        rhs=rhs,
        tolerance=tolerance,
        K=K,
        tau=tau,
        q=cmath.exp(TWO_PI_I * tau),
        tail_estimate=translate_tail_estimate(rf, tau, K),
        descriptor=rf.label,
        parameters=parameters,
    )
    logging.debug(f"lipschitz n={rf.n} tau={tau} K={K}: defect {report.abs_defect:.3e}")
    return report


def _euler_maclaurin_tail(k: int, z: complex, K: int) -> Tuple[complex, float]:
    """Σ_{n>K} (n + z)^{−k} and the size of the first omitted correction."""
    a = K + z
    total = a ** (1 - k) / (k - 1) - a ** (-k) / 2
    bern = bernoulli_numbers(2 * EULER_MACLAURIN_TERMS + 2)
    rising = k
    last = 0.0
    for j in range(1, EULER_MACLAURIN_TERMS + 2):
        # rising = (k)_{2j−1}
        term = float(bern[2 * j]) * rising / factorial(2 * j) * a ** (-k - 2 * j + 1)
        if j == EULER_MACLAURIN_TERMS + 1:
            last = abs(term)
            break
        total += term
        rising *= (k + 2 * j - 1) * (k + 2 * j)
    return total, last


def classical_lipschitz_check(
    k: int, z: complex, K: int = 1000, tolerance: float = DEFAULT_TOLERANCE
) -> DefectReport:
    """Σ_n (n + z)^{−k} against ((−2πi)^k/(k−1)!)·Σ_{r>=1} r^{k−1} e^{2πirz}."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    z = ensure_finite(z, "z")
    if z.imag <= 0:
        raise DomainError("Im z must be positive", f"z={z}")
    ns = np.arange(-K, K + 1, dtype=float)
    terms = (ns + z) ** (-k)
    order = np.argsort(-np.abs(ns))
    finite = complex(np.sum(terms[order]))
    plus, plus_err = _euler_maclaurin_tail(k, z, K)
    minus, minus_err = _euler_maclaurin_tail(k, -z, K)
    lhs = finite + plus + (-1) ** k * minus

    q = cmath.exp(TWO_PI_I * z)
    radius = abs(q)
    truncation = truncation_for(k - 1, radius, 1e-18)
    rs = np.arange(1, truncation + 1, dtype=float)
    series = complex(np.sum(rs ** (k - 1) * np.power(q, rs)))
    scale = (-TWO_PI_I) ** k / factorial(k - 1)
    rhs = scale * series
    tail = plus_err + minus_err + abs(scale) * poly_geometric_tail(truncation + 1, k - 1, radius)
    return DefectReport(
        identity="classical-lipschitz",
        n=k,
        lhs=lhs,
        rhs=rhs,
        tolerance=tolerance,
        K=K,
        tau=z,
        q=q,
        tail_estimate=tail,
        parameters={"rhs_terms": truncation},
    )


def check_contour(x_lo: float, x_hi: float, y_lo: float, y_hi: float, margin: float = 0.1):
    if x_lo > -margin or x_hi < 1 + margin or y_lo > -margin or y_hi < margin:
        raise DomainError(
            "contour too close to [0,1]",
            f"rectangle [{x_lo}, {x_hi}]x[{y_lo}, {y_hi}] needs margin {margin}",
        )


def contour_pairing(
    rf: Union[RepresentingFunction, Callable],
    psi: Polynomial,
    contour: Tuple[float, float, float, float] = (-0.5, 1.5, -0.5, 0.5),
    panels: int = 16,
    order: int = 24,
) -> complex:
    """u(ψ) = (i/2)∮ φψ dτ around the rectangle (x_lo, x_hi, y_lo, y_hi)."""
    check_contour(*contour)
    phi = (lambda t: phi_repr(rf, t)) if isinstance(rf, RepresentingFunction) else rf
    coeffs = psi.as_complex_array()
    integrand = lambda t: phi(t) * np.polynomial.polynomial.polyval(t, coeffs)
    return 0.5j * rectangle_contour_integral(integrand, *contour, panels=panels, order=order)


def exact_pairing(rf: RepresentingFunction, psi: Polynomial) -> Fraction:
    """u(ψ) from the exact moments."""
    if psi.degree >= len(rf.moments):
        raise ValueError(f"ψ of degree {psi.degree} beyond the stored moments")
    return sum(
        (c * rf.moments[j] for j, c in enumerate(psi.coefficients)), start=Fraction(0)
    )


def contour_pairing_report(
    rf: RepresentingFunction,
    psi: Polynomial,
    contour: Tuple[float, float, float, float] = (-0.5, 1.5, -0.5, 0.5),
    tolerance: float = DEFAULT_TOLERANCE,
) -> DefectReport:
    value = contour_pairing(rf, psi, contour)
    return DefectReport(
        identity="contour-pairing",
        n=rf.n,
        lhs=value,
        rhs=complex(float(exact_pairing(rf, psi))),
        tolerance=tolerance,
        descriptor=rf.label,
        parameters={"psi": psi.to_json(), "contour": list(contour)},
    )


def periodic_expected(rf: RepresentingFunction, m: int, descriptor: Optional[AppellDescriptor] = None) -> complex:
    """Pairing of the periodic hyperfunction with e^{2πimx}."""
    n = rf.n
    if n < 0:
        k = -n
        return (-1) ** k * (TWO_PI_I * m) ** k
    if m == 0:
        return 0j
    if n == 0:
        return 1 + 0j
    descriptor = descriptor or bernoulli_descriptor()
    return -fourier_coefficient(descriptor, n, -m).value / factorial(n)


def periodic_pairing(
    rf: RepresentingFunction,
    m: int,
    height: float = 0.25,
    descriptor: Optional[AppellDescriptor] = None,
    panels: int = 8,
    order: int = 20,
) -> complex:
    """
    (i/2) times the integral of Φ(z)e^{2πimz} along Im z = −h (left to right)
    and Im z = +h (right to left), Φ the q-series side.
    """
    if not 0 < height < 1:
        raise ValueError(f"height must be in (0, 1), got {height}")
    lower_sign = None
    if rf.case == POLY_LOG_REMAINDER and rf.sign_case == Q_CASE:
        lower_sign = (-1) ** (rf.n % 2)

    def integrand(z):
        values = [
            q_series_side(rf, complex(t), descriptor, lower_sign) for t in np.ravel(z)
        ]
        return np.asarray(values).reshape(np.shape(z)) * np.exp(TWO_PI_I * m * z)

    bottom = line_integral(integrand, complex(0, -height), complex(1, -height), panels, order)
    top = line_integral(integrand, complex(1, height), complex(0, height), panels, order)
    return 0.5j * (bottom + top)


def periodic_pairing_report(
    rf: RepresentingFunction,
    m: int,
    height: float = 0.25,
    descriptor: Optional[AppellDescriptor] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DefectReport:
    return DefectReport(
        identity="periodic-pairing",
        n=rf.n,
        lhs=periodic_pairing(rf, m, height, descriptor),
        rhs=periodic_expected(rf, m, descriptor),
        tolerance=tolerance,
        descriptor=rf.label,
        parameters={"m": m, "height": height},
    )


def boundary_value_check(
    n: int,
    x: float,
    epsilon: float = 1e-3,
    descriptor: Optional[AppellDescriptor] = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> DefectReport:
    """
    Δ_n(e^{2πi(x+iε)}) + s·Δ_n(e^{−2πi(x−iε)}) against (2πi)^{−n}(−P_{−n}(x)/(−n)!),
    at ε, ε/2, ε/4 and Richardson-extrapolated to ε → 0. Without a descriptor
    Δ = δ and P = B.
    """
    if n > -1:
        raise ValueError(f"n must be <= -1, got {n}")
    if not 0 < x < 1:
        raise DomainError("x outside (0,1)", f"x={x}")
    if not 0 < epsilon <= 0.1:
        raise ValueError(f"epsilon must be in (0, 0.1], got {epsilon}")
    descriptor = descriptor or bernoulli_descriptor()
    spec = ExtendedDeltaSpec.from_descriptor(descriptor, n)
    m = -n
    poly = projected_poly(descriptor, m, spec.sign_case)
    rhs = TWO_PI_I**m * (-poly_eval(poly, float(x)) / factorial(m))

    def lhs_at(eps: float) -> complex:
        inside = cmath.exp(TWO_PI_I * x - 2 * math.pi * eps)
        inverse_outside = cmath.exp(-TWO_PI_I * x - 2 * math.pi * eps)
        a = extended_delta_eval(spec, inside).value
        b = extended_delta_eval(spec, inverse_outside).value
        return a + spec.sign() * b

    epsilons = [epsilon, epsilon / 2, epsilon / 4]
    samples = [lhs_at(eps) for eps in epsilons]
    extrapolated, _ = richardson(samples)
    raw = [abs(s - rhs) for s in samples]
    return DefectReport(
        identity="boundary-value",
        n=n,
        lhs=extrapolated,
        rhs=rhs,
        tolerance=tolerance,
        tail_estimate=abs(samples[-1] - samples[-2]),
        descriptor=descriptor.label,
        parameters={"x": float(x), "epsilon": epsilon, "raw_defects": raw},
    )


def kernel_check(
    rf: RepresentingFunction, tau: complex, K: int, tolerance: float = 1e-3
) -> DefectReport:
    """Translate sum of ρ(τ) = φ(τ+1) − φ(τ), which telescopes to zero as K grows."""
    tau = ensure_finite(tau, "tau")
    if tau.imag == 0:
        raise DomainError("on the real axis", f"tau={tau}")
    ks = np.arange(-K, K + 1, dtype=float)
    diffs = phi_repr(rf, tau + ks + 1) - phi_repr(rf, tau + ks)
    order = np.argsort(-np.abs(ks))
    value = complex(np.sum(diffs[order]))
    return DefectReport(
        identity="kernel",
        n=rf.n,
        lhs=value,
        rhs=0j,
        tolerance=tolerance,
        K=K,
        tau=tau,
        tail_estimate=abs(phi_repr(rf, tau + K + 1)) + abs(phi_repr(rf, tau - K)),
        descriptor=rf.label,
    )
