"""
Delta rational functions δ_n(q) = Σ_{k>=1} kⁿ qᵏ and their extended versions.

For n >= 0 δ_n is rational and evaluated from an exact numerator table; for
n <= −1 it is the polylogarithm Li_{−n}(q), evaluated by one of

- ``series``: the defining power series, |q| <= 0.9;
- ``log-expansion``: the Bernoulli–ζ expansion in μ = log q, around q = 1;
- ``inversion-continuation``: δ_n(q) through δ_n(1/q), |q| >= 1/0.9;
- ``zeta-value``: δ_n(1) = ζ(−n) for n <= −2;
- ``bose-einstein-integral``: q/Γ(m)∫₀^∞ t^{m−1}/(eᵗ − q) dt, m = −n, anywhere off
  the cut [1, +∞); used by the inversion checks where the log expansion stops.

Every result carries a bound on the truncation error of the method used.
"""

from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import List, Optional, Tuple

import numpy as np
from scipy import special

from .algebra import Polynomial, poly_derivative, poly_eval
from .appell import (
    P_CASE,
    Q_CASE,
    AppellDescriptor,
    PhiVector,
    bernoulli_numbers,
    bernoulli_poly,
    default_sign_case,
    parity_indices,
    phi_vector,
    projected_poly_from_phi,
)
from .commons import DomainError, OrderGuardError, ensure_finite
from .quadrature import adaptive_gauss, poly_geometric_tail, truncation_for

SERIES_RADIUS = 0.9
# log-expansion is used while |log q| <= LOG_EXPANSION_RATIO·2π
LOG_EXPANSION_RATIO = 0.6
TRUNCATION_TARGET = 1e-16
MAX_SERIES_TERMS = 10_000
MAX_LOG_TERMS = 400
MAX_CLOSED_FORM_ORDER = 64
INTEGRAL_TOL = 1e-12
INTEGRAL_MAX_DEPTH = 20

SERIES = "series"
CLOSED_FORM = "rational-closed-form"
CONTINUATION = "inversion-continuation"
LOG_EXPANSION = "log-expansion"
ZETA_VALUE = "zeta-value"
INTEGRAL = "bose-einstein-integral"

TWO_PI_I = 2j * math.pi


@dataclass(frozen=True)
class EvalResult:
    value: complex
    truncation: int
    tail_bound: float
    method: str

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "truncation": self.truncation,
            "tail_bound": self.tail_bound,
            "method": self.method,
        }


@dataclass(frozen=True)
class ExtendedDeltaSpec:
    phi: PhiVector
    n: int
    sign_case: str = P_CASE
    label: str = ""

    def __post_init__(self):
        if self.sign_case not in (P_CASE, Q_CASE):
            raise ValueError(f"sign case must be 'P' or 'Q', got {self.sign_case!r}")
        if self.n < 0 and len(self.phi.values) < -self.n:
            raise OrderGuardError(
                f"Δ_{self.n} needs φ_1..φ_{-self.n}, only {len(self.phi.values)} given"
            )

    @classmethod
    def from_descriptor(
        cls, descriptor: AppellDescriptor, n: int, sign_case: Optional[str] = None
    ) -> "ExtendedDeltaSpec":
        phi = phi_vector(descriptor, max(-n, 1))
        return cls(phi, n, sign_case or default_sign_case(phi), descriptor.label)

    def weights(self) -> List[Tuple[int, complex]]:
        """(j, (φ_j/j!)(2πi)^{j−1}) over the indices of the sign case, j <= −n."""
        out = []
        for j in parity_indices(self.sign_case, -self.n):
            phi_j = self.phi.phi(j)
            if phi_j != 0:
                out.append((j, float(phi_j / factorial(j)) * TWO_PI_I ** (j - 1)))
        return out

    def sign(self) -> int:
        """Inversion sign: (−1)ⁿ in the P-case, (−1)^{n+1} in the Q-case."""
        parity = self.n if self.sign_case == P_CASE else self.n + 1
        return -1 if parity % 2 else 1


# exact closed forms, n >= 0


@lru_cache(maxsize=None)
def numerator_poly(n: int) -> Polynomial:
    """N_n with δ_n(q) = N_n(q)/(1 − q)^{n+1}; N_0 = q, N_{n+1} = q[(1−q)N_n' + (n+1)N_n]."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n > MAX_CLOSED_FORM_ORDER:
        raise OrderGuardError(f"closed form of δ_{n} exceeds order {MAX_CLOSED_FORM_ORDER}")
    if n == 0:
        return Polynomial.x()
    prev = numerator_poly(n - 1)
    one_minus_q = Polynomial((Fraction(1), Fraction(-1)))
    return Polynomial.x() * (one_minus_q * poly_derivative(prev) + prev * n)


def _closed_form(n: int, q: complex) -> complex:
    if q == 1:
        raise DomainError("pole at q=1", f"δ_{n}")
    return poly_eval(numerator_poly(n), complex(q)) / (1 - q) ** (n + 1)


# ζ values and the log expansion, n <= −1


def zeta_nonpositive(j: int) -> Fraction:
    """ζ(−j) = (−1)^j B_{j+1}/(j+1), exact."""
    if j < 0:
        raise ValueError(f"j must be >= 0, got {j}")
    return (-1) ** j * bernoulli_numbers(j + 1)[j + 1] / (j + 1)


@lru_cache(maxsize=1024)
def zeta_value(s: int) -> float:
    if s == 1:
        raise DomainError("pole of ζ at s=1")
    if s <= 0:
        return float(zeta_nonpositive(-s))
    return float(special.zeta(float(s), 1.0))


def _harmonic(m: int) -> float:
    return float(sum(Fraction(1, i) for i in range(1, m + 1)))


def log_expansion_bound(m: int, r: float, k: int) -> float:
    """Bound on Σ_{j>k} |ζ(m−j)μ^j/j!| with r = |μ|/2π; needs k >= m."""
    if r >= 1:
        return math.inf
    return 4.0 * (2 * math.pi) ** (m - 1) * r ** (k + 1) / (1.0 - r)


def _log_expansion(n: int, q: complex, truncation: Optional[int] = None):
    """
    Li_m(e^μ) = μ^{m−1}/(m−1)!·(H_{m−1} − log(−μ)) + Σ_{k≠m−1} ζ(m−k)μ^k/k!,
    m = −n, μ = log q principal.
    """
    m = -n
    mu = cmath.log(q)
    r = abs(mu) / (2 * math.pi)
    if r > LOG_EXPANSION_RATIO:
        raise DomainError("outside convergence region", f"|log q| = {abs(mu):.6g}")
    if mu == 0:
        if m == 1:
            raise DomainError("pole at q=1", f"δ_{n}")
        return zeta_value(m), 0, 0.0
    if truncation is None:
        k_max = m
        while k_max < MAX_LOG_TERMS and log_expansion_bound(m, r, k_max) > TRUNCATION_TARGET:
            k_max += 1
    else:
        k_max = max(int(truncation), m)
    total = mu ** (m - 1) / factorial(m - 1) * (_harmonic(m - 1) - cmath.log(-mu))
    power = 1 + 0j
    for k in range(k_max + 1):
        if k != m - 1:
            total += zeta_value(m - k) * power
        power = power * mu / (k + 1)
    return total, k_max, log_expansion_bound(m, r, k_max)


def _series(n: int, q: complex, truncation: Optional[int] = None):
    radius = abs(q)
    if truncation is None:
        truncation = truncation_for(n, radius, TRUNCATION_TARGET, cap=MAX_SERIES_TERMS)
    ks = np.arange(1, truncation + 1, dtype=float)
    value = complex(np.sum(ks**n * np.power(complex(q), ks)))
    return value, truncation, poly_geometric_tail(truncation + 1, n, radius)


def _bose_einstein(n: int, q: complex):
    """
    Li_m(q) = q·∫₀^∞ γ_m(t)/(1 − q e^{−t}) dt, γ_m the Gamma(m) density, m = −n.
    The integral is cut at T with the dropped mass bounded by Q(m, T).
    """
    m = -n
    if q.imag == 0 and q.real >= 1:
        raise DomainError("branch cut [1,+inf)", f"q={q}")
    lgamma_m = math.lgamma(m)

    def integrand(t: np.ndarray) -> np.ndarray:
        density = np.exp((m - 1) * np.log(t) - t - lgamma_m)
        return density / (1 - q * np.exp(-t))

    log_radius = math.log(abs(q)) if abs(q) > 1 else 0.0
    end = log_radius + 2 * m + 50
    cuts = [0.0, log_radius, end] if log_radius > 0 else [0.0, end]
    total = sum(
        adaptive_gauss(integrand, lo, hi, tol=INTEGRAL_TOL, max_depth=INTEGRAL_MAX_DEPTH)
        for lo, hi in zip(cuts, cuts[1:])
    )
    dropped = float(special.gammaincc(m, end)) / (1 - abs(q) * math.exp(-end))
    return complex(q * total), 0, abs(q) * (INTEGRAL_TOL * (len(cuts) - 1) + dropped)


def log_branch(q: complex) -> complex:
    """log q with arg in (0, 2π); cut along [0, +∞)."""
    if q.imag == 0 and q.real >= 0:
        raise DomainError("branch cut [0,+inf)", f"q={q}")
    angle = cmath.phase(q)
    if angle < 0:
        angle += 2 * math.pi
    return complex(math.log(abs(q)), angle)


def inversion_rhs(n: int, q: complex) -> complex:
    """−(2πi)^{−n}/(−n)!·B_{−n}(log q/(2πi)) for n <= 0."""
    m = -n
    x = log_branch(q) / TWO_PI_I
    return -(TWO_PI_I**m) / factorial(m) * poly_eval(bernoulli_poly(m), x)


def _check_cut(q: complex):
    if q.imag == 0 and q.real > 1:
        raise DomainError("branch cut [1,+inf)", f"q={q}")


def delta_eval(n: int, q: complex, truncation: Optional[int] = None) -> EvalResult:
    """
    δ_n(q) on the principal sheet. ``truncation`` overrides the automatic
    choice of K for the series and log-expansion methods.
    """
    q = ensure_finite(q, "q")
    if n >= 0:
        return EvalResult(_closed_form(n, q), 0, 0.0, CLOSED_FORM)

    radius = abs(q)
    if q == 1:
        if n == -1:
            raise DomainError("pole at q=1", "δ_-1")
        return EvalResult(zeta_value(-n), 0, 0.0, ZETA_VALUE)
    if radius <= SERIES_RADIUS:
        return EvalResult(*_series(n, q, truncation), SERIES)
    _check_cut(q)
    if radius < 1 / SERIES_RADIUS:
        return EvalResult(*_log_expansion(n, q, truncation), LOG_EXPANSION)

    inner = delta_eval(n, 1 / q, truncation)
    sign = -1 if n % 2 else 1
    value = inversion_rhs(n, q) - sign * inner.value
    return EvalResult(value, inner.truncation, inner.tail_bound, CONTINUATION)


def delta_direct(n: int, q: complex) -> EvalResult:
    """
    δ_n(q) for n <= −1 without the inversion formula: series inside the disk
    of radius 0.9, log expansion within its region, the Bose–Einstein
    integral on the rest of the cut plane.
    """
    q = ensure_finite(q, "q")
    if abs(q) <= SERIES_RADIUS:
        return EvalResult(*_series(n, q), SERIES)
    _check_cut(q)
    if q == 1:
        return delta_eval(n, q)
    if abs(cmath.log(q)) <= LOG_EXPANSION_RATIO * 2 * math.pi:
        return EvalResult(*_log_expansion(n, q), LOG_EXPANSION)
    return EvalResult(*_bose_einstein(n, q), INTEGRAL)


def inversion_sides(n: int, q: complex) -> Tuple[complex, complex, float]:
    """
    (δ_n(q) + (−1)ⁿδ_n(1/q), RHS, tail bound) for the inversion identity. For
    n <= −1 both δ values avoid the continuation branch.
    """
    q = ensure_finite(q, "q")
    if q == 0:
        raise DomainError("q=0 has no inverse")
    sign = -1 if n % 2 else 1
    if n >= 1:
        if q == 1:
            raise DomainError("pole at q=1", f"δ_{n}")
        return _closed_form(n, q) + sign * _closed_form(n, 1 / q), 0j, 0.0
    rhs = inversion_rhs(n, q)
    if n == 0:
        return _closed_form(0, q) + _closed_form(0, 1 / q), rhs, 0.0
    a, b = delta_direct(n, q), delta_direct(n, 1 / q)
    return a.value + sign * b.value, rhs, a.tail_bound + b.tail_bound


def inversion_defect(n: int, q: complex) -> float:
    lhs, rhs, _ = inversion_sides(n, q)
    return abs(lhs - rhs)


def root_of_unity_check(n: int, k: int, q: complex) -> float:
    """|δ_n(q^k) − k^{−1−n}·Σ_{Λ^k=1} δ_n(Λq)|."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    q = ensure_finite(q, "q")
    radius = abs(q)
    if radius > 1 or (radius == 1 and n > -2):
        raise DomainError("outside convergence region", f"|q| = {radius}")
    roots = [cmath.exp(TWO_PI_I * j / k) for j in range(k)]
    total = sum(delta_eval(n, root * q).value for root in roots)
    return abs(delta_eval(n, q**k).value - float(k) ** (-1 - n) * total)


# extended delta functions


def _extended_series(spec: ExtendedDeltaSpec, q: complex, weights):
    radius = abs(q)
    n = spec.n
    truncation = max(
        truncation_for(n + j - 1, radius, TRUNCATION_TARGET, cap=MAX_SERIES_TERMS)
        for j, _ in weights
    )
    ks = np.arange(1, truncation + 1, dtype=float)
    coefficients = sum(w * ks ** (n + j - 1) for j, w in weights)
    value = complex(np.sum(coefficients * np.power(complex(q), ks)))
    tail = sum(
        abs(w) * poly_geometric_tail(truncation + 1, n + j - 1, radius) for j, w in weights
    )
    return value, truncation, tail


def extended_delta_eval(spec: ExtendedDeltaSpec, q: complex) -> EvalResult:
    """
    Δ_n(q): δ_n for n >= 0, otherwise Σ_k a_k(n)qᵏ with
    a_k(n) = Σ_j (φ_j/j!)(2πi)^{j−1} k^{n+j−1}.
    """
    q = ensure_finite(q, "q")
    if spec.n >= 0:
        return delta_eval(spec.n, q)
    weights = spec.weights()
    if not weights:
        return EvalResult(0j, 0, 0.0, SERIES)
    top = max(j for j, _ in weights)
    if abs(q) == 1 and spec.n + top - 1 >= -1:
        raise DomainError("divergence on |q|=1", f"Δ_{spec.n}")
    if abs(q) <= SERIES_RADIUS:
        return EvalResult(*_extended_series(spec, q, weights), SERIES)
    value, truncation, tail, methods = 0j, 0, 0.0, set()
    for j, w in weights:
        part = delta_eval(spec.n + j - 1, q)
        value += w * part.value
        truncation = max(truncation, part.truncation)
        tail += abs(w) * part.tail_bound
        methods.add(part.method)
    method = methods.pop() if len(methods) == 1 else "+".join(sorted(methods))
    return EvalResult(value, truncation, tail, method)


def extended_direct(spec: ExtendedDeltaSpec, q: complex) -> EvalResult:
    """Δ_n(q) for n <= −1 from delta_direct components only."""
    weights = spec.weights()
    if abs(q) <= SERIES_RADIUS and weights:
        return EvalResult(*_extended_series(spec, q, weights), SERIES)
    value, tail, methods = 0j, 0.0, set()
    for j, w in weights:
        part = delta_direct(spec.n + j - 1, q)
        value += w * part.value
        tail += abs(w) * part.tail_bound
        methods.add(part.method)
    return EvalResult(value, 0, tail, "+".join(sorted(methods)) or SERIES)


def extended_inversion_rhs(spec: ExtendedDeltaSpec, q: complex) -> complex:
    """−(2πi)^m/m!·P_m(log q/(2πi)), m = −n, P_m the sign-case projection."""
    m = -spec.n
    poly = projected_poly_from_phi(spec.phi, m, spec.sign_case)
    x = log_branch(q) / TWO_PI_I
    return -(TWO_PI_I**m) / factorial(m) * poly_eval(poly, x)


def extended_inversion_sides(spec: ExtendedDeltaSpec, q: complex) -> Tuple[complex, complex, float]:
    if spec.n >= 0:
        return inversion_sides(spec.n, q)
    q = ensure_finite(q, "q")
    rhs = extended_inversion_rhs(spec, q)
    a, b = extended_direct(spec, q), extended_direct(spec, 1 / q)
    logging.debug(f"Δ_{spec.n} {spec.label} at q={q}: {a.method}/{b.method}")
    return a.value + spec.sign() * b.value, rhs, a.tail_bound + b.tail_bound


def extended_inversion_defect(spec: ExtendedDeltaSpec, q: complex) -> float:
    """
    Defect of Δ_n(q) ± Δ_n(1/q) = −(2πi)^{−n}/(−n)!·P_{−n}(log q/(2πi)), with
    sign (−1)ⁿ in the P-case and (−1)^{n+1} in the Q-case.
    """
    lhs, rhs, _ = extended_inversion_sides(spec, q)
    return abs(lhs - rhs)
