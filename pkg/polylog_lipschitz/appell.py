"""
Appell polynomial sequences of Bernoulli type.

A sequence is described by a rational series g(t) with g(0) = 1 through the
generating function t·e^{xt} / ((e^t − 1)·g(t)) = Σ A_n(x) tⁿ/n!. Everything
here is exact except the Fourier coefficient values and the quadrature oracle.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from .algebra import Polynomial, poly_eval, poly_integral_01
from .commons import (
    ConfigError,
    ConsistencyError,
    OrderGuardError,
    format_rational,
    open_json,
    parse_rational,
)
from .quadrature import adaptive_gauss
from .series import (
    TruncatedSeries,
    cos_series,
    expm1_over_t_series,
    one_series,
    series_div,
    sinc_series,
)

EVEN_VANISHING = "even-vanishing"
ODD_VANISHING = "odd-vanishing"
NEITHER = "neither"

BUILTIN_MAX_DEGREE = 40


@dataclass(frozen=True)
class AppellDescriptor:
    g: TruncatedSeries
    label: str
    max_degree: int

    def __post_init__(self):
        if self.g.ring != "rational":
            raise ConfigError(f"descriptor '{self.label}': g must have rational coefficients")
        if self.g.coefficients[0] != 1:
            raise ConfigError(
                f"descriptor '{self.label}': g(0) must be 1, got {self.g.coefficients[0]}"
            )
        if self.max_degree < 0:
            raise ConfigError(f"descriptor '{self.label}': max_degree must be >= 0")
        if self.g.order < self.max_degree + 1:
            raise ConfigError(
                f"descriptor '{self.label}': g has order {self.g.order}, "
                f"needs at least {self.max_degree + 1}"
            )

    def check_degree(self, n: int):
        if n < 0 or n > self.max_degree:
            raise OrderGuardError(
                f"degree {n} outside 0..{self.max_degree} for descriptor '{self.label}'"
            )

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "g_coefficients": [format_rational(c) for c in self.g.coefficients],
            "max_degree": self.max_degree,
        }

    @classmethod
    def from_json(cls, data: dict) -> "AppellDescriptor":
        try:
            label = str(data["label"])
            coeffs = [parse_rational(c) for c in data["g_coefficients"]]
            max_degree = int(data["max_degree"])
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"Invalid descriptor entry {data!r}: {e}") from e
        if len(coeffs) < max_degree + 2:
            raise ConfigError(
                f"descriptor '{label}': {len(coeffs)} g coefficients given, "
                f"max_degree {max_degree} needs {max_degree + 2}"
            )
        return cls(TruncatedSeries.rational(coeffs, len(coeffs) - 1), label, max_degree)


@dataclass(frozen=True)
class PhiVector:
    values: Tuple[Fraction, ...]
    parity_class: str

    def phi(self, j: int) -> Fraction:
        """φ_j for 1 <= j <= n; zero beyond."""
        if j < 1:
            raise IndexError("φ is indexed from 1")
        return self.values[j - 1] if j <= len(self.values) else Fraction(0)

    def to_json(self) -> dict:
        return {
            "values": [format_rational(v) for v in self.values],
            "parity_class": self.parity_class,
        }


@dataclass(frozen=True)
class FourierCoefficient:
    k: int
    n: int
    value: complex
    # (j, φ_j/j!, exponent n+1-j); the value is -n!·Σ rate·(2πik)^{-exponent}
    terms: Tuple[Tuple[int, Fraction, int], ...] = field(default=())
    exact_value: Optional[Fraction] = None


def bernoulli_descriptor(max_degree: int = BUILTIN_MAX_DEGREE) -> AppellDescriptor:
    return AppellDescriptor(one_series(max_degree + 1), "bernoulli", max_degree)


def builtin_descriptors(max_degree: int = BUILTIN_MAX_DEGREE) -> Dict[str, AppellDescriptor]:
    order = max_degree + 1
    return {
        "bernoulli": bernoulli_descriptor(max_degree),
        "a-seq": AppellDescriptor(sinc_series(order), "a-seq", max_degree),
        "b-seq": AppellDescriptor(cos_series(order), "b-seq", max_degree),
    }


def load_registry(path=None) -> Dict[str, AppellDescriptor]:
    """Built-ins, overridden/extended by the entries of a JSON registry file."""
    registry = builtin_descriptors()
    if path is None:
        return registry
    data = open_json(path)
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list):
        raise ConfigError(f"Registry {path} must hold a list of descriptors")
    for entry in data:
        descriptor = AppellDescriptor.from_json(entry)
        registry[descriptor.label] = descriptor
    logging.info(f"Loaded {len(data)} descriptor(s) from {path}")
    return registry


def get_descriptor(label: str, registry: Optional[Dict[str, AppellDescriptor]] = None):
    registry = builtin_descriptors() if registry is None else registry
    if label not in registry:
        known = ", ".join(sorted(registry))
        raise ConfigError(f"Unknown descriptor '{label}' (known: {known})")
    return registry[label]


@lru_cache(maxsize=None)
def _bernoulli_table(order: int) -> Tuple[Fraction, ...]:
    quotient = series_div(one_series(order), expm1_over_t_series(order))
    return tuple(c * factorial(k) for k, c in enumerate(quotient.coefficients))


def bernoulli_numbers(n: int) -> List[Fraction]:
    """B_0..B_n from t/(e^t − 1), so B_1 = −1/2."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    # round the cache key up so repeated small requests share one table
    order = max(16, 1 << (n.bit_length()))
    return list(_bernoulli_table(order)[: n + 1])


def _binomial_convolution(numbers: List[Fraction], n: int) -> Polynomial:
    # Σ_k C(n,k) a_k x^{n-k}, ascending degree
    return Polynomial(tuple(comb(n, n - d) * numbers[n - d] for d in range(n + 1)))


@lru_cache(maxsize=None)
def bernoulli_poly(n: int) -> Polynomial:
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    return _binomial_convolution(bernoulli_numbers(n), n)


@lru_cache(maxsize=256)
def _appell_table(descriptor: AppellDescriptor) -> Tuple[Fraction, ...]:
    order = descriptor.max_degree
    bern = series_div(one_series(order), expm1_over_t_series(order))
    quotient = series_div(bern, descriptor.g.truncate(order))
    return tuple(c * factorial(k) for k, c in enumerate(quotient.coefficients))


def appell_numbers(descriptor: AppellDescriptor, n: int) -> List[Fraction]:
    """A_0(0)..A_n(0) from t/((e^t − 1)·g(t))."""
    descriptor.check_degree(n)
    return list(_appell_table(descriptor)[: n + 1])


def appell_poly(descriptor: AppellDescriptor, n: int) -> Polynomial:
    descriptor.check_degree(n)
    return _binomial_convolution(appell_numbers(descriptor, n), n)


def appell_polys(descriptor: AppellDescriptor, n: int) -> List[Polynomial]:
    return [appell_poly(descriptor, k) for k in range(n + 1)]


def phi_from_generating_function(descriptor: AppellDescriptor, n: int) -> List[Fraction]:
    """φ_j = j!·[t^j] t/g(t), j = 1..n."""
    order = descriptor.g.order
    t_over_g = series_div(
        TruncatedSeries.rational((0, 1), order), descriptor.g
    )
    return [t_over_g.coefficients[j] * factorial(j) for j in range(1, n + 1)]


def parity_class(values: Iterable[Fraction]) -> str:
    values = list(values)
    even_zero = all(v == 0 for j, v in enumerate(values, start=1) if j % 2 == 0)
    odd_zero = all(v == 0 for j, v in enumerate(values, start=1) if j % 2 == 1)
    if even_zero:
        return EVEN_VANISHING
    if odd_zero:
        return ODD_VANISHING
    return NEITHER


def phi_vector(descriptor: AppellDescriptor, n: int) -> PhiVector:
    """
    Boundary jumps φ_j = A_j(1) − A_j(0), cross-checked against the
    coefficients of t/g(t).
    """
    descriptor.check_degree(n)
    direct = []
    for j in range(1, n + 1):
        p = appell_poly(descriptor, j)
        direct.append(poly_eval(p, Fraction(1)) - poly_eval(p, Fraction(0)))
    via_series = phi_from_generating_function(descriptor, n)
    if direct != via_series:
        raise ConsistencyError(
            f"φ mismatch for '{descriptor.label}': direct {direct} vs t/g {via_series}"
        )
    return PhiVector(tuple(direct), parity_class(direct))


def fourier_coefficient(descriptor: AppellDescriptor, n: int, k: int) -> FourierCoefficient:
    """
    c_k = ∫₀¹ A_n(t) e^{−2πikt} dt in closed form
    −n!·Σ_j (φ_j/j!)(2πik)^{−(n+1−j)}; k = 0 gives the exact mean c₀.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if k == 0:
        c0 = poly_integral_01(appell_poly(descriptor, n))
        return FourierCoefficient(0, n, complex(float(c0)), (), c0)
    phi = phi_vector(descriptor, n)
    w = 2j * math.pi * k
    terms = []
    total = 0j
    for j in range(1, n + 1):
        rate = phi.phi(j) / factorial(j)
        if rate == 0:
            continue
        terms.append((j, rate, n + 1 - j))
        total += float(rate) * w ** (-(n + 1 - j))
    return FourierCoefficient(k, n, -factorial(n) * total, tuple(terms))


def fourier_coefficient_quadrature(
    descriptor: AppellDescriptor, n: int, k: int, tol: float = 1e-12
) -> complex:
    """Oracle: adaptive Gauss–Legendre of A_n(t)e^{−2πikt} on [0, 1]."""
    p = appell_poly(descriptor, n)
    coeffs = p.as_complex_array()
    return adaptive_gauss(
        lambda t: np.polynomial.polynomial.polyval(t, coeffs) * np.exp(-2j * np.pi * k * t),
        0.0,
        1.0,
        tol=tol,
    )


def fourier_partial_sum(descriptor: AppellDescriptor, n: int, x, terms: int = 2000):
    """Symmetric partial Fourier sum Σ_{|k|<=terms} c_k e^{2πikx}, c₀ included."""
    x = np.asarray(x, dtype=float)
    phi = phi_vector(descriptor, n)
    ks = np.arange(1, terms + 1, dtype=float)
    total = np.zeros_like(x, dtype=complex)
    for j in range(1, n + 1):
        rate = float(phi.phi(j) / factorial(j))
        if rate == 0:
            continue
        power = n + 1 - j
        plus = (2j * np.pi * ks) ** (-power)
        minus = (-2j * np.pi * ks) ** (-power)
        phase = np.exp(2j * np.pi * np.outer(x.ravel(), ks))
        part = phase @ plus + np.conj(phase) @ minus
        total = total + rate * part.reshape(x.shape)
    c0 = float(poly_integral_01(appell_poly(descriptor, n)))
    return c0 - factorial(n) * total


def r_poly(p: Polynomial, n: Optional[int] = None) -> Polynomial:
    """
    The polynomial R with p(τ)·log(1 − 1/τ) + R(τ) = O(1/τ) at infinity:
    R = Σ_i Σ_{k=1}^{i} p_i/k · τ^{i−k}.
    """
    degree = p.degree
    if n is not None and n != degree and not p.is_zero():
        raise ValueError(f"polynomial has degree {degree}, expected {n}")
    if degree < 1:
        return Polynomial()
    out = [Fraction(0)] * degree
    for i in range(1, degree + 1):
        c = p.coefficients[i]
        if c == 0:
            continue
        for k in range(1, i + 1):
            out[i - k] += c / k
    return Polynomial(tuple(out))


def r_table(descriptor: AppellDescriptor, n: int) -> List[Polynomial]:
    """R_1..R_n for the descriptor's polynomials."""
    return [r_poly(appell_poly(descriptor, k), k) for k in range(1, n + 1)]


P_CASE = "P"
Q_CASE = "Q"


def parity_indices(parity: str, m: int) -> List[int]:
    """Indices j <= m kept by a sign case: odd j for "P", even j for "Q"."""
    if parity not in (P_CASE, Q_CASE):
        raise ValueError(f"sign case must be 'P' or 'Q', got {parity!r}")
    wanted = 1 if parity == P_CASE else 0
    return [j for j in range(1, m + 1) if j % 2 == wanted]


def projected_poly_from_phi(phi: PhiVector, m: int, parity: str) -> Polynomial:
    """
    m!·Σ_{j∈J} φ_j B_{m+1−j}(x)/(j!(m+1−j)!), J from parity_indices. Equals
    A_m − c₀ when the complementary φ_j vanish; m = 0 gives B₀ = 1.
    """
    if m == 0:
        return Polynomial.constant(1)
    if len(phi.values) < m:
        raise OrderGuardError(f"φ known up to j={len(phi.values)}, need j={m}")
    out = Polynomial()
    for j in parity_indices(parity, m):
        if phi.phi(j) == 0:
            continue
        weight = Fraction(factorial(m), factorial(j) * factorial(m + 1 - j)) * phi.phi(j)
        out = out + bernoulli_poly(m + 1 - j) * weight
    return out


def projected_poly(descriptor: AppellDescriptor, m: int, parity: str) -> Polynomial:
    if m == 0:
        return Polynomial.constant(1)
    return projected_poly_from_phi(phi_vector(descriptor, m), m, parity)


def default_sign_case(phi: PhiVector) -> str:
    return Q_CASE if phi.parity_class == ODD_VANISHING else P_CASE
