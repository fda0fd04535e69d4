"""
Exact scalars and dense univariate polynomials.

BigRational is ``fractions.Fraction``: always in lowest terms with a positive
denominator, and arithmetic never rounds. ``Polynomial`` stores coefficients by
ascending degree; the coefficient ring is Fraction by default, but any exact
ring element supporting +, -, * and == 0 (e.g. ``MultiPoly``) is accepted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .commons import format_rational, parse_rational

BigRational = Fraction
Scalar = Union[Fraction, int, float, complex]


def _is_zero(c) -> bool:
    return c == 0


def _strip(coefficients: Iterable) -> Tuple:
    coeffs = list(coefficients)
    while coeffs and _is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    coefficients: Tuple = ()

    def __post_init__(self):
        coeffs = tuple(
            Fraction(c) if isinstance(c, int) else c for c in self.coefficients
        )
        object.__setattr__(self, "coefficients", _strip(coeffs))

    @classmethod
    def constant(cls, value) -> "Polynomial":
        return cls((value,))

    @classmethod
    def x(cls) -> "Polynomial":
        return cls((Fraction(0), Fraction(1)))

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Polynomial":
        return cls(tuple(parse_rational(c) for c in data))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def coefficient(self, k: int):
        if 0 <= k < len(self.coefficients):
            return self.coefficients[k]
        return Fraction(0)

    def __add__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        n = max(len(self.coefficients), len(other.coefficients))
        return Polynomial(
            tuple(self.coefficient(k) + other.coefficient(k) for k in range(n))
        )

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coefficients))

    def __sub__(self, other) -> "Polynomial":
        return self + (-_as_polynomial(other))

    def __rsub__(self, other) -> "Polynomial":
        return _as_polynomial(other) - self

    def __mul__(self, other) -> "Polynomial":
        if not isinstance(other, Polynomial):
            return Polynomial(tuple(c * other for c in self.coefficients))
        if self.is_zero() or other.is_zero():
            return Polynomial()
        out: List = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            if _is_zero(a):
                continue
            for j, b in enumerate(other.coefficients):
                out[i + j] = out[i + j] + a * b
        return Polynomial(tuple(out))

    def __rmul__(self, other) -> "Polynomial":
        return Polynomial(tuple(other * c for c in self.coefficients))

    def __call__(self, x):
        return poly_eval(self, x)

    def map_coefficients(self, fn: Callable) -> "Polynomial":
        return Polynomial(tuple(fn(c) for c in self.coefficients))

    def as_complex_array(self) -> np.ndarray:
        """Float coefficients by ascending degree, for vectorized evaluation."""
        return np.array([complex(float(c)) for c in self.coefficients] or [0j])

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self.coefficients]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if _is_zero(c):
                continue
            if isinstance(c, Fraction):
                sign = "-" if c < 0 else "+"
                mag = abs(c)
                body = format_rational(mag)
                if k > 0 and mag == 1:
                    body = ""
            else:
                sign, body = "+", f"({c})"
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            term = f"{body}{'*' if body and mono else ''}{mono}"
            parts.append((sign, term))
        first_sign, first_term = parts[0]
        text = ("-" if first_sign == "-" else "") + first_term
        for sign, term in parts[1:]:
            text += f" {sign} {term}"
        return text


def _as_polynomial(value) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial.constant(value)


def poly_eval(p: Polynomial, x):
    """
    Horner evaluation. Exact for rational x; works for complex floats and for
    numpy arrays of points.
    """
    if isinstance(x, np.ndarray):
        return np.polynomial.polynomial.polyval(x, p.as_complex_array())
    if isinstance(x, (complex, float)):
        acc = 0j if isinstance(x, complex) else 0.0
        for c in reversed(p.coefficients):
            acc = acc * x + float(c)
        return acc
    acc = Fraction(0)
    for c in reversed(p.coefficients):
        acc = acc * x + c
    return acc


def poly_derivative(p: Polynomial) -> Polynomial:
    return Polynomial(tuple(k * c for k, c in enumerate(p.coefficients) if k > 0))


def poly_integral_01(p: Polynomial) -> Fraction:
    """Exact ∫₀¹ p(x) dx."""
    return sum(
        (c / (k + 1) for k, c in enumerate(p.coefficients)), start=Fraction(0)
    )


def poly_moment(p: Polynomial, j: int) -> Fraction:
    """Exact ∫₀¹ p(x) x^j dx."""
    return sum(
        (c / (k + j + 1) for k, c in enumerate(p.coefficients)), start=Fraction(0)
    )
