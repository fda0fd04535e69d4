"""
Truncated power series over the rationals or over MultiPoly.

A series of order N carries exactly the coefficients of t^0..t^N; every
operation returns a series of the same order and never claims anything beyond
t^N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Optional, Sequence, Tuple

from .commons import CompositionError, NonUnitError, RingMismatchError
from .multipoly import MultiPoly

RATIONAL = "rational"
MULTIPOLY = "multipoly"


@dataclass(frozen=True)
class TruncatedSeries:
    order: int
    coefficients: Tuple
    ring: str = RATIONAL
    arity: Optional[int] = None

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if self.ring not in (RATIONAL, MULTIPOLY):
            raise ValueError(f"unknown ring '{self.ring}'")
        if self.ring == MULTIPOLY and self.arity is None:
            raise ValueError("multipoly series need an arity")
        coeffs = list(self.coefficients)[: self.order + 1]
        coeffs += [self.zero()] * (self.order + 1 - len(coeffs))
        object.__setattr__(self, "coefficients", tuple(self._lift(c) for c in coeffs))

    # ring plumbing

    def _lift(self, c):
        if self.ring == RATIONAL:
            if isinstance(c, MultiPoly):
                raise RingMismatchError("MultiPoly coefficient in a rational series")
            return Fraction(c)
        if isinstance(c, MultiPoly):
            if c.arity != self.arity:
                raise RingMismatchError(f"arity {c.arity} in a series of arity {self.arity}")
            return c
        return MultiPoly.constant(c, self.arity)

    def zero(self):
        return Fraction(0) if self.ring == RATIONAL else MultiPoly(self.arity)

    def one(self):
        return Fraction(1) if self.ring == RATIONAL else MultiPoly.constant(1, self.arity)

    def like(self, coefficients: Sequence) -> "TruncatedSeries":
        return TruncatedSeries(self.order, tuple(coefficients), self.ring, self.arity)

    def _check_compatible(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise RingMismatchError(f"expected a TruncatedSeries, got {type(other).__name__}")
        if self.ring != other.ring or self.arity != other.arity:
            raise RingMismatchError(
                f"ring mismatch: {self.ring}/{self.arity} vs {other.ring}/{other.arity}"
            )
        if self.order != other.order:
            raise RingMismatchError(f"order mismatch: {self.order} vs {other.order}")

    # constructors

    @classmethod
    def rational(cls, coefficients: Sequence, order: int) -> "TruncatedSeries":
        return cls(order, tuple(coefficients), RATIONAL)

    @classmethod
    def multipoly(cls, coefficients: Sequence, order: int, arity: int) -> "TruncatedSeries":
        return cls(order, tuple(coefficients), MULTIPOLY, arity)

    @classmethod
    def from_function(cls, fn: Callable[[int], Fraction], order: int) -> "TruncatedSeries":
        return cls(order, tuple(fn(k) for k in range(order + 1)), RATIONAL)

    # accessors

    def coefficient(self, k: int):
        if 0 <= k <= self.order:
            return self.coefficients[k]
        raise IndexError(f"t^{k} is beyond the truncation order {self.order}")

    def valuation(self) -> int:
        for k, c in enumerate(self.coefficients):
            if not c == 0:
                return k
        return self.order + 1

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise RingMismatchError(f"cannot extend a series of order {self.order} to {order}")
        return TruncatedSeries(order, self.coefficients[: order + 1], self.ring, self.arity)

    def shift_down(self, k: int = 1) -> "TruncatedSeries":
        """Divide by t^k; the lowest k coefficients must vanish. Order drops by k."""
        if any(not c == 0 for c in self.coefficients[:k]):
            raise NonUnitError(f"series is not divisible by t^{k}")
        return TruncatedSeries(self.order - k, self.coefficients[k:], self.ring, self.arity)

    def map_coefficients(self, fn, ring: str = RATIONAL, arity: Optional[int] = None):
        return TruncatedSeries(self.order, tuple(fn(c) for c in self.coefficients), ring, arity)

    # arithmetic

    def __add__(self, other):
        self._check_compatible(other)
        return self.like(a + b for a, b in zip(self.coefficients, other.coefficients))

    def __sub__(self, other):
        self._check_compatible(other)
        return self.like(a - b for a, b in zip(self.coefficients, other.coefficients))

    def __neg__(self):
        return self.like(-a for a in self.coefficients)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return self.like(a * other for a in self.coefficients)

    def __rmul__(self, other):
        return self.like(other * a for a in self.coefficients)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_div(self, other)
        return self.like(a / other for a in self.coefficients)

    def __call__(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        return series_compose(self, inner)

    def __str__(self) -> str:
        parts = []
        for k, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            parts.append(f"({c}){mono}" if mono else f"({c})")
        return " + ".join(parts or ["0"]) + f" + O(t^{self.order + 1})"


def identity_series(order: int, ring: str = RATIONAL, arity: Optional[int] = None):
    return TruncatedSeries(order, (0, 1) if order >= 1 else (0,), ring, arity)


def one_series(order: int, ring: str = RATIONAL, arity: Optional[int] = None):
    return TruncatedSeries(order, (1,), ring, arity)


def exp_series(order: int) -> TruncatedSeries:
    return TruncatedSeries.from_function(lambda k: Fraction(1, factorial(k)), order)


def expm1_over_t_series(order: int) -> TruncatedSeries:
    """(e^t − 1)/t = Σ t^k/(k+1)!"""
    return TruncatedSeries.from_function(lambda k: Fraction(1, factorial(k + 1)), order)


def log1p_series(order: int) -> TruncatedSeries:
    return TruncatedSeries.from_function(
        lambda k: Fraction((-1) ** (k + 1), k) if k else Fraction(0), order
    )


def sinc_series(order: int) -> TruncatedSeries:
    """sin(t)/t"""
    return TruncatedSeries.from_function(
        lambda k: Fraction((-1) ** (k // 2), factorial(k + 1)) if k % 2 == 0 else Fraction(0),
        order,
    )


def cos_series(order: int) -> TruncatedSeries:
    return TruncatedSeries.from_function(
        lambda k: Fraction((-1) ** (k // 2), factorial(k)) if k % 2 == 0 else Fraction(0),
        order,
    )


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the common order."""
    a._check_compatible(b)
    n = a.order
    out: List = []
    for k in range(n + 1):
        acc = a.zero()
        for i in range(k + 1):
            x = a.coefficients[i]
            if x == 0:
                continue
            y = b.coefficients[k - i]
            if y == 0:
                continue
            acc = acc + x * y
        out.append(acc)
    return a.like(out)


def _unit_inverse(series: TruncatedSeries, c) -> Fraction:
    if series.ring == RATIONAL:
        if c == 0:
            raise NonUnitError("constant term is zero")
        return Fraction(1) / c
    if not c.is_constant() or c.is_zero():
        raise NonUnitError(f"constant term {c} is not a nonzero rational")
    return Fraction(1) / c.constant_term()


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Quotient q with a = q·b to the common order; b(0) must be a unit."""
    a._check_compatible(b)
    inv = _unit_inverse(b, b.coefficients[0])
    out: List = []
    for k in range(a.order + 1):
        acc = a.coefficients[k]
        for i in range(k):
            y = b.coefficients[k - i]
            if y == 0 or out[i] == 0:
                continue
            acc = acc - out[i] * y
        out.append(acc * inv)
    return a.like(out)


def series_compose(outer: TruncatedSeries, inner: TruncatedSeries) -> TruncatedSeries:
    """outer(inner(t)) truncated at the common order; inner(0) must vanish."""
    outer._check_compatible(inner)
    if not inner.coefficients[0] == 0:
        raise CompositionError(f"inner series has constant term {inner.coefficients[0]}")
    result = outer.like([outer.coefficients[0]])
    power = one_series(outer.order, outer.ring, outer.arity)
    for k in range(1, outer.order + 1):
        power = series_mul(power, inner)
        c = outer.coefficients[k]
        if c == 0:
            continue
        result = result + power * c
    return result


def series_reversion(f: TruncatedSeries) -> TruncatedSeries:
    """
    Compositional inverse g with f(g(t)) = g(f(t)) = t, by Lagrange inversion:
    [t^n] g = (1/n) [s^{n-1}] (s/f(s))^n.
    """
    if not f.coefficients[0] == 0:
        raise CompositionError(f"series has constant term {f.coefficients[0]}")
    n = f.order
    if n == 0:
        return f.like([])
    lead = f.coefficients[1]
    try:
        _unit_inverse(f, lead)
    except NonUnitError as e:
        raise NonUnitError(f"linear coefficient {lead} is not a unit") from e
    # f/s to order n-1, then h = s/f(s)
    f_over_s = f.shift_down(1)
    h = series_div(one_series(n - 1, f.ring, f.arity), f_over_s)
    out = [f.zero()]
    power = one_series(n - 1, f.ring, f.arity)
    for k in range(1, n + 1):
        power = series_mul(power, h)
        out.append(power.coefficients[k - 1] / k)
    return f.like(out)


def specialize_series(series: TruncatedSeries, values: Sequence) -> TruncatedSeries:
    """Substitute c_i = values[i-1] in every coefficient of a MultiPoly series."""
    if series.ring != MULTIPOLY:
        raise RingMismatchError("only multipoly series can be specialized")
    return TruncatedSeries(
        series.order, tuple(c.specialize(values) for c in series.coefficients), RATIONAL
    )
