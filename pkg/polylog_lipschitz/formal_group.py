"""
The universal formal group over ℚ[c₁, c₂, …].

F(s) = Σ_{i>=0} c_i s^{i+1}/(i+1) with c₀ = 1 is the logarithm, G = F⁻¹ the
exponential, and Φ(s₁, s₂) = G(F(s₁) + F(s₂)) the group law. The universal
Bernoulli numbers are B̂_n = n!·[tⁿ] t/G(t).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import Polynomial
from .appell import AppellDescriptor
from .commons import OrderGuardError
from .multipoly import MultiPoly
from .series import (
    TruncatedSeries,
    one_series,
    series_compose,
    series_div,
    series_mul,
    series_reversion,
    specialize_series,
)

MIN_ORDER = 2
MAX_ORDER = 16
MAX_BERNOULLI = 14

# sparse multivariate series: exponent tuple -> coefficient
MultiSeries = Dict[Tuple[int, ...], MultiPoly]


@dataclass(frozen=True)
class FormalGroupData:
    order: int
    arity: int
    F: TruncatedSeries
    G: TruncatedSeries

    def specialize(self, values: Sequence) -> Tuple[TruncatedSeries, TruncatedSeries]:
        return specialize_series(self.F, values), specialize_series(self.G, values)

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "arity": self.arity,
            "F": [c.to_json() for c in self.F.coefficients],
            "G": [c.to_json() for c in self.G.coefficients],
        }


@dataclass(frozen=True)
class UniversalBernoulli:
    arity: int
    numbers: Tuple[MultiPoly, ...]
    polynomials: Optional[Tuple[Polynomial, ...]] = None

    def number(self, n: int) -> MultiPoly:
        if not 0 <= n < len(self.numbers):
            raise OrderGuardError(f"B̂_{n} not computed (have 0..{len(self.numbers) - 1})")
        return self.numbers[n]

    def specialize(self, values: Sequence) -> List[Fraction]:
        return [b.specialize(values) for b in self.numbers]

    def to_json(self) -> dict:
        out = {"arity": self.arity, "numbers": [b.to_json() for b in self.numbers]}
        if self.polynomials is not None:
            out["polynomials"] = [
                [c.to_json() for c in p.coefficients] for p in self.polynomials
            ]
        return out


def logarithm_series(order: int, arity: Optional[int] = None) -> TruncatedSeries:
    """F(s) = s + Σ_{i=1}^{order−1} c_i s^{i+1}/(i+1) over ℚ[c₁..c_arity]."""
    arity = order - 1 if arity is None else arity
    if arity < order - 1:
        raise OrderGuardError(f"order {order} needs c_1..c_{order - 1}, arity is {arity}")
    coefficients: List[object] = [0, 1]
    for i in range(1, order):
        coefficients.append(MultiPoly.variable(i, arity) * Fraction(1, i + 1))
    return TruncatedSeries.multipoly(coefficients, order, arity)


@lru_cache(maxsize=32)
def build_formal_group(N: int, arity: Optional[int] = None) -> FormalGroupData:
    if not MIN_ORDER <= N <= MAX_ORDER:
        raise OrderGuardError(f"order {N} outside {MIN_ORDER}..{MAX_ORDER}")
    F = logarithm_series(N, arity)
    G = series_reversion(F)
    logging.debug(f"formal group of order {N}: G has {sum(len(c.terms) for c in G.coefficients)} terms")
    return FormalGroupData(N, F.arity, F, G)


# multivariate truncated series, used for the group law


def _mv_add(a: MultiSeries, b: MultiSeries) -> MultiSeries:
    out = dict(a)
    for exps, c in b.items():
        out[exps] = out[exps] + c if exps in out else c
    return {e: c for e, c in out.items() if not c.is_zero()}


def _mv_mul(a: MultiSeries, b: MultiSeries, order: int) -> MultiSeries:
    out: MultiSeries = {}
    for ea, ca in a.items():
        da = sum(ea)
        for eb, cb in b.items():
            if da + sum(eb) > order:
                continue
            exps = tuple(x + y for x, y in zip(ea, eb))
            out[exps] = out[exps] + ca * cb if exps in out else ca * cb
    return {e: c for e, c in out.items() if not c.is_zero()}


def _mv_compose(outer: TruncatedSeries, inner: MultiSeries, variables: int, order: int) -> MultiSeries:
    """outer(inner) for a univariate outer and a multivariate inner without constant term."""
    result: MultiSeries = {}
    const = outer.coefficients[0]
    if not const.is_zero():
        result[(0,) * variables] = const
    power: MultiSeries = {(0,) * variables: MultiPoly.constant(1, outer.arity)}
    for k in range(1, order + 1):
        power = _mv_mul(power, inner, order)
        c = outer.coefficients[k]
        if c.is_zero():
            continue
        result = _mv_add(result, {e: v * c for e, v in power.items()})
    return result


def _embed(series: TruncatedSeries, index: int, variables: int) -> MultiSeries:
    out: MultiSeries = {}
    for k, c in enumerate(series.coefficients):
        if c.is_zero():
            continue
        exps = [0] * variables
        exps[index] = k
        out[tuple(exps)] = c
    return out


def group_law(fg: FormalGroupData, order: Optional[int] = None) -> MultiSeries:
    """Φ(s₁, s₂) = G(F(s₁) + F(s₂)) to total degree ``order`` as {(i, j): coefficient}."""
    order = fg.order if order is None else order
    if order > fg.order:
        raise OrderGuardError(f"law requested to degree {order}, group has order {fg.order}")
    inner = _mv_add(_embed(fg.F, 0, 2), _embed(fg.F, 1, 2))
    return _mv_compose(fg.G.truncate(order), inner, 2, order)


def _substitute_law(
    law: MultiSeries, first: MultiSeries, second: MultiSeries, variables: int, order: int, arity: int
) -> MultiSeries:
    """Φ(first, second) with first and second multivariate series."""
    max_i = max((i for i, _ in law), default=0)
    max_j = max((j for _, j in law), default=0)
    one = {(0,) * variables: MultiPoly.constant(1, arity)}
    powers_a = [one]
    for _ in range(max_i):
        powers_a.append(_mv_mul(powers_a[-1], first, order))
    powers_b = [one]
    for _ in range(max_j):
        powers_b.append(_mv_mul(powers_b[-1], second, order))
    result: MultiSeries = {}
    for (i, j), c in law.items():
        term = _mv_mul(powers_a[i], powers_b[j], order)
        result = _mv_add(result, {e: v * c for e, v in term.items()})
    return result


def check_law_axioms(fg: FormalGroupData, order: Optional[int] = None) -> Dict[str, bool]:
    """Unit, commutativity and associativity of Φ to total degree ``order``."""
    order = fg.order if order is None else order
    law = group_law(fg, order)
    unit = all(
        (c == (1 if (i, j) in ((1, 0), (0, 1)) else 0))
        for (i, j), c in law.items()
        if i == 0 or j == 0
    ) and (1, 0) in law and (0, 1) in law
    commutative = all(law.get((j, i)) == c for (i, j), c in law.items())

    def var(index: int) -> MultiSeries:
        exps = [0, 0, 0]
        exps[index] = 1
        return {tuple(exps): MultiPoly.constant(1, fg.arity)}

    def phi(a: MultiSeries, b: MultiSeries) -> MultiSeries:
        return _substitute_law(law, a, b, 3, order, fg.arity)

    left = phi(phi(var(0), var(1)), var(2))
    right = phi(var(0), phi(var(1), var(2)))
    return {"unit": unit, "commutative": commutative, "associative": left == right}


@lru_cache(maxsize=None)
def universal_bernoulli(N: int) -> UniversalBernoulli:
    """B̂_0..B̂_N; G is needed to order N+1, so the ring is ℚ[c₁..c_N]."""
    if not 0 <= N <= MAX_BERNOULLI:
        raise OrderGuardError(f"universal Bernoulli numbers limited to n <= {MAX_BERNOULLI}, got {N}")
    arity = max(N, 1)
    fg = build_formal_group(max(N + 1, MIN_ORDER), arity)
    G_over_t = fg.G.shift_down(1).truncate(N)
    t_over_G = series_div(one_series(N, G_over_t.ring, arity), G_over_t)
    numbers = tuple(c * factorial(k) for k, c in enumerate(t_over_G.coefficients))
    logging.info(f"Computed universal Bernoulli numbers up to n={N}")
    return UniversalBernoulli(arity, numbers)


def universal_bernoulli_polys(N: int) -> List[Polynomial]:
    """B_n^G(x) = Σ_k C(n, k) B̂_k x^{n−k} for n = 0..N, MultiPoly coefficients."""
    ub = universal_bernoulli(N)
    out = []
    for n in range(N + 1):
        out.append(Polynomial(tuple(comb(n, n - d) * ub.numbers[n - d] for d in range(n + 1))))
    return out


def specialize_polynomial(p: Polynomial, values: Sequence) -> Polynomial:
    return p.map_coefficients(lambda c: c.specialize(values))


def specialized_bernoulli(values: Sequence, N: int) -> List[Fraction]:
    """
    B̂_0..B̂_N at c_i = values[i−1], computed over ℚ after specializing F; no
    order guard beyond the length of ``values``.
    """
    if len(values) < N:
        raise OrderGuardError(f"B̂_{N} needs c_1..c_{N}, {len(values)} values given")
    order = N + 1
    coefficients = [Fraction(0), Fraction(1)] + [
        Fraction(values[i - 1]) / (i + 1) for i in range(1, order)
    ]
    F = TruncatedSeries.rational(coefficients, order)
    G = series_reversion(F)
    t_over_G = series_div(one_series(N), G.shift_down(1).truncate(N))
    return [c * factorial(k) for k, c in enumerate(t_over_G.coefficients)]


def classical_values(count: int) -> List[int]:
    """c_i = (−1)^i, the specialization with F(s) = log(1 + s), G(t) = e^t − 1."""
    return [(-1) ** i for i in range(1, count + 1)]


def specialization_from_exponential(G: TruncatedSeries) -> List[Fraction]:
    """c_1..c_{N−1} with c_i = (i+1)·[s^{i+1}] G⁻¹(s), for a rational G = t + O(t²)."""
    if G.coefficients[1] != 1:
        raise OrderGuardError(f"exponential must start with t, got {G.coefficients[1]}t")
    F = series_reversion(G)
    return [F.coefficients[i + 1] * (i + 1) for i in range(1, G.order)]


def descriptor_exponential(descriptor: AppellDescriptor, order: int) -> TruncatedSeries:
    """G(t) = (e^t − 1)·g(t), so t·e^{xt}/G(t) generates the descriptor's polynomials."""
    expm1 = TruncatedSeries.from_function(
        lambda k: Fraction(1, factorial(k)) if k else Fraction(0), order
    )
    return series_mul(expm1, descriptor.g.truncate(order))


def compose_check(fg: FormalGroupData) -> bool:
    """F(G(t)) = t and G(F(s)) = s exactly."""
    identity = TruncatedSeries.multipoly((0, 1), fg.order, fg.arity)
    return series_compose(fg.F, fg.G) == identity and series_compose(fg.G, fg.F) == identity
