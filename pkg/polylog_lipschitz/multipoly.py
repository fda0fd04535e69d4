"""
Sparse multivariate polynomials in c_1..c_m over the rationals.

Terms live in a dict from exponent vectors (tuples of fixed arity m) to nonzero
Fractions. Plain ints and Fractions mix freely with MultiPoly in arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from .commons import RingMismatchError, format_rational, parse_rational

Exponents = Tuple[int, ...]


def grlex_key(exponents: Exponents):
    # ascending total degree, then lexicographically descending exponent vector
    return (sum(exponents), tuple(-e for e in exponents))


class MultiPoly:
    __slots__ = ("arity", "_terms")

    def __init__(self, arity: int, terms: Mapping[Exponents, object] = ()):
        if arity < 0:
            raise ValueError(f"arity must be >= 0, got {arity}")
        self.arity = arity
        clean: Dict[Exponents, Fraction] = {}
        for exps, coeff in dict(terms).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != arity:
                raise RingMismatchError(
                    f"exponent vector {exps} does not have arity {arity}"
                )
            coeff = Fraction(coeff)
            if coeff != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + coeff
                if clean[exps] == 0:
                    del clean[exps]
        self._terms = clean

    @classmethod
    def _raw(cls, arity: int, terms: Dict[Exponents, Fraction]) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.arity = arity
        obj._terms = {e: c for e, c in terms.items() if c != 0}
        return obj

    @classmethod
    def constant(cls, value, arity: int) -> "MultiPoly":
        return cls(arity, {(0,) * arity: Fraction(value)})

    @classmethod
    def variable(cls, index: int, arity: int) -> "MultiPoly":
        """c_index, 1-based."""
        if not 1 <= index <= arity:
            raise RingMismatchError(f"c_{index} is outside c_1..c_{arity}")
        exps = [0] * arity
        exps[index - 1] = 1
        return cls(arity, {tuple(exps): Fraction(1)})

    @classmethod
    def from_json(cls, data: Sequence[Mapping], arity: int) -> "MultiPoly":
        return cls(
            arity,
            {tuple(item["exponents"]): parse_rational(item["coeff"]) for item in data},
        )

    @property
    def terms(self) -> Dict[Exponents, Fraction]:
        return dict(self._terms)

    def sorted_terms(self) -> List[Tuple[Exponents, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: grlex_key(item[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(exps) for exps in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.arity, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(exps) for exps in self._terms), default=-1)

    def weighted_degree(self) -> int:
        """Degree with c_i of weight i (the grading of the universal ring)."""
        return max(
            (sum((i + 1) * e for i, e in enumerate(exps)) for exps in self._terms),
            default=-1,
        )

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self._terms.values())

    def coefficients(self) -> List[Fraction]:
        return [c for _, c in self.sorted_terms()]

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise RingMismatchError(
                    f"arity mismatch: {self.arity} vs {other.arity}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.constant(other, self.arity)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        terms = dict(self._terms)
        for exps, c in other._terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + c
        return MultiPoly._raw(self.arity, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.arity, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return MultiPoly(self.arity)
            return MultiPoly._raw(self.arity, {e: c * other for e, c in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: Dict[Exponents, Fraction] = {}
        for ea, ca in self._terms.items():
            for eb, cb in other._terms.items():
                exps = tuple(x + y for x, y in zip(ea, eb))
                out[exps] = out.get(exps, Fraction(0)) + ca * cb
        return MultiPoly._raw(self.arity, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, MultiPoly) and other.is_constant() and not other.is_zero():
            return self * (Fraction(1) / other.constant_term())
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = MultiPoly.constant(1, self.arity)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self._terms
            return self._terms == {(0,) * self.arity: Fraction(other)}
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.arity, frozenset(self._terms.items())))

    def map_coefficients(self, fn) -> "MultiPoly":
        return MultiPoly(self.arity, {e: fn(c) for e, c in self._terms.items()})

    def specialize(self, values: Sequence) -> Fraction:
        """Substitute c_i = values[i-1]; exact for rational values."""
        if len(values) < self.arity:
            needed = [e for e in self._terms if any(e[len(values):])]
            if needed:
                raise RingMismatchError(
                    f"{len(values)} values given for {self.arity} variables"
                )
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for value, e in zip(values, exps):
                if e:
                    term = term * Fraction(value) ** e
            total += term
        return total

    def with_arity(self, arity: int) -> "MultiPoly":
        """Embed into (or project onto, when unused) a ring with another arity."""
        if arity >= self.arity:
            pad = (0,) * (arity - self.arity)
            return MultiPoly(arity, {e + pad: c for e, c in self._terms.items()})
        for exps in self._terms:
            if any(exps[arity:]):
                raise RingMismatchError(f"polynomial uses variables beyond c_{arity}")
        return MultiPoly(arity, {e[:arity]: c for e, c in self._terms.items()})

    def to_json(self) -> List[dict]:
        return [
            {"exponents": list(exps), "coeff": format_rational(c)}
            for exps, c in self.sorted_terms()
        ]

    def __repr__(self) -> str:
        return f"MultiPoly({self.arity}, {self})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        pieces = []
        for exps, c in self.sorted_terms():
            mono = "*".join(
                f"c{i + 1}" if e == 1 else f"c{i + 1}^{e}"
                for i, e in enumerate(exps)
                if e
            )
            if not mono:
                pieces.append(format_rational(c))
            elif c == 1:
                pieces.append(mono)
            elif c == -1:
                pieces.append(f"-{mono}")
            else:
                pieces.append(f"{format_rational(c)}*{mono}")
        return " + ".join(pieces).replace("+ -", "- ")


def monomial(exponents: Iterable[int], coeff=1) -> MultiPoly:
    exps = tuple(exponents)
    return MultiPoly(len(exps), {exps: Fraction(coeff)})
