"""
Congruences of Bernoulli numbers, classical and universal.

"Congruent mod ℤ[c₁, c₂, …]" is checked coefficient-wise: the difference must
have integer coefficients. "In pℤ_p[c₁, …]" means every rational coefficient
has p-adic valuation at least 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Union

from sympy import isprime, multiplicity, primefactors, primerange

from .appell import AppellDescriptor, bernoulli_numbers
from .commons import OrderGuardError, custom_encoder, format_rational
from .formal_group import (
    MAX_BERNOULLI,
    UniversalBernoulli,
    descriptor_exponential,
    specialization_from_exponential,
    specialized_bernoulli,
    universal_bernoulli,
)
from .multipoly import MultiPoly

US1 = "US1"
US2 = "US2"
UK = "UK"
CVS = "CvS"

MAX_CLASSICAL = 30


@dataclass(frozen=True)
class CongruenceVerdict:
    congruence: str
    n: int
    p: Optional[int]
    holds: bool
    applicable: bool = True
    witness: Union[MultiPoly, Fraction, None] = None
    metadata: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.holds or not self.applicable

    def sort_key(self):
        return (self.congruence, self.n, self.p or 0)

    def to_json(self) -> dict:
        return {
            "congruence": self.congruence,
            "n": self.n,
            "p": self.p,
            "holds": self.holds,
            "applicable": self.applicable,
            "witness": self.witness,
            "metadata": dict(sorted(self.metadata.items())),
        }

    def to_row(self) -> dict:
        if isinstance(self.witness, MultiPoly):
            witness = str(self.witness)
        elif self.witness is None:
            witness = ""
        else:
            witness = format_rational(self.witness)
        return {
            "identity": self.congruence,
            "n": self.n,
            "p": self.p if self.p is not None else "",
            "holds": self.holds,
            "applicable": self.applicable,
            "passed": self.passed,
            "witness": witness,
            "metadata": json.dumps(self.metadata, sort_keys=True, default=custom_encoder),
        }


def p_adic_valuation(value: Fraction, p: int) -> float:
    """v_p(a/b) = v_p(a) − v_p(b); +inf for zero."""
    value = Fraction(value)
    if value == 0:
        return math.inf
    return int(multiplicity(p, abs(value.numerator))) - int(multiplicity(p, value.denominator))


def min_valuation(poly: MultiPoly, p: int) -> float:
    return min((p_adic_valuation(c, p) for c in poly.coefficients()), default=math.inf)


def correction_primes(n: int) -> List[int]:
    """Primes p with (p − 1) | n."""
    return [p for p in primerange(2, n + 2) if n % (p - 1) == 0]


def _bernoulli_table(n: int, ub: Optional[UniversalBernoulli]) -> UniversalBernoulli:
    if ub is not None and len(ub.numbers) > n:
        return ub
    return universal_bernoulli(n)


def von_staudt_check(n: int, ub: Optional[UniversalBernoulli] = None) -> CongruenceVerdict:
    """
    n even: B̂_n + Σ_{(p−1)|n} c_{p−1}^{n/(p−1)}/p ∈ ℤ[c];
    n odd:  B̂_n − (c₁ⁿ + c₁^{n−3}c₃)/2 ∈ ℤ[c].
    """
    if not 2 <= n <= MAX_BERNOULLI:
        raise OrderGuardError(f"n must be in 2..{MAX_BERNOULLI}, got {n}")
    table = _bernoulli_table(n, ub)
    arity = table.arity
    b_n = table.number(n)
    c = lambda i: MultiPoly.variable(i, arity)
    if n % 2 == 0:
        primes = correction_primes(n)
        witness = b_n
        for p in primes:
            witness = witness + c(p - 1) ** (n // (p - 1)) * Fraction(1, p)
        return CongruenceVerdict(US1, n, None, witness.is_integral(), True, witness, {"primes": primes})
    if n < 3:
        return CongruenceVerdict(US2, n, None, False, False, None, {"reason": "n odd needs n >= 3"})
    witness = b_n - (c(1) ** n + c(1) ** (n - 3) * c(3)) * Fraction(1, 2)
    return CongruenceVerdict(US2, n, None, witness.is_integral(), True, witness)


def kummer_applicable(n: int, p: int, limit: int = MAX_BERNOULLI) -> Optional[str]:
    """None when (n, p) is admissible, otherwise the reason it is not."""
    if not isprime(p):
        return f"{p} is not prime"
    if n < 1:
        return f"n={n} must be positive"
    if n % (p - 1) in (0, 1):
        return f"n={n} is {n % (p - 1)} mod {p - 1}"
    if n + p - 1 > limit:
        return f"n+p-1={n + p - 1} exceeds {limit}"
    return None


def kummer_check(n: int, p: int, ub: Optional[UniversalBernoulli] = None) -> CongruenceVerdict:
    """B̂_{n+p−1}/(n+p−1) − (B̂_n/n)·c_{p−1} ∈ pℤ_p[c]."""
    reason = kummer_applicable(n, p)
    if reason is not None:
        return CongruenceVerdict(UK, n, p, False, False, None, {"reason": reason})
    table = _bernoulli_table(n + p - 1, ub)
    c = MultiPoly.variable(p - 1, table.arity)
    witness = table.number(n + p - 1) * Fraction(1, n + p - 1) - table.number(n) * Fraction(1, n) * c
    valuation = min_valuation(witness, p)
    return CongruenceVerdict(
        UK,
        n,
        p,
        valuation >= 1,
        True,
        witness,
        {"min_valuation": valuation if math.isfinite(valuation) else "inf"},
    )


def classical_cvs_check(n: int) -> CongruenceVerdict:
    """
    B_n + Σ_{(p−1)|n} 1/p ∈ ℤ. The metadata also records the sum over p | n,
    which is not integral in general (n = 4 gives 7/15).
    """
    if not 1 <= n <= MAX_CLASSICAL:
        raise OrderGuardError(f"n must be in 1..{MAX_CLASSICAL}, got {n}")
    b_n = bernoulli_numbers(n)[n]
    if n % 2:
        return CongruenceVerdict(
            CVS, n, None, False, False, b_n, {"reason": f"n odd, B_{n} = {format_rational(b_n)}"}
        )
    primes = correction_primes(n)
    witness = b_n + sum((Fraction(1, p) for p in primes), Fraction(0))
    printed = b_n + sum((Fraction(1, p) for p in primerange(2, n + 1) if n % p == 0), Fraction(0))
    metadata = {
        "primes": primes,
        "condition": "(p-1) | n",
        "p_divides_n_value": printed,
        "p_divides_n_integral": printed.denominator == 1,
    }
    return CongruenceVerdict(CVS, n, None, witness.denominator == 1, True, witness, metadata)


# specializations c_i ↦ values read off a descriptor's exponential


def specialized_values(descriptor: AppellDescriptor, count: int) -> List[Fraction]:
    """c_1..c_count for G(t) = (e^t − 1)·g(t)."""
    if descriptor.g.order < count + 1:
        raise OrderGuardError(
            f"descriptor '{descriptor.label}': c_{count} needs g to order {count + 1}, "
            f"has {descriptor.g.order}"
        )
    return specialization_from_exponential(descriptor_exponential(descriptor, count + 1))


def denominator_primes(values) -> List[int]:
    primes = set()
    for value in values:
        primes.update(int(p) for p in primefactors(Fraction(value).denominator))
    return sorted(primes)


def specialized_congruence_check(
    descriptor: AppellDescriptor, n: int, p: Optional[int] = None
) -> CongruenceVerdict:
    """
    The universal congruences evaluated at the descriptor's c-values, where
    A_n = n!·[tⁿ] t/G(t). The values are rational, so a congruence can only
    hold at primes dividing none of their denominators: those primes are
    listed as ``excluded_primes``.

    p None: the von Staudt form for n (even or odd); the verdict holds when
    every prime in the witness denominator is excluded.
    p given: Kummer at (n, p); inapplicable when p itself is excluded.
    """
    label = descriptor.label
    if p is not None:
        return _specialized_kummer(descriptor, n, p)
    if not 2 <= n <= MAX_CLASSICAL:
        raise OrderGuardError(f"n must be in 2..{MAX_CLASSICAL}, got {n}")
    values = specialized_values(descriptor, n)
    excluded = denominator_primes(values)
    a_n = specialized_bernoulli(values, n)[n]
    if n % 2 == 0:
        name = US1
        primes = correction_primes(n)
        witness = a_n + sum(
            (Fraction(values[q - 2]) ** (n // (q - 1)) / q for q in primes), Fraction(0)
        )
    else:
        if n < 3:
            return CongruenceVerdict(
                f"{US2}[{label}]", n, None, False, False, None, {"reason": "n odd needs n >= 3"}
            )
        name = US2
        c1, c3 = Fraction(values[0]), Fraction(values[2])
        witness = a_n - (c1**n + c1 ** (n - 3) * c3) / 2
    stray = [q for q in denominator_primes([witness]) if q not in excluded]
    metadata = {"descriptor": label, "excluded_primes": excluded, "stray_primes": stray}
    return CongruenceVerdict(f"{name}[{label}]", n, None, not stray, True, witness, metadata)


def _specialized_kummer(descriptor: AppellDescriptor, n: int, p: int) -> CongruenceVerdict:
    name = f"{UK}[{descriptor.label}]"
    metadata: Dict[str, object] = {"descriptor": descriptor.label}
    reason = kummer_applicable(n, p, limit=MAX_CLASSICAL)
    top = n + p - 1
    values: List[Fraction] = []
    if reason is None:
        values = specialized_values(descriptor, top)
        metadata["excluded_primes"] = denominator_primes(values)
        if p in metadata["excluded_primes"]:
            reason = f"{p} divides a denominator among c_1..c_{top}"
    if reason is not None:
        metadata["reason"] = reason
        return CongruenceVerdict(name, n, p, False, False, None, metadata)
    numbers = specialized_bernoulli(values, top)
    witness = numbers[top] / top - numbers[n] / n * Fraction(values[p - 2])
    valuation = p_adic_valuation(witness, p)
    metadata["min_valuation"] = valuation if math.isfinite(valuation) else "inf"
    return CongruenceVerdict(name, n, p, valuation >= 1, True, witness, metadata)


def congruence_suite(
    max_n: int = MAX_BERNOULLI,
    primes=(5, 7, 11),
    descriptor: Optional[AppellDescriptor] = None,
) -> List[CongruenceVerdict]:
    """
    US1/US2 for 2 <= n <= max_n, UK over admissible (n, p), CvS for even
    n <= 30; with a descriptor, the same congruences at its c-values.
    """
    ub = universal_bernoulli(max_n)
    verdicts = [von_staudt_check(n, ub) for n in range(2, max_n + 1)]
    for p in primes:
        for n in range(2, max_n + 1):
            if n + p - 1 <= max_n:
                verdicts.append(kummer_check(n, p, ub))
    verdicts.extend(classical_cvs_check(n) for n in range(2, MAX_CLASSICAL + 1, 2))
    if descriptor is not None:
        verdicts.extend(specialized_congruence_check(descriptor, n) for n in range(2, max_n + 1))
        for p in primes:
            for n in range(2, max_n - p + 2):
                verdicts.append(specialized_congruence_check(descriptor, n, p))
    return sorted(verdicts, key=lambda v: v.sort_key())
