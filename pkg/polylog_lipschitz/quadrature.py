"""
Numerical integration and error-control helpers.

Gauss–Legendre nodes come from numpy; every integrand is called with a numpy
array of (possibly complex) points and must return an array of the same shape.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np

Integrand = Callable[[np.ndarray], np.ndarray]


@lru_cache(maxsize=64)
def gauss_legendre_nodes(order: int) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def line_integral(
    f: Integrand, z0: complex, z1: complex, panels: int = 1, order: int = 20
) -> complex:
    """∫ f(z) dz along the straight segment z0 → z1 (composite Gauss–Legendre)."""
    nodes, weights = gauss_legendre_nodes(order)
    edges = np.linspace(0.0, 1.0, panels + 1)
    half = 0.5 * (edges[1:] - edges[:-1])
    mid = 0.5 * (edges[1:] + edges[:-1])
    s = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    dz = complex(z1) - complex(z0)
    values = np.asarray(f(complex(z0) + dz * s))
    return complex(np.sum(values * w) * dz)


def gauss_integral(f: Integrand, a: float, b: float, order: int = 20) -> complex:
    nodes, weights = gauss_legendre_nodes(order)
    half, mid = 0.5 * (b - a), 0.5 * (b + a)
    return complex(np.sum(np.asarray(f(mid + half * nodes)) * weights) * half)


def adaptive_gauss(
    f: Integrand,
    a: float,
    b: float,
    tol: float = 1e-12,
    order: int = 15,
    max_depth: int = 40,
) -> complex:
    """
    Adaptive composite Gauss–Legendre on [a, b]: an interval is accepted once
    its single-panel value agrees with the sum over its two halves to within
    the tolerance share of that interval.
    """
    total = 0j
    stack = [(a, b, gauss_integral(f, a, b, order), 0)]
    width = b - a
    while stack:
        lo, hi, whole, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        left = gauss_integral(f, lo, mid, order)
        right = gauss_integral(f, mid, hi, order)
        share = tol * (hi - lo) / width
        if abs(left + right - whole) <= share or depth >= max_depth:
            total += left + right
        else:
            stack.append((lo, mid, left, depth + 1))
            stack.append((mid, hi, right, depth + 1))
    return total


def rectangle_contour_integral(
    f: Integrand,
    x_lo: float,
    x_hi: float,
    y_lo: float,
    y_hi: float,
    panels: int = 16,
    order: int = 24,
) -> complex:
    """∮ f(z) dz counterclockwise around the rectangle [x_lo,x_hi]×[y_lo,y_hi]."""
    corners = [
        complex(x_lo, y_lo),
        complex(x_hi, y_lo),
        complex(x_hi, y_hi),
        complex(x_lo, y_hi),
    ]
    return sum(
        line_integral(f, corners[i], corners[(i + 1) % 4], panels, order)
        for i in range(4)
    )


def richardson(values: Sequence[complex], ratio: float = 2.0) -> Tuple[complex, List[List[complex]]]:
    """
    Richardson table for samples at h, h/ratio, h/ratio², ... with error
    expansion in integer powers of h. Row k eliminates h^1..h^k.
    """
    table: List[List[complex]] = [list(values)]
    for level in range(1, len(values)):
        factor = ratio**level
        prev = table[-1]
        table.append(
            [(factor * prev[i + 1] - prev[i]) / (factor - 1) for i in range(len(prev) - 1)]
        )
    return table[-1][0], table


def poly_geometric_tail(start: int, power: float, r: float) -> float:
    """
    Upper bound for Σ_{k >= start} k^power r^k with 0 <= r < 1 and start >= 1.

    For power <= 0 the factor k^power is at most start^power; otherwise the
    ratio of consecutive terms is at most r·(1 + 1/start)^power.
    """
    if not 0 <= r < 1:
        return math.inf
    if r == 0:
        return 0.0
    first = start**power * r**start
    ratio = r if power <= 0 else r * (1.0 + 1.0 / start) ** power
    if ratio >= 1:
        return math.inf
    return first / (1.0 - ratio)


def truncation_for(power: float, r: float, target: float, cap: int = 10_000) -> int:
    """Smallest K (up to cap) with poly_geometric_tail(K + 1, power, r) <= target."""
    k = 1
    while k < cap and poly_geometric_tail(k + 1, power, r) > target:
        k = min(cap, k * 2 if k < 64 else k + 64)
    lo = max(1, k // 2)
    while lo < k:
        mid = (lo + k) // 2
        if poly_geometric_tail(mid + 1, power, r) <= target:
            k = mid
        else:
            lo = mid + 1
    return k
