"""Closed-form lower bounds for Lipschitz fillings of cycles.

Discrete bounds are exact rationals; the continuous area bound is a float
(accurate to about 1e-12 relative). Nothing here rounds silently: each
discrete bound returns both the raw value and its ceiling.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import FillingError
from .metrics import as_fraction

DSTAR_LOWER = Fraction(1, 8)
DSTAR_UPPER = 1.0 / (math.pi * math.sqrt(3.0))
DSTAR_EXPLICIT = Fraction(3, 16)


class Bound(NamedTuple):
    value: Fraction
    ceiling: int


def _check_delta(delta) -> Fraction:
    d = as_fraction(delta)
    if not (0 < d <= 1):
        raise FillingError(f"delta must lie in (0, 1], got {d}")
    return d


def _check_n(n: int) -> int:
    if n < 3:
        raise FillingError(f"cycle length must be at least 3, got {n}")
    return n


def _ceil(q: Fraction) -> int:
    return -((-q.numerator) // q.denominator)


def vertex_lower_bound(n: int, delta=1) -> Bound:
    """delta^3 (n-1)^2 / 8 + (n-1)/2 vertices in any delta-Lipschitz filling of C_n."""
    n = _check_n(n)
    d = _check_delta(delta)
    v = d**3 * (n - 1) ** 2 / 8 + Fraction(n - 1, 2)
    return Bound(v, _ceil(v))


def triangle_lower_bound(n: int, delta=1, chi: int = 2) -> Bound:
    """delta^3 (n-1)^2 / 4 + 1 - 2 chi triangles, chi being the Euler
    characteristic after capping the boundary."""
    n = _check_n(n)
    d = _check_delta(delta)
    v = d**3 * (n - 1) ** 2 / 4 + 1 - 2 * int(chi)
    return Bound(v, _ceil(v))


def path_sum_bound(k: int) -> Fraction:
    if k < 0:
        raise FillingError("k must be nonnegative")
    return Fraction(k * (k + 2), 2)


def continuous_area_bound(delta, ell: float) -> float:
    """(sqrt 3 / 16) delta^3 ell^2: area lower bound for a PL surface that
    delta-Lipschitz fills a circle of circumference ell."""
    d = float(_check_delta(delta))
    if not ell > 0:
        raise FillingError(f"circumference must be positive, got {ell}")
    return math.sqrt(3.0) / 16.0 * d**3 * float(ell) ** 2


def dstar_ratio(num_vertices: int, n: int) -> float:
    _check_n(n)
    return num_vertices / n**2


def menger_path_floor(n: int, delta=1) -> Fraction:
    """delta * floor(n/2) - 1: the number of disjoint L-R paths guaranteed
    for antipodal x, y in a delta-Lipschitz filling."""
    return _check_delta(delta) * (_check_n(n) // 2) - 1


def path_sum_violations(n: int, k_max: int = 4) -> list[tuple]:
    """Exhaustively look for selections breaking the path-sum inequality.

    Over every non-adjacent pair x < y of C_n, every k <= k_max, every
    k-set of distinct vertices in L and every ordered k-tuple of distinct
    vertices in R, checks sum d(l_i, r_i) >= k(k+2)/2. Returns the
    violating selections (expected: none).
    """
    _check_n(n)
    bad = []
    for x in range(n):
        for y in range(x + 2, n):
            if (y - x) % n in (1, n - 1):
                continue
            left = np.arange(x + 1, y)
            right = np.array([v % n for v in range(y + 1, x + n)])
            dist = np.abs(left[:, None] - right[None, :])
            dist = np.minimum(dist, n - dist)
            for k in range(1, min(k_max, len(left), len(right)) + 1):
                rows = np.array(list(itertools.combinations(range(len(left)), k)), dtype=np.int64)
                cols = np.array(list(itertools.permutations(range(len(right)), k)), dtype=np.int64)
                sums = dist[rows[:, None, :], cols[None, :, :]].sum(axis=2)
                # integer comparison: 2 * sum >= k(k+2)
                low = np.argwhere(2 * sums < k * (k + 2))
                for a, b in low:
                    bad.append((x, y, tuple(left[rows[a]]), tuple(right[cols[b]])))
    return bad
