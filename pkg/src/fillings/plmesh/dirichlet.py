"""Common-step subdivision of all edges via simultaneous Diophantine
approximation."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import MeshError
from .surface import PLSurface


@dataclass(frozen=True)
class EdgePlan:
    count: int
    last: float
    deviation: float


@dataclass(frozen=True)
class SubdivisionPlan:
    """Every edge e is cut into ``count`` intervals: ``count - 1`` of length
    exactly ``epsilon`` and one odd interval of length ``last`` = epsilon +
    (length - count * epsilon). The odd interval touches the edge's start
    vertex (the smaller vertex id), so interval 0 is the odd one."""

    epsilon: float
    k: int
    q: int
    L: int
    m: int
    per_edge: tuple[EdgePlan, ...]
    deviation_bound: float

    @property
    def max_deviation(self) -> float:
        return max((p.deviation for p in self.per_edge), default=0.0)

    def interval_length(self, edge: int, i: int) -> float:
        p = self.per_edge[edge]
        return p.last if i == 0 else self.epsilon

    def positions(self, edge: int) -> list[float]:
        """Distances of the subdivision points from the edge's start,
        endpoints included."""
        p = self.per_edge[edge]
        return [0.0] + [p.last + i * self.epsilon for i in range(p.count)]

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "k": self.k,
            "q": self.q,
            "L": self.L,
            "m": self.m,
            "deviation_bound": self.deviation_bound,
            "max_deviation": self.max_deviation,
            "counts": [p.count for p in self.per_edge],
        }


def distinct_lengths(lengths, rtol: float = 1e-9) -> list[float]:
    vals = sorted(lengths)
    out: list[float] = []
    for v in vals:
        if not out or abs(v - out[-1]) > rtol * max(v, out[-1]):
            out.append(v)
    return out


def best_denominator(alphas, k: int) -> tuple[int, float]:
    """q in [1, k] minimising max_i ||q * alpha_i|| (distance to the nearest
    integer); the smallest such q on ties."""
    a = np.asarray(alphas, dtype=float)
    best_q, best_err = 1, math.inf
    chunk = 1 << 16
    for lo in range(1, k + 1, chunk):
        q = np.arange(lo, min(lo + chunk, k + 1), dtype=float)
        prod = q[:, None] * a[None, :]
        err = np.abs(prod - np.rint(prod)).max(axis=1)
        i = int(np.argmin(err))
        if err[i] < best_err - 1e-15:
            best_q, best_err = int(q[i]), float(err[i])
    return best_q, best_err


def dirichlet_plan(M: PLSurface, k: int) -> SubdivisionPlan:
    if k < 2:
        raise MeshError("dirichlet_plan", f"k must be at least 2, got {k}")
    lengths = [e.length for e in M.edges]
    alphas = distinct_lengths(lengths)
    m = len(alphas)
    q, _ = best_denominator(alphas, k)
    root = k ** (1.0 / m)
    L = max(1, math.ceil(root / math.log(k)))
    eps = 1.0 / (q * L)
    per_edge = []
    for e in M.edges:
        p = round(q * e.length)
        if p < 1:
            raise MeshError("dirichlet_plan", f"edge {e.index} (length {e.length}) rounds to zero at k={k}; increase k")
        s = L * p
        per_edge.append(EdgePlan(s, e.length - (s - 1) * eps, abs(e.length - s * eps)))
    return SubdivisionPlan(eps, k, q, L, m, tuple(per_edge), 1.0 / (q * root))
