"""Skeleton distances and the delta-Lipschitz filling test.

All ratios are exact :class:`fractions.Fraction` values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from .complex import AbstractTriangulation, boundary_cycle
from .errors import FillingError


def as_fraction(value) -> Fraction:
    """Exact rational from an int, Fraction, float or ``"p/q"`` string."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise FillingError(f"not a rational: {value!r}") from exc
    return Fraction(value)


def cycle_distance(n: int, x: int, y: int) -> int:
    if not (0 <= x < n and 0 <= y < n):
        raise FillingError(f"vertex out of range for C_{n}: {x}, {y}")
    d = abs(x - y)
    return min(d, n - d)


def skeleton_matrix(K: AbstractTriangulation) -> csr_matrix:
    edges = np.array(K.edges, dtype=np.int64).reshape(-1, 2)
    nv = K.num_vertices
    rows = np.concatenate([edges[:, 0], edges[:, 1]])
    cols = np.concatenate([edges[:, 1], edges[:, 0]])
    data = np.ones(len(rows), dtype=np.int8)
    return csr_matrix((data, (rows, cols)), shape=(nv, nv))


def skeleton_distances(K: AbstractTriangulation, sources: Iterable[int]) -> np.ndarray:
    """Unweighted BFS distances, one row per source; ``np.inf`` if unreachable."""
    src = list(sources)
    if not src:
        return np.zeros((0, K.num_vertices))
    return shortest_path(skeleton_matrix(K), unweighted=True, directed=False, indices=src)


@dataclass(frozen=True)
class LipschitzReport:
    delta: Fraction
    witness: tuple[int, int] | None
    isometric: bool

    def to_dict(self) -> dict:
        return {
            "delta": [self.delta.numerator, self.delta.denominator],
            "witness": None if self.witness is None else list(self.witness),
            "isometric": self.isometric,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LipschitzReport":
        num, den = data["delta"]
        w = data["witness"]
        return cls(Fraction(num, den), None if w is None else (w[0], w[1]), bool(data["isometric"]))


def boundary_distance_table(K: AbstractTriangulation, chunk: int = 64) -> np.ndarray:
    """n x n table of skeleton distances between boundary vertices."""
    n = len(boundary_cycle(K))
    A = skeleton_matrix(K)
    # chunked so the full n x |V| matrix is never held for large meshes
    rows = [
        shortest_path(A, unweighted=True, directed=False, indices=list(range(lo, min(lo + chunk, n))))[:, :n]
        for lo in range(0, n, chunk)
    ]
    return np.vstack(rows)


def lipschitz_constant(K: AbstractTriangulation) -> LipschitzReport:
    """Smallest d_K(x, y) / d_{C_n}(x, y) over non-adjacent boundary pairs.

    The witness is the lexicographically first pair attaining it. For n = 3
    there are no such pairs and the constant is 1.
    """
    n = len(boundary_cycle(K))
    if n == 3:
        return LipschitzReport(Fraction(1), None, True)
    dk = boundary_distance_table(K)
    i, j = np.triu_indices(n, k=2)
    dc = np.minimum(j - i, n - (j - i))
    keep = dc >= 2
    i, j, dc = i[keep], j[keep], dc[keep]
    dkv = dk[i, j]
    if not np.all(np.isfinite(dkv)):
        raise FillingError("boundary vertices disconnected in the skeleton")
    dkv = dkv.astype(np.int64)
    # exact argmin of dk/dc: the float ratio narrows the candidates, then
    # cross-multiplication decides; candidates stay in lexicographic order
    ratio = dkv / dc
    cand = np.nonzero(ratio <= ratio.min() * (1 + 1e-9))[0]
    best = int(cand[0])
    for idx in cand[1:]:
        if dkv[idx] * dc[best] < dkv[best] * dc[idx]:
            best = int(idx)
    delta = Fraction(int(dkv[best]), int(dc[best]))
    return LipschitzReport(delta, (int(i[best]), int(j[best])), delta >= 1)


def is_delta_filling(K: AbstractTriangulation, delta) -> bool:
    d = as_fraction(delta)
    if not (0 < d <= 1):
        raise FillingError(f"delta must lie in (0, 1], got {d}")
    return lipschitz_constant(K).delta >= d
