"""Partial barycentric subdivision of planar triangulations."""

from __future__ import annotations

import math

import numpy as np

from ..errors import MeshError


def _ekey(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


def partial_barycentric(points, triangles, protected=(), refine=None):
    """Barycentric subdivision that does not bisect protected edges.

    Each refined triangle gets its centroid and the midpoints of its
    unprotected edges, so a triangle with p protected edges becomes 6 - p
    triangles. ``refine`` restricts the subdivision to the given triangle
    indices (default: all); an unprotected edge of a refined triangle must
    not be shared with an unrefined one. Returns (points, triangles) with
    the old points kept at their indices and orientation preserved.
    """
    pts = [tuple(p) for p in np.asarray(points, dtype=float)]
    tris = [tuple(int(v) for v in t) for t in triangles]
    prot = {_ekey(*e) for e in protected}
    chosen = set(range(len(tris))) if refine is None else set(refine)

    owners: dict[tuple[int, int], list[int]] = {}
    for i, t in enumerate(tris):
        for s in range(3):
            owners.setdefault(_ekey(t[s], t[(s + 1) % 3]), []).append(i)
    for e, ts in sorted(owners.items()):
        if e in prot:
            continue
        inside = [i in chosen for i in ts]
        if any(inside) and not all(inside):
            raise MeshError(
                "partial_barycentric", f"unprotected edge {e} is shared by refined and unrefined triangles", e
            )

    mid: dict[tuple[int, int], int] = {}
    out = []
    for i, t in enumerate(tris):
        if i not in chosen:
            out.append(t)
            continue
        g = len(pts)
        pts.append(tuple(sum(pts[v][c] for v in t) / 3.0 for c in range(2)))
        for s in range(3):
            u, v = t[s], t[(s + 1) % 3]
            e = _ekey(u, v)
            if e in prot:
                out.append((u, v, g))
                continue
            if e not in mid:
                mid[e] = len(pts)
                pts.append(((pts[u][0] + pts[v][0]) / 2.0, (pts[u][1] + pts[v][1]) / 2.0))
            w = mid[e]
            out.append((u, w, g))
            out.append((w, v, g))
    return np.array(pts).reshape(-1, 2), out


def edge_lengths(points: np.ndarray, triangles) -> dict[tuple[int, int], float]:
    out = {}
    for t in triangles:
        for s in range(3):
            e = _ekey(t[s], t[(s + 1) % 3])
            if e not in out:
                out[e] = float(math.dist(points[e[0]], points[e[1]]))
    return out


def refine_until(points, triangles, protected, target: float, max_rounds: int = 64):
    """Repeat partial barycentric subdivision until every unprotected edge
    is at most ``target`` long. In each round the protected set is
    ``protected`` plus every edge already short enough, and only triangles
    with a long unprotected edge are subdivided. Returns (points, triangles,
    rounds)."""
    pts = np.asarray(points, dtype=float)
    tris = [tuple(t) for t in triangles]
    base = {_ekey(*e) for e in protected}
    for rounds in range(max_rounds + 1):
        lengths = edge_lengths(pts, tris)
        long = {e for e, d in lengths.items() if d > target and e not in base}
        if not long:
            return pts, tris, rounds
        if rounds == max_rounds:
            break
        refine = [i for i, t in enumerate(tris) if any(_ekey(t[s], t[(s + 1) % 3]) in long for s in range(3))]
        prot = set(lengths) - long
        pts, tris = partial_barycentric(pts, tris, prot, refine)
    raise MeshError("partial_barycentric", f"edges still longer than {target} after {max_rounds} rounds")
