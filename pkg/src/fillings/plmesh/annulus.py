"""Triangulating the region between a subdivided triangle boundary and the
boundary of its lattice patch."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import MeshError

TOL = 1e-12


class TieError(MeshError):
    """Two candidates are equally close; the caller should move the lattice."""


class CrossingError(MeshError):
    """Two segments of the matching cross; ``detail`` holds the pair."""


@dataclass
class AnnulusResult:
    """Triangles index the stacked point array: the m points of the outer
    cycle first, then the p points of the inner cycle."""

    triangles: list[tuple[int, int, int]]
    method: str
    quads: int = 0
    max_edge: float = 0.0
    diagonals: list[tuple[float, float]] = field(default_factory=list)


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _nearest(d: np.ndarray, what: str) -> np.ndarray:
    """Column of the smallest finite entry in each row of ``d``."""
    order = np.argsort(d, axis=1, kind="stable")
    best = order[:, 0]
    rows = np.arange(len(d))
    if not np.isfinite(d[rows, best]).all():
        i = int(np.nonzero(~np.isfinite(d[rows, best]))[0][0])
        raise MeshError("annulus_triangulate", f"{what} point {i} sees no partner", (i,))
    if d.shape[1] > 1:
        gap = d[rows, order[:, 1]] - d[rows, best]
        tied = np.nonzero(gap <= TOL)[0]
        if len(tied):
            i = int(tied[0])
            raise TieError("annulus_triangulate", f"{what} point {i} has two nearest neighbours", (i, int(best[i]), int(order[i, 1])))
    return best


def _outward(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """mask[j, i]: the segment from inner point j to outer point i leaves
    the patch through its exterior angle at j."""
    prev = np.roll(inner, 1, axis=0) - inner
    nxt = np.roll(inner, -1, axis=0) - inner
    a_prev = np.arctan2(prev[:, 1], prev[:, 0])
    a_next = np.arctan2(nxt[:, 1], nxt[:, 0])
    interior = np.mod(a_prev - a_next, 2 * np.pi)
    dirs = outer[None, :, :] - inner[:, None, :]
    ang = np.arctan2(dirs[..., 1], dirs[..., 0])
    rel = np.mod(ang - a_next[:, None], 2 * np.pi)
    return ~((rel > 1e-12) & (rel < interior[:, None] - 1e-12))


def crossing_pairs(pts: np.ndarray, segs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    """Pairs of segments that meet anywhere other than a shared endpoint,
    including collinear overlaps. Brute force over all pairs."""
    if len(segs) < 2:
        return []
    s = np.array(segs)
    a, b = pts[s[:, 0]], pts[s[:, 1]]
    i, j = np.triu_indices(len(segs), 1)
    shared = (s[i, 0] == s[j, 0]) | (s[i, 0] == s[j, 1]) | (s[i, 1] == s[j, 0]) | (s[i, 1] == s[j, 1])

    def orient(p, q, r):
        return (q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1]) - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0])

    p1, p2, q1, q2 = a[i], b[i], a[j], b[j]
    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    proper = (d1 * d2 < -TOL * TOL) & (d3 * d4 < -TOL * TOL)
    hits = proper & ~shared

    # touching or collinear contact without a shared endpoint
    def on_seg(p, q, r, d):
        lo = np.minimum(p, q) - TOL
        hi = np.maximum(p, q) + TOL
        return (np.abs(d) <= TOL) & (r >= lo).all(axis=-1) & (r <= hi).all(axis=-1)

    touch = on_seg(q1, q2, p1, d1) | on_seg(q1, q2, p2, d2) | on_seg(p1, p2, q1, d3) | on_seg(p1, p2, q2, d4)
    hits |= touch & ~shared
    # segments sharing one endpoint may still overlap collinearly
    coll = shared & (np.abs(d1) <= TOL) & (np.abs(d2) <= TOL)
    if coll.any():
        for k in np.nonzero(coll)[0]:
            u, v = segs[i[k]], segs[j[k]]
            c = (set(u) & set(v)).pop()
            o1 = pts[u[0] if u[1] == c else u[1]] - pts[c]
            o2 = pts[v[0] if v[1] == c else v[1]] - pts[c]
            if float(o1 @ o2) > 0 and set(u) != set(v):
                hits[k] = True
    return [(int(i[k]), int(j[k])) for k in np.nonzero(hits)[0]]


def ear_clip(pts: np.ndarray, cycle: list[int]) -> list[tuple[int, int, int]]:
    """Triangulate a simple CCW polygon (collinear vertices allowed) without
    degenerate triangles. Among valid ears the one with the shortest new
    diagonal is cut first."""
    poly = list(cycle)
    out: list[tuple[int, int, int]] = []
    while len(poly) > 3:
        best = None
        P = pts[poly]
        k = len(poly)
        for idx in range(k):
            a, b, c = poly[idx - 1], poly[idx], poly[(idx + 1) % k]
            pa, pb, pc = pts[a], pts[b], pts[c]
            if _cross(pa, pb, pc) <= TOL:
                continue
            others = np.array([v not in (a, b, c) for v in poly])
            Q = P[others]
            if len(Q):
                w1 = (pb[0] - pa[0]) * (Q[:, 1] - pa[1]) - (pb[1] - pa[1]) * (Q[:, 0] - pa[0])
                w2 = (pc[0] - pb[0]) * (Q[:, 1] - pb[1]) - (pc[1] - pb[1]) * (Q[:, 0] - pb[0])
                w3 = (pa[0] - pc[0]) * (Q[:, 1] - pc[1]) - (pa[1] - pc[1]) * (Q[:, 0] - pc[0])
                if ((w1 >= -TOL) & (w2 >= -TOL) & (w3 >= -TOL)).any():
                    continue
            diag = float(np.linalg.norm(pa - pc))
            key = (diag, min(a, c), b)
            if best is None or key < best[0]:
                best = (key, idx)
        if best is None:
            raise MeshError("annulus_triangulate", "polygon has no valid ear", tuple(poly))
        idx = best[1]
        out.append((poly[idx - 1], poly[idx], poly[(idx + 1) % len(poly)]))
        del poly[idx]
    a, b, c = poly
    if _cross(pts[a], pts[b], pts[c]) <= TOL:
        raise MeshError("annulus_triangulate", "degenerate final ear", tuple(poly))
    out.append((a, b, c))
    return out


def _faces(pts: np.ndarray, edges: set[tuple[int, int]]) -> list[list[int]]:
    """Faces of a plane straight-line graph, each traversed with the face on
    its left (bounded faces come out CCW)."""
    nbrs: dict[int, list[int]] = {}
    for u, v in edges:
        nbrs.setdefault(u, []).append(v)
        nbrs.setdefault(v, []).append(u)
    order = {}
    for v, ws in nbrs.items():
        ang = [math.atan2(pts[w][1] - pts[v][1], pts[w][0] - pts[v][0]) for w in ws]
        ordered = [w for _, w in sorted(zip(ang, ws))]
        order[v] = {w: i for i, w in enumerate(ordered)}, ordered
    seen: set[tuple[int, int]] = set()
    faces = []
    for u, v in sorted(edges | {(b, a) for a, b in edges}):
        if (u, v) in seen:
            continue
        face = []
        a, b = u, v
        while (a, b) not in seen:
            seen.add((a, b))
            face.append(a)
            pos, ordered = order[b]
            # next neighbour clockwise from a around b
            c = ordered[(pos[a] - 1) % len(ordered)]
            a, b = b, c
        faces.append(face)
    return faces


def _split_quad(pts, quad, out, stats) -> None:
    a, b, c, d = quad
    options = []
    for (x, y), tris in (((a, c), ((a, b, c), (a, c, d))), ((b, d), ((a, b, d), (b, c, d)))):
        ok = all(_cross(pts[t[0]], pts[t[1]], pts[t[2]]) > TOL for t in tris)
        options.append((not ok, float(np.linalg.norm(pts[x] - pts[y])), min(x, y), tris, (x, y)))
    options.sort(key=lambda o: o[:3])
    bad, length, _, tris, (x, y) = options[0]
    if bad:
        raise MeshError("annulus_triangulate", "quadrilateral admits no valid diagonal", tuple(quad))
    sides = [float(np.linalg.norm(pts[quad[i]] - pts[quad[(i + 1) % 4]])) for i in range(4)]
    stats.append((length, min(sides[i] + sides[(i + 1) % 4] for i in range(4))))
    out.extend(tris)


def _max_edge(pts, tris) -> float:
    if not tris:
        return 0.0
    t = np.array(tris)
    e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    return float(np.linalg.norm(pts[e[:, 0]] - pts[e[:, 1]], axis=1).max())


def _check_cover(pts, tris, target_area: float, method: str) -> None:
    areas = [_cross(pts[a], pts[b], pts[c]) / 2 for a, b, c in tris]
    if min(areas, default=1.0) <= 0:
        raise MeshError("annulus_triangulate", f"{method} produced a non-positive triangle")
    total = math.fsum(areas)
    if abs(total - target_area) > 1e-9 * max(1.0, abs(target_area)):
        raise MeshError("annulus_triangulate", f"{method} covers area {total}, expected {target_area}")


def matching_triangulation(outer: np.ndarray, inner: np.ndarray) -> AnnulusResult:
    m, p = len(outer), len(inner)
    pts = np.vstack([outer, inner])
    dist = np.linalg.norm(inner[:, None, :] - outer[None, :, :], axis=2)
    dist = np.where(_outward(outer, inner), dist, np.inf)
    near_t = _nearest(dist, "inner")
    near_p = _nearest(dist.T, "outer")
    match = {(int(near_t[j]), m + j) for j in range(p)} | {(i, m + int(near_p[i])) for i in range(m)}
    ring = [(i, (i + 1) % m) for i in range(m)] + [(m + j, m + (j + 1) % p) for j in range(p)]
    segs = sorted(match) + ring
    bad = crossing_pairs(pts, segs)
    if bad:
        i, j = bad[0]
        raise CrossingError("annulus_triangulate", f"segments {segs[i]} and {segs[j]} cross", (segs[i], segs[j]))
    edges = set(match) | set(ring)
    tris: list[tuple[int, int, int]] = []
    diag: list[tuple[float, float]] = []
    quads = 0
    for face in _faces(pts, edges):
        if all(v >= m for v in face):
            continue  # the patch itself
        if signed_area(pts[face]) <= 0:
            continue  # outer face
        if len(face) == 3:
            tris.append(tuple(face))
        elif len(face) == 4:
            quads += 1
            _split_quad(pts, face, tris, diag)
        else:
            tris.extend(ear_clip(pts, face))
    _check_cover(pts, tris, signed_area(outer) - signed_area(inner), "matching")
    return AnnulusResult(tris, "matching", quads, _max_edge(pts, tris), diag)


def cdt_triangulation(outer: np.ndarray, inner: np.ndarray) -> AnnulusResult:
    import shapely
    from scipy.spatial import cKDTree

    pts = np.vstack([outer, inner]) if len(inner) else outer
    poly = shapely.Polygon(outer, [inner] if len(inner) else None)
    tree = cKDTree(pts)
    tris = []
    for g in shapely.constrained_delaunay_triangles(poly).geoms:
        c = np.asarray(g.exterior.coords)[:3]
        dist, idx = tree.query(c)
        if dist.max() > 1e-9:
            raise MeshError("annulus_triangulate", "constrained triangulation introduced a new vertex")
        a, b, cc = (int(x) for x in idx)
        if _cross(pts[a], pts[b], pts[cc]) < 0:
            b, cc = cc, b
        tris.append((a, b, cc))
    tris.sort()
    _check_cover(pts, tris, signed_area(outer) - (signed_area(inner) if len(inner) else 0.0), "cdt")
    return AnnulusResult(tris, "cdt", 0, _max_edge(pts, tris))


def annulus_triangulate(outer, inner, fallback: bool = True) -> AnnulusResult:
    """Triangulate between the CCW cycle ``outer`` (subdivided boundary of T)
    and the CCW cycle ``inner`` (boundary of the lattice patch, possibly
    empty) without adding vertices.

    Each inner point is joined to its nearest outer point and vice versa,
    counting only segments that leave the patch through its exterior angle;
    the resulting faces are triangles and quadrilaterals, and quadrilaterals
    are split along the shorter diagonal. With an empty patch the polygon is
    cut into ears. If the matching is degenerate (crossing segments) and
    ``fallback`` is set, a constrained Delaunay triangulation is used instead.
    Ties in nearest-point queries raise :class:`TieError` either way.
    """
    outer = np.asarray(outer, dtype=float).reshape(-1, 2)
    inner = np.asarray(inner, dtype=float).reshape(-1, 2)
    if len(outer) < 3:
        raise MeshError("annulus_triangulate", "outer cycle needs at least 3 points")
    if len(inner) == 0:
        tris = ear_clip(outer, list(range(len(outer))))
        _check_cover(outer, tris, signed_area(outer), "ears")
        return AnnulusResult(tris, "ears", 0, _max_edge(outer, tris))
    try:
        return matching_triangulation(outer, inner)
    except TieError:
        raise
    except MeshError:
        if not fallback:
            raise
    return cdt_triangulation(outer, inner)
