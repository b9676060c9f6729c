"""Equilateral lattice patches inside a planar triangle."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .surface import planar_corners

SQRT3_2 = math.sqrt(3.0) / 2.0
TOL = 1e-12

# default lattice translation, in units of epsilon
OFFSET = (math.sqrt(2.0) / 100.0, math.sqrt(3.0) / 100.0)


@dataclass
class GridPatch:
    """Lattice triangles strictly inside T whose union is a disk.

    ``points`` holds the used lattice vertices, ``keys`` their (i, j)
    lattice coordinates, ``triangles`` CCW index triples into ``points``
    and ``boundary`` the CCW boundary cycle of the union.
    """

    epsilon: float
    origin: tuple[float, float]
    points: np.ndarray
    keys: list[tuple[int, int]]
    triangles: list[tuple[int, int, int]]
    boundary: list[int]
    dropped: int = 0

    @property
    def empty(self) -> bool:
        return not self.triangles

    @property
    def area(self) -> float:
        return len(self.triangles) * math.sqrt(3.0) / 4.0 * self.epsilon**2


def _slots(i: int, j: int):
    # the six lattice triangles around (i, j), counter-clockwise from angle 0
    return [("U", i, j), ("D", i - 1, j), ("U", i - 1, j), ("D", i - 1, j - 1), ("U", i, j - 1), ("D", i, j - 1)]


def _corners(tri):
    kind, i, j = tri
    if kind == "U":
        return ((i, j), (i + 1, j), (i, j + 1))
    return ((i + 1, j), (i + 1, j + 1), (i, j + 1))


def _edges(tri):
    a, b, c = _corners(tri)
    return ((a, b), (b, c), (c, a))


def _ekey(u, v):
    return (u, v) if u < v else (v, u)


def _runs(present: list[bool]) -> list[list[int]]:
    """Maximal cyclic runs of True slots."""
    if all(present):
        return [list(range(6))]
    start = present.index(False)
    runs, cur = [], []
    for k in range(1, 7):
        s = (start + k) % 6
        if present[s]:
            cur.append(s)
        elif cur:
            runs.append(cur)
            cur = []
    if cur:
        runs.append(cur)
    return runs


def _components(tris: set) -> list[set]:
    by_edge: dict = {}
    for t in tris:
        for u, v in _edges(t):
            by_edge.setdefault(_ekey(u, v), []).append(t)
    seen: set = set()
    comps = []
    for t in sorted(tris):
        if t in seen:
            continue
        comp = {t}
        seen.add(t)
        stack = [t]
        while stack:
            s = stack.pop()
            for u, v in _edges(s):
                for r in by_edge[_ekey(u, v)]:
                    if r not in seen:
                        seen.add(r)
                        comp.add(r)
                        stack.append(r)
        comps.append(comp)
    return comps


def _boundary_cycles(tris: set):
    count: dict = {}
    directed = {}
    for t in tris:
        for u, v in _edges(t):
            k = _ekey(u, v)
            count[k] = count.get(k, 0) + 1
            directed[k] = (u, v)
    succ: dict = {}
    for k, c in count.items():
        if c == 1:
            u, v = directed[k]
            if u in succ:
                return None
            succ[u] = v
    cycles = []
    seen: set = set()
    for s in sorted(succ):
        if s in seen:
            continue
        cyc = [s]
        seen.add(s)
        v = succ[s]
        while v != s:
            if v in seen or v not in succ:
                return None
            cyc.append(v)
            seen.add(v)
            v = succ[v]
        cycles.append(cyc)
    return cycles


def _make_disk(tris: set) -> tuple[set, int]:
    """Remove triangles until the union is a disk with simple boundary."""
    start = len(tris)
    tris = set(tris)
    while tris:
        changed = True
        while changed and tris:
            changed = False
            verts = sorted({v for t in tris for v in _corners(t)})
            for v in verts:
                slots = _slots(*v)
                present = [s in tris for s in slots]
                if not any(present):
                    continue
                runs = _runs(present)
                if len(runs) > 1:
                    keep = max(runs, key=len)
                    for r in runs:
                        if r is not keep:
                            for s in r:
                                tris.discard(slots[s])
                    changed = True
            comps = _components(tris)
            if len(comps) > 1:
                biggest = max(len(c) for c in comps)
                keep = next(c for c in comps if len(c) == biggest)
                tris = keep
                changed = True
        cycles = _boundary_cycles(tris)
        if cycles is not None and len(cycles) == 1:
            return tris, start - len(tris)
        # erode one layer and retry
        bverts = {v for cyc in (cycles or []) for v in cyc}
        if not bverts:
            count: dict = {}
            for t in tris:
                for u, w in _edges(t):
                    count[_ekey(u, w)] = count.get(_ekey(u, w), 0) + 1
            bverts = {x for k, c in count.items() if c == 1 for x in k}
        tris = {t for t in tris if not any(v in bverts for v in _corners(t))}
    return set(), start


def grid_fill(sides, epsilon: float, offset=OFFSET) -> GridPatch:
    """Equilateral side-``epsilon`` lattice triangles strictly inside T.

    T is realised by :func:`planar_corners`; the lattice has one family of
    edges parallel to side 0 and is translated by ``epsilon * offset``.
    The patch is trimmed to a disk so that its boundary is a simple cycle.
    """
    a, b, c = (float(x) for x in sides)
    corners = planar_corners(a, b, c)
    eps = float(epsilon)
    origin = (eps * offset[0], eps * offset[1])
    h = eps * SQRT3_2
    ymax = corners[:, 1].max()
    j0 = math.floor((0.0 - origin[1]) / h) - 1
    j1 = math.ceil((ymax - origin[1]) / h) + 1
    xmin, xmax = corners[:, 0].min(), corners[:, 0].max()

    # inward normals and offsets of the three sides
    normals, offs = [], []
    for s in range(3):
        p, q = corners[s], corners[(s + 1) % 3]
        d = q - p
        nrm = np.array([-d[1], d[0]]) / math.hypot(d[0], d[1])
        normals.append(nrm)
        offs.append(float(nrm @ p))
    normals = np.array(normals)
    offs = np.array(offs)

    inside: set[tuple[int, int]] = set()
    for j in range(j0, j1 + 1):
        y = origin[1] + j * h
        if y <= 0 or y >= ymax:
            continue
        base = origin[0] + j * eps / 2
        i0 = math.floor((xmin - base) / eps) - 1
        i1 = math.ceil((xmax - base) / eps) + 1
        ii = np.arange(i0, i1 + 1)
        pts = np.stack([base + ii * eps, np.full(len(ii), y)], axis=1)
        dist = pts @ normals.T - offs
        ok = (dist > TOL).all(axis=1)
        inside.update((int(i), j) for i in ii[ok])

    tris = set()
    for i, j in inside:
        if (i + 1, j) in inside and (i, j + 1) in inside:
            tris.add(("U", i, j))
            if (i + 1, j + 1) in inside:
                tris.add(("D", i, j))
    tris, dropped = _make_disk(tris)

    keys = sorted({v for t in tris for v in _corners(t)})
    index = {v: n for n, v in enumerate(keys)}
    pts = np.array([[origin[0] + i * eps + j * eps / 2, origin[1] + j * h] for i, j in keys]).reshape(-1, 2)
    triangles = [tuple(index[v] for v in _corners(t)) for t in sorted(tris)]
    boundary: list[int] = []
    if tris:
        (cyc,) = _boundary_cycles(tris)
        boundary = [index[v] for v in cyc]
    return GridPatch(eps, origin, pts, keys, triangles, boundary, dropped)
