"""PL metric surfaces: Euclidean triangles given by side lengths, glued
along sides.

Side ``s`` of a triangle runs from corner ``s`` to corner ``(s + 1) % 3``
and has length ``sides[s]``. A gluing ``[[t1, s1], [t2, s2]]`` identifies
the two sides with opposite orientations (the start of one side meets the
end of the other), which is the convention for consistently oriented
triangles; a third element ``true`` glues them with equal orientation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from ..complex import ValidationReport
from ..errors import FillingError

LENGTH_RTOL = 1e-9


def heron_area(a: float, b: float, c: float) -> float:
    """Area from side lengths, in the cancellation-safe sorted form."""
    a, b, c = sorted((float(a), float(b), float(c)), reverse=True)
    if c <= 0 or a >= b + c:
        if a == b + c or c == 0:
            raise FillingError(f"degenerate triangle ({a}, {b}, {c})")
        raise FillingError(f"sides ({a}, {b}, {c}) violate the triangle inequality")
    prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
    return 0.25 * math.sqrt(prod)


def planar_corners(a: float, b: float, c: float) -> np.ndarray:
    """Corners of the triangle with corner 0 at the origin and side 0 on the
    positive x-axis, counter-clockwise."""
    x = (a * a + c * c - b * b) / (2 * a)
    y = math.sqrt(max(c * c - x * x, 0.0))
    return np.array([[0.0, 0.0], [a, 0.0], [x, y]])


class _UnionFind:
    def __init__(self, size: int):
        self.parent = list(range(size))

    def find(self, i: int) -> int:
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i: int, j: int) -> None:
        ri, rj = self.find(i), self.find(j)
        if ri != rj:
            if ri < rj:
                self.parent[rj] = ri
            else:
                self.parent[ri] = rj


@dataclass(frozen=True)
class Gluing:
    a: tuple[int, int]
    b: tuple[int, int]
    parallel: bool = False


@dataclass(frozen=True)
class SurfaceEdge:
    """One edge of M: an unglued side or a glued pair of sides.

    ``sides`` maps each side to True when it runs from ``start`` to ``end``.
    """

    index: int
    sides: tuple[tuple[tuple[int, int], bool], ...]
    start: int
    end: int
    length: float

    @property
    def on_boundary(self) -> bool:
        return len(self.sides) == 1


class PLSurface:
    def __init__(self, triangles: Sequence[Sequence[float]], gluings: Sequence = ()):
        self.triangles = [tuple(float(x) for x in t) for t in triangles]
        glu = []
        for g in gluings:
            if isinstance(g, Gluing):
                glu.append(g)
                continue
            parallel = bool(g[2]) if len(g) > 2 else False
            glu.append(Gluing((int(g[0][0]), int(g[0][1])), (int(g[1][0]), int(g[1][1])), parallel))
        self.gluings = glu

    # -- serialisation -----------------------------------------------------

    def to_dict(self) -> dict:
        out = []
        for g in self.gluings:
            row = [list(g.a), list(g.b)]
            if g.parallel:
                row.append(True)
            out.append(row)
        return {"triangles": [list(t) for t in self.triangles], "gluings": out}

    @classmethod
    def from_dict(cls, data: dict) -> "PLSurface":
        try:
            tris = data["triangles"]
            glu = data.get("gluings", [])
            if any(len(t) != 3 for t in tris):
                raise FillingError("each triangle needs three side lengths")
            return cls(tris, glu)
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, FillingError):
                raise
            raise FillingError(f"malformed surface record: {exc}") from exc

    @classmethod
    def loads(cls, text: str) -> "PLSurface":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise FillingError(f"invalid JSON: {exc}") from exc

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    # -- derived structure ---------------------------------------------------

    def _corner(self, t: int, i: int) -> int:
        return 3 * t + (i % 3)

    @cached_property
    def _structure(self):
        nt = len(self.triangles)
        uf = _UnionFind(3 * nt)
        partner: dict[tuple[int, int], tuple[tuple[int, int], bool]] = {}
        for g in self.gluings:
            (t1, s1), (t2, s2) = g.a, g.b
            partner[g.a] = (g.b, g.parallel)
            partner[g.b] = (g.a, g.parallel)
            if g.parallel:
                uf.union(self._corner(t1, s1), self._corner(t2, s2))
                uf.union(self._corner(t1, s1 + 1), self._corner(t2, s2 + 1))
            else:
                uf.union(self._corner(t1, s1), self._corner(t2, s2 + 1))
                uf.union(self._corner(t1, s1 + 1), self._corner(t2, s2))
        roots = sorted({uf.find(c) for c in range(3 * nt)})
        vid = {r: i for i, r in enumerate(roots)}
        corner_vertex = [vid[uf.find(c)] for c in range(3 * nt)]

        edges: list[SurfaceEdge] = []
        side_edge: dict[tuple[int, int], tuple[int, bool]] = {}
        for t in range(nt):
            for s in range(3):
                if (t, s) in side_edge:
                    continue
                u = corner_vertex[self._corner(t, s)]
                v = corner_vertex[self._corner(t, s + 1)]
                forward = u <= v
                start, end = (u, v) if forward else (v, u)
                members = [((t, s), forward)]
                if (t, s) in partner:
                    other, parallel = partner[(t, s)]
                    members.append((other, forward if parallel else not forward))
                idx = len(edges)
                edges.append(SurfaceEdge(idx, tuple(members), start, end, self.triangles[t][s]))
                for side, fw in members:
                    side_edge[side] = (idx, fw)
        return corner_vertex, edges, side_edge

    @property
    def num_vertices(self) -> int:
        cv = self._structure[0]
        return max(cv) + 1 if cv else 0

    @property
    def corner_vertex(self) -> list[int]:
        return self._structure[0]

    @property
    def edges(self) -> list[SurfaceEdge]:
        return self._structure[1]

    def side_edge(self, t: int, s: int) -> tuple[int, bool]:
        """Index of the edge carrying side (t, s) and whether the side runs
        from the edge's start to its end."""
        return self._structure[2][(t, s)]

    @property
    def boundary_edges(self) -> list[SurfaceEdge]:
        return [e for e in self.edges if e.on_boundary]

    @property
    def area(self) -> float:
        return math.fsum(heron_area(*t) for t in self.triangles)

    @property
    def boundary_length(self) -> float:
        return math.fsum(e.length for e in self.boundary_edges)

    def boundary_curves(self) -> list[list[int]]:
        """Boundary curves as cyclic lists of edge indices."""
        at: dict[int, list[int]] = {}
        for e in self.boundary_edges:
            at.setdefault(e.start, []).append(e.index)
            at.setdefault(e.end, []).append(e.index)
        if any(len(v) != 2 for v in at.values()):
            raise FillingError("boundary sides do not form disjoint closed curves")
        seen: set[int] = set()
        curves = []
        for e0 in sorted(e.index for e in self.boundary_edges):
            if e0 in seen:
                continue
            curve = [e0]
            seen.add(e0)
            edge = self.edges[e0]
            v = edge.end
            while True:
                a, b = at[v]
                nxt = b if a == curve[-1] else a
                if nxt == e0:
                    break
                curve.append(nxt)
                seen.add(nxt)
                ne = self.edges[nxt]
                v = ne.end if ne.start == v else ne.start
            curves.append(curve)
        return curves


def validate_surface(M: PLSurface) -> ValidationReport:
    report = ValidationReport()
    nt = len(M.triangles)
    for t, sides in enumerate(M.triangles):
        if any(not math.isfinite(x) or x <= 0 for x in sides):
            report.add("nonpositive side", (t,), f"triangle {t} has a nonpositive side {sides}")
            continue
        a, b, c = sorted(sides, reverse=True)
        if not a < b + c:
            report.add("triangle inequality", (t,), f"triangle {t} sides {sides} violate the strict triangle inequality")
    if not report.ok:
        return report
    used: dict[tuple[int, int], int] = {}
    for gi, g in enumerate(M.gluings):
        for side in (g.a, g.b):
            if not (0 <= side[0] < nt and 0 <= side[1] < 3):
                report.add("bad side reference", side, f"gluing {gi} refers to missing side {side}")
        if g.a == g.b:
            report.add("self gluing", g.a, f"gluing {gi} glues side {g.a} to itself")
        for side in (g.a, g.b):
            if side in used:
                report.add("side glued twice", side, f"side {side} appears in gluings {used[side]} and {gi}")
            used[side] = gi
    if not report.ok:
        return report
    for gi, g in enumerate(M.gluings):
        la = M.triangles[g.a[0]][g.a[1]]
        lb = M.triangles[g.b[0]][g.b[1]]
        if abs(la - lb) > LENGTH_RTOL * max(la, lb):
            report.add("length mismatch", (gi,), f"gluing {gi} joins sides of lengths {la} and {lb}")
    if not report.ok:
        return report
    try:
        M.boundary_curves()
    except FillingError as exc:
        report.add("boundary not closed curves", (), str(exc))
    return report


def from_embedding(points: np.ndarray, faces: Sequence[Sequence[int]]) -> PLSurface:
    """PL surface of a triangulated point cloud (any dimension), with sides
    glued wherever two faces share an edge."""
    pts = np.asarray(points, dtype=float)
    tris = []
    owner: dict[tuple[int, int], tuple[int, int, int, int]] = {}
    gluings = []
    for t, f in enumerate(faces):
        f = [int(v) for v in f]
        tris.append([float(np.linalg.norm(pts[f[s]] - pts[f[(s + 1) % 3]])) for s in range(3)])
        for s in range(3):
            u, v = f[s], f[(s + 1) % 3]
            key = (min(u, v), max(u, v))
            if key in owner:
                t0, s0, u0, v0 = owner.pop(key)
                gluings.append([[t0, s0], [t, s], u0 == u])
            else:
                owner[key] = (t, s, u, v)
    return PLSurface(tris, gluings)
