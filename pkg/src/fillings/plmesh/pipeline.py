"""Balanced triangulations of PL surfaces and their filling reports."""

from __future__ import annotations

import json
import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from ..bounds import continuous_area_bound
from ..complex import AbstractTriangulation, boundary, relabel, validate
from ..errors import FillingError, MeshError
from ..metrics import LipschitzReport, lipschitz_constant
from .annulus import TieError, annulus_triangulate, cdt_triangulation
from .barycentric import refine_until
from .dirichlet import SubdivisionPlan, dirichlet_plan
from .grid import OFFSET, GridPatch, grid_fill
from .surface import PLSurface, heron_area, planar_corners, validate_surface

log = logging.getLogger(__name__)

MAX_OFFSET_DOUBLINGS = 6
# when the annulus has edges longer than this many epsilons, the constrained
# triangulation and meshing T without its patch are tried as well
POOR_ANNULUS = 3.0
# the patch-free alternative is only tried on triangles with this few boundary points
EARS_LIMIT = 400
# unprotected edges are refined until they are at most epsilon * (1 + REFINE_TOL)
REFINE_TOL = 1e-9


def _ekey(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass
class _Piece:
    """The mesh of one triangle of M, in local planar coordinates."""

    keys: list
    points: np.ndarray
    triangles: list[tuple[int, int, int]]
    equilateral: int  # the first ``equilateral`` triangles are lattice triangles
    lengths: dict[tuple[int, int], float]
    method: str
    C: float
    rounds: int
    offset_doublings: int
    quad_diagonals: list[tuple[float, float]]


@dataclass
class BalancedMesh:
    complex: AbstractTriangulation
    lengths: dict[tuple[int, int], float]
    equilateral: frozenset
    stats: dict
    plan: SubdivisionPlan
    coords: np.ndarray = field(repr=False)

    def triangle_sides(self, t) -> tuple[float, float, float]:
        a, b, c = t
        return (self.lengths[_ekey(a, b)], self.lengths[_ekey(b, c)], self.lengths[_ekey(a, c)])

    def to_dict(self) -> dict:
        out = self.complex.to_dict()
        out["lengths"] = {f"{a},{b}": self.lengths[(a, b)] for a, b in sorted(self.lengths)}
        out["equilateral"] = [list(t) for t in sorted(self.equilateral)]
        out["stats"] = dict(self.stats)
        out["plan"] = self.plan.to_dict()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True) + "\n"

    def to_off(self) -> str:
        lines = ["OFF", f"{self.complex.num_vertices} {len(self.complex.triangles)} 0"]
        lines += [f"{x:.12g} {y:.12g} 0" for x, y in self.coords]
        lines += [f"3 {a} {b} {c}" for a, b, c in self.complex.triangles]
        return "\n".join(lines) + "\n"


def _outer_cycle(M: PLSurface, plan: SubdivisionPlan, t: int, corners: np.ndarray):
    """Subdivision points on the boundary of triangle t, CCW from corner 0,
    with their global keys and the planned length of each interval."""
    pts, keys, lengths = [], [], []
    cv = M.corner_vertex
    for s in range(3):
        e, forward = M.side_edge(t, s)
        edge = M.edges[e]
        pos = plan.positions(e)
        count = len(pos) - 1
        A, B = corners[s], corners[(s + 1) % 3]
        if forward:
            order = range(count)  # point index along the edge, heading from A
        else:
            order = range(count, 0, -1)
        for i in order:
            d = pos[i] if forward else edge.length - pos[i]
            pts.append(A + (B - A) * (d / edge.length))
            if i in (0, count):
                keys.append(("v", cv[3 * t + s]))
            else:
                keys.append(("e", e, i))
            j = i if forward else i - 1  # interval between this point and the next
            lengths.append(plan.interval_length(e, j))
    return np.array(pts), keys, lengths


def _frame(sides) -> tuple[tuple[float, float, float], np.ndarray]:
    """Planar corners with the longest side on the x-axis (so the lattice
    runs along it), indexed like the triangle's own corners."""
    s0 = max(range(3), key=lambda s: (sides[s], -s))
    rot = (sides[s0], sides[(s0 + 1) % 3], sides[(s0 + 2) % 3])
    pc = planar_corners(*rot)
    corners = np.empty((3, 2))
    for i in range(3):
        corners[(s0 + i) % 3] = pc[i]
    return rot, corners


def _mesh_triangle(M: PLSurface, plan: SubdivisionPlan, t: int) -> _Piece:
    eps = plan.epsilon
    sides, corners = _frame(M.triangles[t])
    outer, okeys, olens = _outer_cycle(M, plan, t, corners)
    m = len(outer)
    for doubling in range(MAX_OFFSET_DOUBLINGS + 1):
        scale = 2.0**doubling
        patch = grid_fill(sides, eps, (OFFSET[0] * scale, OFFSET[1] * scale))
        inner = patch.points[patch.boundary] if not patch.empty else np.zeros((0, 2))
        try:
            ann = annulus_triangulate(outer, inner)
            break
        except TieError as exc:
            log.debug("triangle %d: %s; doubling the lattice offset", t, exc)
    else:
        raise MeshError("annulus_triangulate", f"triangle {t}: nearest-point ties persist after offset retries")
    if ann.method == "cdt":
        log.info("triangle %d: matching crossed, used constrained triangulation", t)
    if not patch.empty and ann.max_edge > POOR_ANNULUS * eps:
        # long fan edges (typically into an acute tip the patch cannot reach);
        # keep whichever triangulation has the shortest longest edge
        options = [ann]
        if ann.method != "cdt":
            try:
                options.append(cdt_triangulation(outer, inner))
            except MeshError as exc:
                log.debug("triangle %d: constrained triangulation failed: %s", t, exc)
        if m <= EARS_LIMIT:
            options.append(annulus_triangulate(outer, np.zeros((0, 2))))
        best = min(options, key=lambda a: a.max_edge)
        if best is not ann:
            log.info("triangle %d: annulus max edge %.3g eps, using %s instead", t, ann.max_edge / eps, best.method)
            ann = best
        if ann.method == "ears":
            patch = GridPatch(eps, patch.origin, np.zeros((0, 2)), [], [], [], patch.dropped + len(patch.triangles))

    pts = np.vstack([outer, patch.points]) if len(patch.points) else outer
    remap = list(range(m)) + [m + b for b in patch.boundary]
    tris = [tuple(remap[v] for v in tri) for tri in ann.triangles]
    protected = {_ekey(i, (i + 1) % m) for i in range(m)}
    nb = len(patch.boundary)
    protected |= {_ekey(m + patch.boundary[j], m + patch.boundary[(j + 1) % nb]) for j in range(nb)}
    C = ann.max_edge / eps
    pts, tris, rounds = refine_until(pts, tris, protected, eps * (1 + REFINE_TOL))

    lattice = [tuple(m + v for v in tri) for tri in patch.triangles]
    lengths: dict[tuple[int, int], float] = {}
    for tri in lattice:
        for s in range(3):
            lengths[_ekey(tri[s], tri[(s + 1) % 3])] = eps
    for i in range(m):
        lengths[_ekey(i, (i + 1) % m)] = olens[i]
    for tri in tris:
        for s in range(3):
            k = _ekey(tri[s], tri[(s + 1) % 3])
            if k not in lengths:
                lengths[k] = float(math.dist(pts[k[0]], pts[k[1]]))

    keys = list(okeys)
    keys += [("g", t, i, j) for i, j in patch.keys]
    keys += [("b", t, i) for i in range(len(keys), len(pts))]
    return _Piece(keys, pts, lattice + tris, len(lattice), lengths, ann.method, C, rounds, doubling, ann.diagonals)


def _affine(src: np.ndarray, dst: np.ndarray):
    """Affine map sending the three points ``src`` to ``dst``."""
    S = np.array([src[1] - src[0], src[2] - src[0]]).T
    D = np.array([dst[1] - dst[0], dst[2] - dst[0]]).T
    A = D @ np.linalg.inv(S)
    return A, dst[0] - A @ src[0]


def _unfold(M: PLSurface) -> list[np.ndarray]:
    """Planar positions of every triangle's corners, laid out by breadth-first
    unfolding across gluings. Components are placed side by side."""
    nt = len(M.triangles)
    partner = {}
    for g in M.gluings:
        partner[g.a] = (g.b, g.parallel)
        partner[g.b] = (g.a, g.parallel)
    placed: list = [None] * nt
    shift = 0.0
    for root in range(nt):
        if placed[root] is not None:
            continue
        c = planar_corners(*M.triangles[root]) + np.array([shift, 0.0])
        placed[root] = c
        comp_max = c[:, 0].max()
        queue = deque([root])
        while queue:
            t = queue.popleft()
            for s in range(3):
                if (t, s) not in partner:
                    continue
                (u, r), parallel = partner[(t, s)]
                if placed[u] is not None:
                    continue
                P0, P1 = placed[t][s], placed[t][(s + 1) % 3]
                if parallel:
                    Q0, Q1 = P0, P1
                else:
                    Q0, Q1 = P1, P0
                local = planar_corners(*M.triangles[u])
                a, b, apex = local[r], local[(r + 1) % 3], local[(r + 2) % 3]
                # place u's side r on Q0 -> Q1 with its apex opposite t's apex
                d = Q1 - Q0
                L = float(np.hypot(*d))
                e1 = d / L
                e2 = np.array([-e1[1], e1[0]])
                far = placed[t][(s + 2) % 3]
                sign = -1.0 if (far - Q0) @ e2 > 0 else 1.0
                la = local[(r + 1) % 3] - local[r]
                lb = apex - a
                along = (lb @ la) / float(np.hypot(*la))
                height = abs(la[0] * lb[1] - la[1] * lb[0]) / float(np.hypot(*la))
                target = np.empty((3, 2))
                target[r] = Q0
                target[(r + 1) % 3] = Q1
                target[(r + 2) % 3] = Q0 + along * e1 + sign * height * e2
                placed[u] = target
                comp_max = max(comp_max, target[:, 0].max())
                queue.append(u)
        shift = comp_max + 1.0
    return placed


def balanced_triangulation(M: PLSurface, k: int, plan: SubdivisionPlan | None = None) -> BalancedMesh:
    """Triangulate M so that all but O(1/epsilon) triangles are equilateral
    with side epsilon and every edge is at most about epsilon long.

    Each triangle of M is meshed independently (lattice patch, annulus,
    partial barycentric refinement) and the pieces are glued through the
    shared subdivision points of M's edges. Boundary vertices of the result
    are numbered 0..n-1 along the boundary when M's boundary is one curve.
    """
    report = validate_surface(M)
    if not report.ok:
        v = report.violations[0]
        raise MeshError("validate_surface", v.message, report.to_dict())
    if plan is None:
        plan = dirichlet_plan(M, k)
    eps = plan.epsilon
    pieces = [_mesh_triangle(M, plan, t) for t in range(len(M.triangles))]

    gid: dict = {}
    tris: list[tuple[int, int, int]] = []
    equi: set = set()
    lengths: dict[tuple[int, int], float] = {}
    owner: list[tuple[int, int]] = []  # (piece, local index) where each vertex first appears
    for p, piece in enumerate(pieces):
        ids = []
        for i, key in enumerate(piece.keys):
            if key not in gid:
                gid[key] = len(gid)
                owner.append((p, i))
            ids.append(gid[key])
        for n, tri in enumerate(piece.triangles):
            g = tuple(ids[v] for v in tri)
            tris.append(g)
            if n < piece.equilateral:
                equi.add(tuple(sorted(g)))
        for (a, b), d in piece.lengths.items():
            lengths.setdefault(_ekey(ids[a], ids[b]), d)

    V = len(gid)
    K = AbstractTriangulation(V, tris)
    cycles = boundary(K)
    mapping = list(range(V))
    if len(cycles) == 1:
        cyc = cycles[0]
        on = set(cyc)
        rest = [v for v in range(V) if v not in on]
        mapping = [0] * V
        for new, old in enumerate(cyc + rest):
            mapping[old] = new
        K = AbstractTriangulation(V, relabel(K, mapping).triangles, len(cyc))
        lengths = {_ekey(mapping[a], mapping[b]): d for (a, b), d in lengths.items()}
        equi = {tuple(sorted(mapping[v] for v in t)) for t in equi}
    check = validate(K)
    if not check.ok:
        v = check.violations[0]
        raise MeshError("balanced_triangulation", f"glued mesh is not a valid triangulation: {v.message}", check.to_dict())

    placed = _unfold(M)
    coords = np.zeros((V, 2))
    maps = [_affine(_frame(M.triangles[p])[1], placed[p]) for p in range(len(pieces))]
    for g, (p, i) in enumerate(owner):
        A, b = maps[p]
        coords[mapping[g]] = A @ pieces[p].points[i] + b

    areas = []
    for t in K.triangles:
        a, b, c = t
        areas.append(heron_area(lengths[_ekey(a, b)], lengths[_ekey(b, c)], lengths[_ekey(a, c)]))
    bnd = [lengths[e] for e in K.boundary_edges]
    all_len = list(lengths.values())
    C = max(p.C for p in pieces)
    diag = [d for p in pieces for d in p.quad_diagonals]
    n_equi = len(equi)
    max_edge = max(all_len)
    stats = {
        "epsilon": eps,
        "k": plan.k,
        "num_vertices": V,
        "num_triangles": len(K.triangles),
        "boundary_n": len(cycles[0]) if len(cycles) == 1 else None,
        "max_edge": max_edge,
        "min_edge": min(all_len),
        "min_boundary_edge": min(bnd) if bnd else None,
        "max_boundary_edge": max(bnd) if bnd else None,
        "equilateral_count": n_equi,
        "non_equilateral_count": len(K.triangles) - n_equi,
        "total_area": math.fsum(areas),
        "surface_area": M.area,
        "annulus_C": C,
        "barycentric_rounds": max(p.rounds for p in pieces),
        "barycentric_round_bound": math.ceil(math.log(max(2 * C, 1.0)) / math.log(1.5)),
        "deviation_bound": plan.deviation_bound,
        "max_deviation": plan.max_deviation,
        "c1": (max(0.0, max_edge - eps) / plan.deviation_bound) if plan.deviation_bound > 0 else 0.0,
        "cdt_fallbacks": sum(p.method == "cdt" for p in pieces),
        "ears_only": sum(p.method == "ears" for p in pieces),
        "offset_doublings": max(p.offset_doublings for p in pieces),
        "quads": len(diag),
        "min_quad_diagonal_slack": min((s - d for d, s in diag), default=0.0),
    }
    return BalancedMesh(K, lengths, frozenset(equi), stats, plan, coords)


def mesh_filling_report(M: PLSurface, k: int, mesh: BalancedMesh | None = None) -> tuple[dict, BalancedMesh, LipschitzReport]:
    """Mesh M and measure the result as a filling of its boundary cycle.

    Returns (report, mesh, lipschitz). The report carries n, |V|, |T|, the
    achieved Lipschitz constant, the area, the continuous area bound at that
    constant and their ratio, and |V|/n^2.
    """
    if mesh is None:
        mesh = balanced_triangulation(M, k)
    K = mesh.complex
    if K.boundary_n is None:
        raise FillingError("mesh_filling_report needs a surface whose boundary is a single curve")
    lip = lipschitz_constant(K)
    n = K.boundary_n
    ell = M.boundary_length
    area = mesh.stats["total_area"]
    bound = continuous_area_bound(lip.delta, ell)
    report = {
        "n": n,
        "num_vertices": K.num_vertices,
        "num_triangles": len(K.triangles),
        "delta": [lip.delta.numerator, lip.delta.denominator],
        "delta_float": float(lip.delta),
        "witness": None if lip.witness is None else list(lip.witness),
        "area": area,
        "surface_area": M.area,
        "ell": ell,
        "area_bound": bound,
        "area_ratio": area / bound,
        "vertices_over_n2": K.num_vertices / n**2,
        "epsilon": mesh.stats["epsilon"],
        "k": mesh.stats["k"],
    }
    return report, mesh, lip


def k_for_epsilon(M: PLSurface, target: float, k_max: int = 100_000) -> int:
    """k on a geometric ladder whose plan's epsilon is closest to ``target``
    (in ratio) among those at most twice the target. The plan's epsilon
    moves in jumps as k grows, so it can land on either side of the target."""
    best, best_err = None, math.inf
    finest = None
    k = 10
    while k <= k_max:
        try:
            eps = dirichlet_plan(M, k).epsilon
        except MeshError:
            eps = None
        if eps is not None:
            err = abs(math.log(eps / target)) if eps <= 2 * target else math.inf
            if err < best_err or (best_err == math.inf and (finest is None or eps < finest[1])):
                best, best_err = k, err
            if finest is None or eps < finest[1]:
                finest = (k, eps)
            if eps < target / 2:
                break
        k = max(k + 1, int(k * 1.25))
    if best is None:
        raise MeshError("dirichlet_plan", f"no k <= {k_max} gives a usable plan")
    return best
