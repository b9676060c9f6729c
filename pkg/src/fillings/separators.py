"""Menger certificates and constructive Sperner walks for boundary cuts.

For non-adjacent boundary vertices x, y of a filling of C_n the boundary
minus {x, y} splits into two arcs L and R. :func:`max_disjoint_paths`
returns a maximum family of vertex-disjoint L-R paths in K - x - y with a
separator of the same size, and :func:`sperner_walk` turns any separator
into an x-y walk whose interior lies in it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .complex import AbstractTriangulation, _edge, boundary_cycle
from .errors import FillingError, InvariantError, SeparationError
from .metrics import cycle_distance


@dataclass(frozen=True)
class CutInstance:
    K: AbstractTriangulation
    x: int
    y: int
    L: tuple[int, ...]
    R: tuple[int, ...]


@dataclass(frozen=True)
class MengerCertificate:
    paths: tuple[tuple[int, ...], ...]
    separator: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"paths": [list(p) for p in self.paths], "separator": list(self.separator)}

    @classmethod
    def from_dict(cls, data: dict) -> "MengerCertificate":
        return cls(tuple(tuple(p) for p in data["paths"]), tuple(data["separator"]))


@dataclass(frozen=True)
class SpernerWalk:
    walk: tuple[int, ...]

    def as_path(self) -> tuple[int, ...]:
        """Loop-erased version of the walk (a simple x-y path)."""
        out: list[int] = []
        pos: dict[int, int] = {}
        for v in self.walk:
            if v in pos:
                cut = pos[v]
                for w in out[cut + 1 :]:
                    del pos[w]
                del out[cut + 1 :]
            else:
                pos[v] = len(out)
                out.append(v)
        return tuple(out)

    def to_dict(self) -> dict:
        return {"walk": list(self.walk)}


def make_cut_instance(K: AbstractTriangulation, x: int, y: int) -> CutInstance:
    n = len(boundary_cycle(K))
    if not (0 <= x < n and 0 <= y < n):
        raise FillingError(f"x={x}, y={y} must be boundary vertices 0..{n - 1}")
    if cycle_distance(n, x, y) < 2:
        raise FillingError(f"x={x} and y={y} must be distinct and non-adjacent on C_{n}")
    left = []
    v = (x + 1) % n
    while v != y:
        left.append(v)
        v = (v + 1) % n
    right = []
    v = (y + 1) % n
    while v != x:
        right.append(v)
        v = (v + 1) % n
    return CutInstance(K, x, y, tuple(left), tuple(right))


# ---------------------------------------------------------------------------
# max flow with unit vertex capacities


def _bfs_path_avoiding(adj, sources: Iterable[int], targets: set[int], blocked: set[int]) -> list[int] | None:
    prev: dict[int, int | None] = {}
    queue = deque()
    for s in sorted(sources):
        if s not in blocked and s not in prev:
            prev[s] = None
            queue.append(s)
    while queue:
        u = queue.popleft()
        if u in targets:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for w in adj[u]:
            if w not in blocked and w not in prev:
                prev[w] = u
                queue.append(w)
    return None


def max_disjoint_paths(inst: CutInstance) -> MengerCertificate:
    """Maximum vertex-disjoint L-R paths in K - x - y and a minimum separator.

    Unit vertex capacities via vertex splitting; Edmonds-Karp augmentation
    with neighbours scanned in increasing order, so the certificate is
    deterministic.
    """
    K, x, y = inst.K, inst.x, inst.y
    nv = K.num_vertices
    adj = K.adjacency
    inf = nv + 1
    src, sink = 2 * nv, 2 * nv + 1
    cap: list[dict[int, int]] = [dict() for _ in range(2 * nv + 2)]

    def arc(u, v, c):
        cap[u][v] = cap[u].get(v, 0) + c
        cap[v].setdefault(u, 0)

    removed = {x, y}
    for v in range(nv):
        if v not in removed:
            arc(2 * v, 2 * v + 1, 1)
    for a, b in K.edges:
        if a in removed or b in removed:
            continue
        arc(2 * a + 1, 2 * b, inf)
        arc(2 * b + 1, 2 * a, inf)
    for v in inst.L:
        arc(src, 2 * v, inf)
    for v in inst.R:
        arc(2 * v + 1, sink, inf)
    order = [sorted(c) for c in cap]
    original = [dict(c) for c in cap]

    while True:
        prev = {src: src}
        queue = deque([src])
        while queue and sink not in prev:
            u = queue.popleft()
            for v in order[u]:
                if v not in prev and cap[u][v] > 0:
                    prev[v] = u
                    queue.append(v)
        if sink not in prev:
            break
        v = sink
        while v != src:
            u = prev[v]
            cap[u][v] -= 1
            cap[v][u] += 1
            v = u

    # separator from the sink side: split vertices whose out-copy still
    # reaches the sink in the residual graph but whose in-copy does not
    reach = {sink}
    queue = deque([sink])
    while queue:
        v = queue.popleft()
        for u in order[v]:
            if u not in reach and cap[u][v] > 0:
                reach.add(u)
                queue.append(u)
    separator = tuple(v for v in range(nv) if v not in removed and 2 * v + 1 in reach and 2 * v not in reach)

    flow = [{v: original[u][v] - cap[u][v] for v in order[u] if original[u][v] > 0 and original[u][v] > cap[u][v]}
            for u in range(len(cap))]
    lset, rset = set(inst.L), set(inst.R)
    paths = []
    for start in sorted(flow[src]):
        node = start
        walk = [start // 2]
        flow[src][start] -= 1
        while True:
            out = node + 1  # out-copy of the current vertex
            succ = sorted(v for v, f in flow[out].items() if f > 0)
            if not succ:
                raise InvariantError("flow decomposition lost conservation")
            nxt = sink if sink in succ else succ[0]
            flow[out][nxt] -= 1
            if nxt == sink:
                break
            node = nxt
            walk.append(node // 2)
        # trim so the path meets L only at its start and R only at its end
        last_l = max(i for i, v in enumerate(walk) if v in lset)
        walk = walk[last_l:]
        first_r = min(i for i, v in enumerate(walk) if v in rset)
        paths.append(tuple(walk[: first_r + 1]))
    paths.sort()
    if len(paths) != len(separator):
        raise InvariantError(f"{len(paths)} paths but separator of size {len(separator)}")
    return MengerCertificate(tuple(paths), separator)


def separates(inst: CutInstance, S: Iterable[int]) -> list[int] | None:
    """None if S separates L from R in K - x - y, else an L-R path avoiding S."""
    blocked = set(S) | {inst.x, inst.y}
    return _bfs_path_avoiding(inst.K.adjacency, inst.L, set(inst.R), blocked)


def check_certificate(inst: CutInstance, cert: MengerCertificate) -> list[str]:
    """Problems with a certificate; empty when every invariant holds."""
    problems = []
    adj = inst.K.adjacency
    lset, rset = set(inst.L), set(inst.R)
    used: set[int] = set()
    for p in cert.paths:
        if not p or p[0] not in lset or p[-1] not in rset:
            problems.append(f"path {p} does not run from L to R")
        if inst.x in p or inst.y in p:
            problems.append(f"path {p} touches x or y")
        for a, b in zip(p, p[1:]):
            if b not in adj[a]:
                problems.append(f"path {p} uses non-edge {a}-{b}")
        if used & set(p) or len(set(p)) != len(p):
            problems.append(f"path {p} is not vertex-disjoint from the others")
        used |= set(p)
    if len(cert.paths) != len(cert.separator):
        problems.append(f"{len(cert.paths)} paths vs separator of size {len(cert.separator)}")
    if {inst.x, inst.y} & set(cert.separator):
        problems.append("separator contains x or y")
    leak = separates(inst, cert.separator)
    if leak is not None:
        problems.append(f"separator misses L-R path {leak}")
    return problems


# ---------------------------------------------------------------------------
# padding and the Sperner walk


class Padding(NamedTuple):
    complex: AbstractTriangulation
    separator: frozenset
    cycle: tuple[int, ...]


def pad_boundary(K: AbstractTriangulation, S: Iterable[int], x: int, y: int) -> Padding:
    """Push every boundary vertex of S off the boundary.

    Each such vertex l with cycle neighbours a, b gets a fresh vertex l'
    and triangles {a, l, l'}, {l, b, l'}; l' takes l's place on the cycle.
    ``cycle`` lists the new boundary in the positions of the old one.
    """
    S = frozenset(S)
    if x in S or y in S:
        raise FillingError("S must not contain x or y")
    cycle = list(boundary_cycle(K))
    n = len(cycle)
    tris = list(K.triangles)
    nv = K.num_vertices
    for pos in range(n):
        v = cycle[pos]
        if v not in S:
            continue
        a, b = cycle[pos - 1], cycle[(pos + 1) % n]
        tris.append((a, v, nv))
        tris.append((v, b, nv))
        cycle[pos] = nv
        nv += 1
    if nv == K.num_vertices:
        return Padding(K, S, tuple(cycle))
    return Padding(AbstractTriangulation(nv, tris, None), S, tuple(cycle))


RED, BLUE, GREEN = "red", "blue", "green"


def _colour(Kp: AbstractTriangulation, blue: set[int], right: Iterable[int]) -> list[str]:
    colours = [GREEN] * Kp.num_vertices
    for v in blue:
        colours[v] = BLUE
    queue = deque(v for v in right if v not in blue)
    for v in queue:
        colours[v] = RED
    adj = Kp.adjacency
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if colours[w] == GREEN:
                colours[w] = RED
                queue.append(w)
    return colours


def sperner_walk(K: AbstractTriangulation, x: int, y: int, S: Iterable[int]) -> SpernerWalk:
    """Walk from x to y whose interior vertices all lie in the separator S."""
    inst = make_cut_instance(K, x, y)
    S = set(S)
    if x in S or y in S:
        raise FillingError("S must not contain x or y")
    if any(v < 0 or v >= K.num_vertices for v in S):
        raise FillingError("S contains a vertex outside the complex")
    leak = separates(inst, S)
    if leak is not None:
        raise SeparationError(f"S does not separate L from R; witness path {leak}", leak)

    pad = pad_boundary(K, S, x, y)
    Kp = pad.complex
    n = len(pad.cycle)
    right = [pad.cycle[v] for v in inst.R]
    colours = _colour(Kp, S | {x, y}, right)

    def crossing(e):
        c = {colours[e[0]], colours[e[1]]}
        return c == {RED, BLUE}

    edge_tris: dict = {}
    for t in Kp.triangles:
        a, b, c = t
        for e in (_edge(a, b), _edge(b, c), _edge(a, c)):
            edge_tris.setdefault(e, []).append(t)

    tri_cross = {}
    for t in Kp.triangles:
        a, b, c = t
        cr = [e for e in (_edge(a, b), _edge(b, c), _edge(a, c)) if crossing(e)]
        if len(cr) not in (0, 2):
            raise InvariantError(f"triangle {t} has {len(cr)} red-blue edges")
        tri_cross[t] = cr
    outer = [_edge(pad.cycle[i], pad.cycle[(i + 1) % n]) for i in range(n)]
    outer_cross = [e for e in outer if crossing(e)]
    if len(outer_cross) != 2:
        raise InvariantError(f"exterior face has degree {len(outer_cross)}, expected 2")
    outer_set = set(outer)

    start = next((e for e in outer_cross if x in e), None)
    if start is None:
        raise InvariantError("no red-blue boundary edge at x")
    crossed = [start]
    (tri,) = edge_tris[start]
    came = start
    for _ in range(len(Kp.triangles) + 1):
        e1, e2 = tri_cross[tri]
        nxt = e2 if e1 == came else e1
        crossed.append(nxt)
        if nxt in outer_set:
            break
        t1, t2 = edge_tris[nxt]
        tri = t2 if t1 == tri else t1
        came = nxt
    else:
        raise InvariantError("auxiliary cycle did not return to the exterior face")

    walk: list[int] = []
    for a, b in crossed:
        v = a if colours[a] == BLUE else b
        if not walk or walk[-1] != v:
            walk.append(v)
    if walk[0] != x or walk[-1] != y:
        raise InvariantError(f"walk {walk} does not run from x to y")
    # off the disk (handles, cross-caps) the walk can pass through x or y
    # again; keep the stretch between the last x and the first y
    j = walk.index(y)
    i = max(p for p in range(j) if walk[p] == x)
    walk = walk[i : j + 1]
    if any(v not in S for v in walk[1:-1]):
        raise InvariantError("walk interior leaves S")
    return SpernerWalk(tuple(walk))


def check_walk(K: AbstractTriangulation, x: int, y: int, S: Iterable[int], walk: SpernerWalk) -> list[str]:
    problems = []
    S = set(S)
    w = walk.walk
    if not w or w[0] != x or w[-1] != y:
        problems.append(f"walk {w} does not run from {x} to {y}")
    adj = K.adjacency
    for a, b in zip(w, w[1:]):
        if b not in adj[a]:
            problems.append(f"consecutive {a}, {b} not adjacent")
    if any(v not in S for v in w[1:-1]):
        problems.append("interior vertex outside S")
    return problems
