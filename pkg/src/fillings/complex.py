"""Abstract triangulations: storage, validation and derived structure.

A complex is a vertex count plus a multiset of vertex triples. Nothing is
checked on construction so that :func:`validate` can report every problem
of an arbitrary input; operations that need a valid complex say so.

When ``boundary_n`` is set the complex is declared to be a filling of the
cycle C_n, whose vertices are ``0..n-1`` in cyclic order.
"""

from __future__ import annotations

import json
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import BoundaryError, FillingError

Edge = tuple[int, int]
Triangle = tuple[int, int, int]


def _edge(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class AbstractTriangulation:
    num_vertices: int
    triangles: tuple[Triangle, ...]
    boundary_n: int | None = None

    def __init__(self, num_vertices: int, triangles: Iterable[Sequence[int]], boundary_n: int | None = None):
        tris = tuple(sorted(tuple(sorted(int(v) for v in t)) for t in triangles))
        object.__setattr__(self, "num_vertices", int(num_vertices))
        object.__setattr__(self, "triangles", tris)
        object.__setattr__(self, "boundary_n", None if boundary_n is None else int(boundary_n))

    @cached_property
    def edge_counts(self) -> dict[Edge, int]:
        """Number of triangles containing each derived edge."""
        counts: Counter = Counter()
        for a, b, c in self.triangles:
            counts[_edge(a, b)] += 1
            counts[_edge(b, c)] += 1
            counts[_edge(a, c)] += 1
        return dict(sorted(counts.items()))

    @property
    def edges(self) -> list[Edge]:
        return list(self.edge_counts)

    @property
    def boundary_edges(self) -> list[Edge]:
        return [e for e, c in self.edge_counts.items() if c == 1]

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """The 1-skeleton as sorted neighbour tuples, one per vertex."""
        nbrs: list[set[int]] = [set() for _ in range(self.num_vertices)]
        for a, b in self.edge_counts:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return tuple(tuple(sorted(s)) for s in nbrs)

    def to_dict(self) -> dict:
        return {
            "num_vertices": self.num_vertices,
            "boundary_n": self.boundary_n,
            "triangles": [list(t) for t in self.triangles],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AbstractTriangulation":
        try:
            nv = data["num_vertices"]
            tris = data["triangles"]
            bn = data.get("boundary_n")
        except (KeyError, TypeError, AttributeError) as exc:
            raise FillingError(f"malformed triangulation record: {exc}") from exc
        if not isinstance(nv, int) or isinstance(nv, bool):
            raise FillingError("num_vertices must be an integer")
        if bn is not None and (not isinstance(bn, int) or isinstance(bn, bool)):
            raise FillingError("boundary_n must be an integer or null")
        if not isinstance(tris, list) or any(
            not isinstance(t, list) or len(t) != 3 or any(not isinstance(v, int) or isinstance(v, bool) for v in t)
            for t in tris
        ):
            raise FillingError("triangles must be a list of integer triples")
        return cls(nv, tris, bn)


def dumps(K: AbstractTriangulation) -> str:
    return json.dumps(K.to_dict(), sort_keys=True) + "\n"


def loads(text: str) -> AbstractTriangulation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FillingError(f"invalid JSON: {exc}") from exc
    return AbstractTriangulation.from_dict(data)


def load(path) -> AbstractTriangulation:
    with open(path) as fh:
        return loads(fh.read())


def dump(K: AbstractTriangulation, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(K))


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)
    warnings: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def add(self, kind: str, witness: tuple, message: str) -> None:
        self.violations.append(Violation(kind, witness, message))

    def to_dict(self) -> dict:
        def rows(items):
            return [{"kind": v.kind, "witness": list(v.witness), "message": v.message} for v in items]

        return {"valid": self.ok, "violations": rows(self.violations), "warnings": rows(self.warnings)}


def _components(num_vertices: int, adjacency: Sequence[Sequence[int]], vertices: Iterable[int]) -> list[list[int]]:
    seen: set[int] = set()
    comps = []
    for s in vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in adjacency[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def validate(K: AbstractTriangulation) -> ValidationReport:
    """Check every abstract-triangulation invariant and report violations.

    Never raises. A disconnected 1-skeleton is reported as a warning only.
    """
    report = ValidationReport()
    nv = K.num_vertices
    if nv < 0:
        report.add("negative vertex count", (nv,), f"num_vertices = {nv}")
        return report

    structural_ok = True
    for t in K.triangles:
        if any(v < 0 or v >= nv for v in t):
            report.add("vertex out of range", t, f"triangle {t} uses a vertex outside [0, {nv})")
            structural_ok = False
        if len(set(t)) != 3:
            report.add("degenerate triple", t, f"triangle {t} repeats a vertex")
            structural_ok = False
    for t, c in Counter(K.triangles).items():
        if c > 1:
            report.add("duplicate triple", t, f"triangle {t} listed {c} times")
    if not structural_ok:
        return report

    for e, c in K.edge_counts.items():
        if c > 2:
            report.add("edge in >2 triangles", e, f"edge {set(e)} in {c} triangles")

    used = {v for t in K.triangles for v in t}
    for v in range(nv):
        if v not in used:
            report.add("isolated vertex", (v,), f"vertex {v} lies in no triangle")

    bdeg: Counter = Counter()
    for a, b in K.boundary_edges:
        bdeg[a] += 1
        bdeg[b] += 1
    for v, d in sorted(bdeg.items()):
        if d != 2:
            report.add("boundary not disjoint cycles", (v,), f"vertex {v} has {d} boundary edges")

    n = K.boundary_n
    if n is not None:
        if n < 3:
            report.add("boundary_n < 3", (n,), "C_n needs n >= 3")
        elif n > nv:
            report.add("boundary_n exceeds vertex count", (n, nv), f"boundary_n = {n} > {nv} vertices")
        else:
            expected = {_edge(i, (i + 1) % n) for i in range(n)}
            actual = set(K.boundary_edges)
            for e in sorted(expected - actual):
                report.add("boundary mismatch", e, f"cycle edge {e} is not a boundary edge")
            for e in sorted(actual - expected):
                report.add("boundary mismatch", e, f"boundary edge {e} is not an edge of C_{n}")

    if nv and used:
        comps = _components(nv, K.adjacency, sorted(used))
        if len(comps) > 1:
            report.warnings.append(
                Violation("disconnected", tuple(c[0] for c in comps), f"1-skeleton has {len(comps)} components")
            )
    return report


def require_valid(K: AbstractTriangulation) -> None:
    report = validate(K)
    if not report.ok:
        v = report.violations[0]
        raise FillingError(f"invalid triangulation: {v.kind} ({v.message})")


# ---------------------------------------------------------------------------
# boundary structure


def boundary(K: AbstractTriangulation) -> list[list[int]]:
    """Boundary cycles, each starting at its smallest vertex and heading to
    the smaller of that vertex's two boundary neighbours."""
    nbrs: dict[int, list[int]] = {}
    for a, b in K.boundary_edges:
        nbrs.setdefault(a, []).append(b)
        nbrs.setdefault(b, []).append(a)
    bad = [v for v, ns in nbrs.items() if len(ns) != 2]
    if bad:
        raise BoundaryError(f"boundary does not decompose into cycles at vertex {min(bad)}")
    cycles = []
    seen: set[int] = set()
    for start in sorted(nbrs):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        prev, cur = start, min(nbrs[start])
        while cur != start:
            cycle.append(cur)
            seen.add(cur)
            a, b = nbrs[cur]
            prev, cur = cur, (b if a == prev else a)
        cycles.append(cycle)
    return cycles


def boundary_cycle(K: AbstractTriangulation) -> list[int]:
    """The single boundary cycle of a filling, as ``[0, 1, ..., n-1]``.

    Raises unless the boundary is one cycle on ``0..n-1`` in order (and
    matches ``boundary_n`` when that is set).
    """
    cycles = boundary(K)
    if len(cycles) != 1:
        raise BoundaryError(f"expected a single boundary cycle, found {len(cycles)}")
    cyc = cycles[0]
    n = len(cyc)
    if cyc != list(range(n)):
        raise BoundaryError("boundary cycle is not 0..n-1 in order")
    if K.boundary_n is not None and K.boundary_n != n:
        raise BoundaryError(f"boundary has length {n}, declared {K.boundary_n}")
    return cyc


def euler_characteristic(K: AbstractTriangulation) -> int:
    """|V| - |E| + |T|.

    An edge shared by 2j triangle sides counts as j edges; for a valid
    complex this is the ordinary distinct-edge count, and for the output of
    :func:`close_boundary` it counts the cap's edges separately from any
    chord they coincide with.
    """
    n_edges = sum((c + 1) // 2 for c in K.edge_counts.values())
    return K.num_vertices - n_edges + len(K.triangles)


def close_boundary(K: AbstractTriangulation) -> AbstractTriangulation:
    """Cap the boundary cycle with the fan of n-2 triangles from vertex 0.

    The result is a closed pseudo-surface: a fan triangle may repeat an
    existing triple and a fan diagonal may coincide with a chord, so it is
    not expected to pass :func:`validate`.
    """
    cycles = boundary(K)
    if len(cycles) != 1:
        raise BoundaryError(f"close_boundary needs a single boundary cycle, found {len(cycles)}")
    cyc = cycles[0]
    if len(cyc) < 3:
        raise BoundaryError("boundary cycle shorter than 3")
    apex = cyc[0]
    fan = [(apex, cyc[i], cyc[i + 1]) for i in range(1, len(cyc) - 1)]
    return AbstractTriangulation(K.num_vertices, list(K.triangles) + fan, None)


def is_connected(K: AbstractTriangulation) -> bool:
    used = sorted({v for t in K.triangles for v in t})
    return len(_components(K.num_vertices, K.adjacency, used)) <= 1


def relabel(K: AbstractTriangulation, mapping: Sequence[int]) -> AbstractTriangulation:
    """Apply ``v -> mapping[v]`` to every vertex."""
    return AbstractTriangulation(K.num_vertices, [[mapping[v] for v in t] for t in K.triangles], K.boundary_n)


# ---------------------------------------------------------------------------
# canonical form


def _dihedral_maps(n: int):
    for r in range(n):
        yield [(i + r) % n for i in range(n)]
    for r in range(n):
        yield [(r - i) % n for i in range(n)]


def _canonical_search(K: AbstractTriangulation, n: int):
    nv = K.num_vertices
    adj = K.adjacency
    tris = K.triangles
    best_code = None
    best_labels = None

    def finish(labels):
        nonlocal best_code, best_labels
        code = tuple(sorted(tuple(sorted(labels[v] for v in t)) for t in tris))
        if best_code is None or code < best_code:
            best_code = code
            best_labels = list(labels)

    def extend(labels, nxt):
        if nxt == nv:
            finish(labels)
            return
        sigs = {}
        frontier = False
        for u in range(n, nv):
            if labels[u] >= 0:
                continue
            lab = tuple(sorted(labels[w] for w in adj[u] if labels[w] >= 0))
            if lab:
                frontier = True
            sigs[u] = (lab, len(adj[u]))
        if frontier:
            sigs = {u: s for u, s in sigs.items() if s[0]}
        best = min(sigs.values())
        for u in sorted(u for u, s in sigs.items() if s == best):
            labels[u] = nxt
            extend(labels, nxt + 1)
            labels[u] = -1

    for g in _dihedral_maps(n):
        labels = g + [-1] * (nv - n)
        extend(labels, n)
    return best_code, best_labels


def canonical_labeling(K: AbstractTriangulation) -> tuple[bytes, AbstractTriangulation]:
    """Canonical form together with the complex relabelled into it."""
    n = K.boundary_n
    if n is None:
        raise FillingError("canonical_form needs boundary_n")
    code, labels = _canonical_search(K, n)
    text = f"n={n};V={K.num_vertices};" + ";".join(f"{a},{b},{c}" for a, b, c in code)
    return text.encode("ascii"), relabel(K, labels)


def canonical_form(K: AbstractTriangulation) -> bytes:
    """Byte string equal for two fillings of C_n exactly when one is obtained
    from the other by relabelling interior vertices and applying a
    rotation or reflection of the boundary cycle."""
    return canonical_labeling(K)[0]
