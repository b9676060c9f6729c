"""Exhaustive search for small Lipschitz fillings of C_n.

Fillings are grown from the boundary cycle: an edge that still needs a
triangle (a cycle edge with none, any other edge with one) is closed by
choosing the third vertex. Interior vertices are introduced in index order,
which removes relabelling symmetry inside the tree; the remaining
dihedral duplicates are dropped through :func:`canonical_form`.

With a Lipschitz threshold the growth is pruned as soon as the partial
skeleton already brings two boundary vertices too close, since adding
triangles can only shorten distances.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .bounds import vertex_lower_bound
from .complex import AbstractTriangulation, canonical_labeling, validate
from .errors import BudgetExceeded, FillingError, InvariantError
from .metrics import as_fraction, is_delta_filling

log = logging.getLogger(__name__)

_FAR = 10**6


class _Budget:
    def __init__(self, nodes: int | None = None, seconds: float | None = None):
        self.max_nodes = nodes
        self.max_seconds = seconds
        self.nodes = 0
        self.start = time.monotonic()

    def tick(self) -> None:
        self.nodes += 1
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exhausted", self.nodes, self.elapsed())
        if self.max_seconds is not None and (self.nodes & 1023) == 0 and self.elapsed() > self.max_seconds:
            raise BudgetExceeded(f"time budget {self.max_seconds}s exhausted", self.nodes, self.elapsed())

    def elapsed(self) -> float:
        return time.monotonic() - self.start


def _required_distances(n: int, delta: Fraction | None) -> np.ndarray | None:
    if delta is None:
        return None
    idx = np.arange(n)
    dc = np.abs(idx[:, None] - idx[None, :])
    dc = np.minimum(dc, n - dc)
    return np.array([[math.ceil(delta * int(d)) for d in row] for row in dc], dtype=np.int64)


class _Grower:
    """Depth-first growth of fillings of C_n on exactly ``V`` vertices."""

    def __init__(self, n: int, V: int, need: np.ndarray | None, budget: _Budget, detached: bool = False):
        self.n, self.V = n, V
        self.need = need
        self.budget = budget
        self.detached = detached
        self.cap = [[2] * V for _ in range(V)]
        for i in range(n):
            a, b = i, (i + 1) % n
            self.cap[a][b] = self.cap[b][a] = 1
        self.cnt = [[0] * V for _ in range(V)]
        self.tris: list[tuple[int, int, int]] = []
        self.tri_set: set[tuple[int, int, int]] = set()
        self.open: set[tuple[int, int]] = {(min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)}
        self.fresh = n
        if need is not None:
            D = np.full((V, V), _FAR, dtype=np.int64)
            np.fill_diagonal(D, 0)
            for i in range(n):
                j = (i + 1) % n
                D[i, j] = D[j, i] = 1
            # the cycle edges are present from the start
            for k in range(V):
                D = np.minimum(D, D[:, k, None] + D[None, k, :])
            self.D = D
        else:
            self.D = None

    # candidate third vertices for an open edge, by edge capacity only
    def _candidates(self, a: int, b: int) -> list[int]:
        cnt, cap = self.cnt, self.cap
        top = min(self.fresh + 1, self.V)
        out = []
        for w in range(top):
            if w == a or w == b:
                continue
            if cnt[a][w] >= cap[a][w] or cnt[b][w] >= cap[b][w]:
                continue
            if tuple(sorted((a, b, w))) in self.tri_set:
                continue
            out.append(w)
        return out

    def _choose(self):
        best = None
        for e in sorted(self.open):
            c = self._candidates(*e)
            if best is None or len(c) < len(best[1]):
                best = (e, c)
                if not c:
                    break
        return best

    def _add(self, t):
        a, b, c = t
        new_edges = []
        for u, v in ((a, b), (b, c), (a, c)):
            if self.cnt[u][v] == 0:
                new_edges.append((u, v))
            self.cnt[u][v] += 1
            self.cnt[v][u] += 1
            k = self.cnt[u][v]
            e = (u, v)
            if k == self.cap[u][v]:
                self.open.discard(e)
            elif k == 1:
                self.open.add(e)
        self.tris.append(t)
        self.tri_set.add(t)
        if max(t) == self.fresh:
            self.fresh += 1
        return new_edges

    def _remove(self, t, prev_fresh):
        a, b, c = t
        for u, v in ((a, b), (b, c), (a, c)):
            self.cnt[u][v] -= 1
            self.cnt[v][u] -= 1
            k = self.cnt[u][v]
            e = (u, v)
            if self.cap[u][v] == 1:
                if k == 0:
                    self.open.add(e)
            elif k == 1:
                self.open.add(e)
            else:
                self.open.discard(e)
        self.tris.pop()
        self.tri_set.discard(t)
        self.fresh = prev_fresh

    def _distances_ok(self, new_edges) -> tuple[bool, np.ndarray | None]:
        if self.D is None or not new_edges:
            return True, None
        D = self.D
        for u, w in new_edges:
            D = np.minimum(D, np.minimum(D[:, u, None] + 1 + D[None, w, :], D[:, w, None] + 1 + D[None, u, :]))
        n = self.n
        return not bool((D[:n, :n] < self.need).any()), D

    def _place(self, t):
        """Add triangle ``t``; return undo info or None if it prunes."""
        self.budget.tick()
        prev_fresh = self.fresh
        new_edges = self._add(t)
        ok, D = self._distances_ok(new_edges)
        if not ok:
            self._remove(t, prev_fresh)
            return None
        prev_D = self.D
        if D is not None:
            self.D = D
        return prev_fresh, prev_D

    def _undo(self, t, info):
        prev_fresh, prev_D = info
        self._remove(t, prev_fresh)
        self.D = prev_D

    def root_choices(self) -> list[tuple[int, int, int]]:
        e, cands = self._choose()
        return [tuple(sorted((e[0], e[1], w))) for w in cands]

    def run(self, root: tuple[int, int, int] | None = None) -> Iterator[list[tuple[int, int, int]]]:
        if root is None:
            yield from self._grow(None)
            return
        info = self._place(root)
        if info is None:
            return
        yield from self._grow(None)
        self._undo(root, info)

    def _grow(self, last_seed) -> Iterator[list[tuple[int, int, int]]]:
        if not self.open:
            if self.fresh == self.V:
                yield list(self.tris)
            if self.detached:
                yield from self._seed(last_seed)
            return
        e, cands = self._choose()
        for w in cands:
            t = tuple(sorted((e[0], e[1], w)))
            info = self._place(t)
            if info is None:
                continue
            yield from self._grow(last_seed)
            self._undo(t, info)

    def _seed(self, last_seed) -> Iterator[list[tuple[int, int, int]]]:
        # start a further component: a triangle none of whose edges is used yet
        top = min(self.fresh + 3, self.V)
        cnt = self.cnt
        for a in range(top):
            for b in range(a + 1, top):
                if cnt[a][b]:
                    continue
                for c in range(b + 1, top):
                    if cnt[a][c] or cnt[b][c]:
                        continue
                    t = (a, b, c)
                    if last_seed is not None and t <= last_seed:
                        continue
                    fresh_used = [v for v in t if v >= self.fresh]
                    if fresh_used != list(range(self.fresh, self.fresh + len(fresh_used))):
                        continue
                    prev_fresh = self.fresh
                    self.budget.tick()
                    new_edges = self._add(t)
                    self.fresh = max(self.fresh, max(t) + 1)
                    ok, D = self._distances_ok(new_edges)
                    if ok:
                        prev_D = self.D
                        if D is not None:
                            self.D = D
                        yield from self._grow(t)
                        self.D = prev_D
                    self._remove(t, prev_fresh)


def wheel(n: int) -> AbstractTriangulation:
    """C_n coned off to one apex (vertex n)."""
    if n < 3:
        raise FillingError("wheel needs n >= 3")
    return AbstractTriangulation(n + 1, [(i, (i + 1) % n, n) for i in range(n)], n)


def enumerate_fillings(
    n: int,
    max_vertices: int,
    *,
    budget_nodes: int | None = None,
    budget_seconds: float | None = None,
    detached: bool = False,
) -> Iterator[AbstractTriangulation]:
    """Every filling of C_n with at most ``max_vertices`` vertices, one per
    isomorphism class, in canonical labelling.

    By default only complexes whose triangles are all reachable from the
    boundary through shared edges are produced; ``detached=True`` also
    grows further components (closed pieces, possibly pinched onto the
    rest). Raises :class:`BudgetExceeded` after whatever was already
    yielded if the budget runs out.
    """
    if n < 3:
        raise FillingError("n must be at least 3")
    if max_vertices < n:
        raise FillingError("max_vertices must be at least n")
    budget = _Budget(budget_nodes, budget_seconds)
    for V in range(n, max_vertices + 1):
        seen: set[bytes] = set()
        for tris in _Grower(n, V, None, budget, detached).run():
            code, K = canonical_labeling(AbstractTriangulation(V, tris, n))
            if code not in seen:
                seen.add(code)
                yield K


@dataclass
class SearchResult:
    n: int
    epsilon: Fraction
    d_value: int | None
    witness: AbstractTriangulation | None
    nodes_explored: int
    proof_of_minimality: bool
    lower_bound: int
    levels: list[dict] = field(default_factory=list)
    budget_nodes: int | None = None
    budget_seconds: float | None = None
    exhausted_budget: bool = False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "epsilon": [self.epsilon.numerator, self.epsilon.denominator],
            "d_value": self.d_value,
            "witness": None if self.witness is None else self.witness.to_dict(),
            "nodes_explored": self.nodes_explored,
            "proof_of_minimality": self.proof_of_minimality,
            "lower_bound": self.lower_bound,
            "levels": self.levels,
            "budget": {"nodes": self.budget_nodes, "seconds": self.budget_seconds},
            "budget_exhausted": self.exhausted_budget,
        }


def _branch_worker(args):
    n, V, need, root, nodes = args
    budget = _Budget(nodes, None)
    grower = _Grower(n, V, need, budget)
    try:
        found = next(grower.run(root), None)
    except BudgetExceeded:
        return None, budget.nodes, True
    return found, budget.nodes, False


def _search_level(n, V, need, budget: _Budget, threads: int):
    """First filling at level V in depth-first order, or None if exhausted."""
    if threads <= 1:
        return next(_Grower(n, V, need, budget).run(), None)
    roots = _Grower(n, V, need, _Budget()).root_choices()
    remaining = None if budget.max_nodes is None else budget.max_nodes - budget.nodes
    with ProcessPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(_branch_worker, [(n, V, need, r, remaining) for r in roots]))
    # replay the sequential order so node counts match a single-threaded run
    for found, nodes, over in results:
        budget.nodes += nodes
        if budget.max_nodes is not None and budget.nodes > budget.max_nodes or over:
            raise BudgetExceeded(f"node budget {budget.max_nodes} exhausted", budget.nodes, budget.elapsed())
        if found is not None:
            return found
    return None


def compute_D(
    n: int,
    epsilon=0,
    *,
    budget_nodes: int | None = 10**7,
    budget_seconds: float | None = None,
    threads: int = 1,
    use_floor: bool = True,
    max_vertices: int | None = None,
) -> SearchResult:
    """Minimum vertex count of a (1 - epsilon)-Lipschitz filling of C_n.

    Levels are searched in increasing vertex count starting from the
    ceiling of :func:`vertex_lower_bound` (or from n when ``use_floor`` is
    false). The first feasible level is the answer; ``proof_of_minimality``
    says every lower level was exhausted.
    """
    if n < 3:
        raise FillingError("n must be at least 3")
    eps = as_fraction(epsilon)
    if not (0 <= eps < 1):
        raise FillingError(f"epsilon must lie in [0, 1), got {eps}")
    delta = 1 - eps
    need = _required_distances(n, delta)
    floor = vertex_lower_bound(n, delta).ceiling
    start = max(n, floor) if use_floor else n
    budget = _Budget(budget_nodes, budget_seconds)
    result = SearchResult(n, eps, None, None, 0, False, start, budget_nodes=budget_nodes, budget_seconds=budget_seconds)
    V = start
    while max_vertices is None or V <= max_vertices:
        before = budget.nodes
        try:
            tris = _search_level(n, V, need, budget, threads)
        except BudgetExceeded:
            result.levels.append({"vertices": V, "nodes": budget.nodes - before, "complete": False})
            result.nodes_explored = budget.nodes
            result.lower_bound = V
            result.exhausted_budget = True
            log.info("budget exhausted at level %d after %d nodes", V, budget.nodes)
            return result
        result.levels.append({"vertices": V, "nodes": budget.nodes - before, "complete": tris is None})
        log.info("level %d: %s after %d nodes", V, "found" if tris else "none", budget.nodes)
        if tris is not None:
            _, witness = canonical_labeling(AbstractTriangulation(V, tris, n))
            if not validate(witness).ok or not is_delta_filling(witness, delta):
                raise InvariantError("search produced an invalid witness")
            result.d_value = V
            result.witness = witness
            result.lower_bound = V
            result.proof_of_minimality = True
            result.nodes_explored = budget.nodes
            return result
        V += 1
        result.lower_bound = V
    result.nodes_explored = budget.nodes
    return result


def discretized_hemisphere(n: int, rings: int | None = None, k: int | None = None):
    """Balanced triangulation of a PL unit hemisphere whose boundary is the
    regular n-gon, as a filling of its own boundary cycle.

    The cap has ``rings`` latitude circles (default about n/16, at least 2).
    Without ``k`` the mesh step is chosen near 1/16 of the n-gon's side and
    at most 1/40. The boundary cycle of the result is much longer than n.
    Returns (complex, LipschitzReport).
    """
    from .plmesh.pipeline import balanced_triangulation, k_for_epsilon
    from .plmesh.presets import hemisphere
    from .metrics import lipschitz_constant

    if n < 6:
        raise FillingError(f"discretized_hemisphere needs n >= 6, got {n}")
    if rings is None:
        rings = max(2, round(n / 16))
    M = hemisphere(n, rings)
    if k is None:
        k = k_for_epsilon(M, min(2 * math.sin(math.pi / n) / 16, 1 / 40))
    K = balanced_triangulation(M, k).complex
    return K, lipschitz_constant(K)
