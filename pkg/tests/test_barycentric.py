import math

import numpy as np
import pytest

from fillings.errors import MeshError
from fillings.plmesh.annulus import signed_area
from fillings.plmesh.barycentric import edge_lengths, partial_barycentric, refine_until

PTS = np.array([[0, 0], [1, 0], [0.3, 0.8], [1.2, 0.9]], dtype=float)
TRIS = [(0, 1, 2), (1, 3, 2)]


def _area(pts, tris):
    return sum(signed_area(pts[list(t)]) for t in tris)


def test_full_subdivision():
    pts, tris = partial_barycentric(PTS, TRIS)
    assert len(tris) == 12
    assert _area(pts, tris) == pytest.approx(_area(PTS, TRIS))
    # orientation kept
    assert all(signed_area(pts[list(t)]) > 0 for t in tris)


def test_one_protected_edge_per_triangle():
    pts, tris = partial_barycentric(PTS, TRIS, protected=[(0, 1), (1, 3)])
    assert len(tris) == 10


@pytest.mark.parametrize("p", [0, 1, 2, 3])
def test_six_minus_p(p):
    tri = [(0, 1, 2)]
    prot = [(0, 1), (1, 2), (2, 0)][:p]
    _, tris = partial_barycentric(PTS[:3], tri, protected=prot)
    assert len(tris) == 6 - p


def test_edge_bound():
    pts, tris = partial_barycentric(PTS, TRIS, protected=[(0, 1)])
    old = edge_lengths(PTS, TRIS)
    new = edge_lengths(pts, tris)
    assert max(new.values()) <= max(old[(0, 1)], 2 / 3 * max(old.values())) + 1e-12
    assert len(tris) <= 6 * len(TRIS)


def test_mixed_refinement_rejected():
    with pytest.raises(MeshError) as info:
        partial_barycentric(PTS, TRIS, refine=[0])
    assert info.value.stage == "partial_barycentric"
    # protecting the shared edge makes it legal
    pts, tris = partial_barycentric(PTS, TRIS, protected=[(1, 2)], refine=[0])
    assert len(tris) == 5 + 1


def test_refine_until_reaches_target():
    pts = np.array([[0, 0], [1, 0], [0.5, 0.9]], dtype=float) * 3
    tris = [(0, 1, 2)]
    prot = [(0, 1), (1, 2), (2, 0)]
    target = 0.4
    C = max(edge_lengths(pts, tris).values()) / target
    out, otris, rounds = refine_until(pts, tris, [], target)
    assert max(edge_lengths(out, otris).values()) <= target
    assert rounds <= math.ceil(math.log(2 * C, 1.5))
    out, otris, rounds = refine_until(pts, tris, prot, target)
    long = {e for e, d in edge_lengths(out, otris).items() if d > target}
    # only the protected originals stay long
    assert {tuple(sorted(p)) for p in prot} >= long


def test_refine_until_gives_up():
    pts = np.array([[0, 0], [1, 0], [0.5, 0.9]], dtype=float)
    with pytest.raises(MeshError):
        refine_until(pts, [(0, 1, 2)], [], 1e-6, max_rounds=2)
