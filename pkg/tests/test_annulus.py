import math

import numpy as np
import pytest

from fillings.errors import MeshError
from fillings.plmesh.annulus import (
    TieError,
    annulus_triangulate,
    cdt_triangulation,
    crossing_pairs,
    ear_clip,
    matching_triangulation,
    signed_area,
)
from fillings.plmesh.grid import grid_fill
from fillings.plmesh.surface import heron_area, planar_corners


def _outer(sides, eps):
    """Subdivision points of T's boundary, CCW, about eps apart."""
    corners = planar_corners(*sides)
    pts = []
    for s in range(3):
        a, b = corners[s], corners[(s + 1) % 3]
        k = max(1, round(math.dist(a, b) / eps))
        pts += [a + (b - a) * i / k for i in range(k)]
    return np.array(pts)


def _setup(sides, eps):
    patch = grid_fill(sides, eps)
    return _outer(sides, eps), patch.points[patch.boundary], patch


def _segments(tris):
    return sorted({tuple(sorted((t[s], t[(s + 1) % 3]))) for t in tris for s in range(3)})


CASES = [((1, 1, 1), 0.1), ((3, 4, 5), 0.25), ((1, 1.2, 0.9), 0.07), ((2, 1.5, 1.5), 0.1)]


@pytest.mark.parametrize("sides, eps", CASES)
def test_no_crossings_and_full_cover(sides, eps):
    outer, inner, patch = _setup(sides, eps)
    res = annulus_triangulate(outer, inner)
    pts = np.vstack([outer, inner])
    assert crossing_pairs(pts, _segments(res.triangles)) == []
    area = sum(abs(signed_area(pts[list(t)])) for t in res.triangles)
    assert area + patch.area == pytest.approx(heron_area(*sides), rel=1e-9)


@pytest.mark.parametrize("sides, eps", CASES)
def test_triangle_count(sides, eps):
    outer, inner, _ = _setup(sides, eps)
    res = annulus_triangulate(outer, inner)
    # an annulus triangulated without new vertices has exactly m + p triangles
    assert len(res.triangles) == len(outer) + len(inner)
    assert len(res.triangles) <= 2 * len(outer) + len(inner)


@pytest.mark.parametrize("sides, eps", CASES)
def test_quad_diagonals(sides, eps):
    outer, inner, _ = _setup(sides, eps)
    res = annulus_triangulate(outer, inner)
    for diag, sides_sum in res.diagonals:
        assert diag <= sides_sum
    assert res.max_edge < 4 * eps


def test_matching_on_equilateral():
    outer, inner, _ = _setup((1, 1, 1), 0.1)
    res = matching_triangulation(outer, inner)
    assert res.method == "matching" and res.quads > 0


def test_empty_patch_uses_ears():
    outer = _outer((1, 1, 1), 0.4)
    res = annulus_triangulate(outer, np.zeros((0, 2)))
    assert res.method == "ears"
    assert len(res.triangles) == len(outer) - 2
    diam = 1.0
    assert res.max_edge <= diam + 1e-12
    # collinear side points never form a zero-area ear
    assert min(abs(signed_area(outer[list(t)])) for t in res.triangles) > 1e-6


def test_ear_clip_square():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1]], dtype=float)
    tris = ear_clip(pts, [0, 1, 2, 3])
    assert len(tris) == 2
    assert sum(abs(signed_area(pts[list(t)])) for t in tris) == pytest.approx(1.0)


def test_cdt_agrees_on_area():
    outer, inner, patch = _setup((3, 4, 5), 0.25)
    res = cdt_triangulation(outer, inner)
    pts = np.vstack([outer, inner])
    area = sum(abs(signed_area(pts[list(t)])) for t in res.triangles)
    assert area + patch.area == pytest.approx(6.0, rel=1e-9)
    assert crossing_pairs(pts, _segments(res.triangles)) == []


def test_crossing_oracle():
    pts = np.array([[0, 0], [2, 2], [0, 2], [2, 0], [1, 1], [3, 3]], dtype=float)
    assert crossing_pairs(pts, [(0, 1), (2, 3)]) == [(0, 1)]
    assert crossing_pairs(pts, [(0, 2), (2, 1)]) == []
    # collinear overlap through a shared endpoint
    assert crossing_pairs(pts, [(0, 1), (0, 4)]) == [(0, 1)]
    # endpoint touching the middle of another segment
    assert crossing_pairs(pts, [(0, 1), (4, 2)]) == [(0, 1)]


def test_tie_is_detected():
    # the inner point sits exactly between two outer points
    outer = np.array([[0, 0], [2, 0], [2, 2], [0, 2]], dtype=float)
    inner = np.array([[0.8, 0.7], [1.3, 0.8], [0.9, 1.2]])
    inner_tie = np.array([[1.0, 0.5], [1.2, 0.7], [0.8, 0.7]])
    annulus_triangulate(outer, inner)
    with pytest.raises(TieError):
        annulus_triangulate(outer, inner_tie)


def test_rejects_tiny_outer():
    with pytest.raises(MeshError):
        annulus_triangulate(np.zeros((2, 2)), np.zeros((0, 2)))
