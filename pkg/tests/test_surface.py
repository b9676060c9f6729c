import math

import pytest

from fillings.errors import FillingError
from fillings.plmesh import presets
from fillings.plmesh.surface import PLSurface, heron_area, planar_corners, validate_surface


def test_two_glued_equilateral_triangles():
    M = PLSurface([[1, 1, 1], [1, 1, 1]], [[[0, 0], [1, 0]]])
    assert validate_surface(M).ok
    assert M.boundary_length == pytest.approx(4.0)
    assert len(M.boundary_curves()) == 1
    assert M.area == pytest.approx(math.sqrt(3) / 2)


def test_length_mismatch():
    M = PLSurface([[1, 1, 1], [2, 2, 2]], [[[0, 0], [1, 0]]])
    assert "length mismatch" in validate_surface(M).kinds()


def test_triangle_inequality():
    assert "triangle inequality" in validate_surface(PLSurface([[1, 2, 3.5]])).kinds()


@pytest.mark.parametrize(
    "tris, glu, kind",
    [
        ([[1, 1, 1]], [[[0, 0], [0, 0]]], "self gluing"),
        ([[1, 1, 1], [1, 1, 1], [1, 1, 1]], [[[0, 0], [1, 0]], [[0, 0], [2, 0]]], "side glued twice"),
        ([[1, 1, 1]], [[[0, 0], [3, 1]]], "bad side reference"),
        ([[1, 1, -1]], [], "nonpositive side"),
    ],
)
def test_other_surface_violations(tris, glu, kind):
    assert kind in validate_surface(PLSurface(tris, glu)).kinds()


def test_heron_examples():
    assert heron_area(3, 4, 5) == 6.0
    assert heron_area(1, 1, 1) == pytest.approx(math.sqrt(3) / 4, rel=1e-15)
    eps = 1e-3
    assert heron_area(eps, eps, eps) == pytest.approx(math.sqrt(3) / 4 * eps**2, rel=1e-12)
    with pytest.raises(FillingError):
        heron_area(1, 2, 3)


def test_heron_needle_is_stable():
    # naive Heron loses most digits here
    a, b = 1e8, 1e8
    c = 1e-3
    assert heron_area(a, b, c) == pytest.approx(0.5 * c * math.sqrt(a * a - c * c / 4), rel=1e-12)


def test_planar_corners():
    P = planar_corners(5, 4, 3)
    assert math.dist(P[0], P[1]) == pytest.approx(5)
    assert math.dist(P[1], P[2]) == pytest.approx(4)
    assert math.dist(P[2], P[0]) == pytest.approx(3)
    assert P[2][1] > 0


def test_json_round_trip():
    M = presets.flat_disk(6)
    again = PLSurface.loads(M.dumps())
    assert again.dumps() == M.dumps()
    with pytest.raises(FillingError):
        PLSurface.loads("{nope")


@pytest.mark.parametrize(
    "M, area, ell",
    [
        (presets.unit_square(), 1.0, 4.0),
        (presets.equilateral_triangle(2), math.sqrt(3), 6.0),
        (presets.flat_disk(8), 8 * 0.5 * math.sin(2 * math.pi / 8), 16 * math.sin(math.pi / 8)),
    ],
)
def test_presets(M, area, ell):
    assert validate_surface(M).ok
    assert M.area == pytest.approx(area, rel=1e-12)
    assert M.boundary_length == pytest.approx(ell, rel=1e-12)


def test_hemisphere_preset():
    M = presets.hemisphere(24, 3)
    assert validate_surface(M).ok
    assert M.boundary_length == pytest.approx(48 * math.sin(math.pi / 24), rel=1e-12)
    # chordal cap underestimates the sphere's 2 pi but not by much
    assert 0.9 * 2 * math.pi < M.area < 2 * math.pi
