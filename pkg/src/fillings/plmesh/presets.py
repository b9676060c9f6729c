"""Ready-made PL surfaces."""

from __future__ import annotations

import math

import numpy as np

from ..errors import FillingError
from .surface import PLSurface, from_embedding


def unit_square() -> PLSurface:
    """Two (1, 1, sqrt 2) triangles glued along the diagonal."""
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    return from_embedding(pts, [(0, 1, 2), (0, 2, 3)])


def equilateral_triangle(side: float = 1.0) -> PLSurface:
    return PLSurface([[side, side, side]])


def flat_disk(sectors: int = 16, radius: float = 1.0) -> PLSurface:
    """Fan of ``sectors`` isosceles triangles (radius, chord, radius) around
    the centre. Side 0 of every triangle is radial."""
    if sectors < 3:
        raise FillingError("a disk needs at least 3 sectors")
    chord = 2 * radius * math.sin(math.pi / sectors)
    tris = [[radius, chord, radius] for _ in range(sectors)]
    # side 2 of sector i runs rim -> centre and meets side 0 of sector i+1
    glu = [[[i, 2], [(i + 1) % sectors, 0]] for i in range(sectors)]
    return PLSurface(tris, glu)


def hemisphere(n: int, rings: int | None = None, radius: float = 1.0) -> PLSurface:
    """Latitude-longitude cap over a unit hemisphere: ``n`` points on each of
    ``rings`` latitude circles (the equator first) plus the pole, each quad
    split in two, with chordal side lengths. The boundary is the equatorial
    regular n-gon."""
    if n < 3:
        raise FillingError("hemisphere needs n >= 3")
    if rings is None:
        rings = max(1, round(n / 4))
    theta = 2 * math.pi * np.arange(n) / n
    pts = []
    for j in range(rings):
        phi = (math.pi / 2) * j / rings
        pts += [[radius * math.cos(phi) * math.cos(t), radius * math.cos(phi) * math.sin(t), radius * math.sin(phi)] for t in theta]
    pole = len(pts)
    pts.append([0.0, 0.0, radius])
    faces = []
    for j in range(rings - 1):
        for i in range(n):
            a, b = j * n + i, j * n + (i + 1) % n
            c, d = (j + 1) * n + (i + 1) % n, (j + 1) * n + i
            faces += [(a, b, c), (a, c, d)]
    top = (rings - 1) * n
    faces += [(top + i, top + (i + 1) % n, pole) for i in range(n)]
    return from_embedding(np.array(pts), faces)
