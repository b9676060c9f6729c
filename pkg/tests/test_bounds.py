import math
from fractions import Fraction

import pytest

from fillings import bounds
from fillings.errors import FillingError


def test_vertex_lower_bound_examples():
    assert bounds.vertex_lower_bound(9, 1) == (Fraction(12), 12)
    assert bounds.vertex_lower_bound(3, 1) == (Fraction(3, 2), 2)
    n = 10**5
    assert abs(bounds.vertex_lower_bound(n, 1).value / n**2 - Fraction(1, 8)) < 1e-4


def test_triangle_lower_bound_examples():
    assert bounds.triangle_lower_bound(9, 1, 2).value == 13
    assert bounds.triangle_lower_bound(3, 1, 2).value == -2


@pytest.mark.parametrize("n", [3, 4, 7, 12, 33])
@pytest.mark.parametrize("delta", ["1", "1/2", "2/3", "7/10"])
@pytest.mark.parametrize("chi", [2, 1, 0, -3])
def test_triangle_vertex_identity(n, delta, chi):
    v = bounds.vertex_lower_bound(n, delta).value
    t = bounds.triangle_lower_bound(n, delta, chi).value
    assert t == 2 * v - n + 2 - 2 * chi


def test_vertex_bound_monotone():
    deltas = [Fraction(k, 10) for k in range(1, 11)]
    for n in range(3, 40):
        row = [bounds.vertex_lower_bound(n, d).value for d in deltas]
        assert row == sorted(row)
        for d in deltas:
            assert bounds.vertex_lower_bound(n + 1, d).value >= bounds.vertex_lower_bound(n, d).value


def test_path_sum_bound():
    assert bounds.path_sum_bound(0) == 0
    assert bounds.path_sum_bound(1) == Fraction(3, 2)
    assert bounds.path_sum_bound(2) == 4
    with pytest.raises(FillingError):
        bounds.path_sum_bound(-1)


def test_continuous_area_bound():
    assert bounds.continuous_area_bound(1, 2 * math.pi) == pytest.approx(math.sqrt(3) / 4 * math.pi**2, abs=1e-12)
    assert bounds.continuous_area_bound(1, 1) == pytest.approx(0.10825317547305482, abs=1e-12)
    assert bounds.continuous_area_bound("1/1000", 1) < 1e-9


def test_dstar_constants():
    assert bounds.dstar_ratio(12, 9) == pytest.approx(0.148148, abs=1e-6)
    assert bounds.DSTAR_UPPER == pytest.approx(0.1838, abs=1e-4)
    assert bounds.DSTAR_LOWER == Fraction(1, 8)


def test_menger_floor():
    assert bounds.menger_path_floor(9, 1) == 3
    assert bounds.menger_path_floor(10, "1/2") == Fraction(3, 2)


@pytest.mark.parametrize(
    "call",
    [
        lambda: bounds.vertex_lower_bound(2, 1),
        lambda: bounds.vertex_lower_bound(5, 0),
        lambda: bounds.triangle_lower_bound(5, "3/2"),
        lambda: bounds.continuous_area_bound(1, 0),
    ],
)
def test_domain_errors(call):
    with pytest.raises(FillingError):
        call()


def test_path_sum_small_n_exhaustive():
    for n in range(4, 10):
        assert bounds.path_sum_violations(n) == []
