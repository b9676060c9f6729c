import math

import numpy as np
import pytest

from fillings.errors import MeshError
from fillings.plmesh.dirichlet import best_denominator, dirichlet_plan, distinct_lengths
from fillings.plmesh.presets import hemisphere, unit_square
from fillings.plmesh.surface import PLSurface

SQRT2 = math.sqrt(2.0)


def _dist_int(x):
    return abs(x - round(x))


def test_sqrt2_uses_a_convergent():
    plan = dirichlet_plan(PLSurface([[SQRT2] * 3]), 50)
    assert plan.m == 1
    assert plan.q in {1, 2, 5, 12, 29}
    # independent scan over every q <= 50
    scan = min(range(1, 51), key=lambda q: (_dist_int(q * SQRT2), q))
    assert plan.q == scan == 29
    assert plan.max_deviation <= 1 / (plan.q * 50)


def test_rational_lengths_are_exact():
    plan = dirichlet_plan(PLSurface([[0.75, 0.5, 0.5]]), 10)
    assert plan.q % 4 == 0
    assert plan.max_deviation == 0.0


def test_deviation_ratio_shrinks():
    for M in (unit_square(), hemisphere(8, 2)):
        ratios = []
        for k in (10, 100, 1000):
            plan = dirichlet_plan(M, k)
            ratios.append(plan.max_deviation / plan.epsilon)
        assert ratios[0] > ratios[1] > ratios[2]


@pytest.mark.parametrize("k", [10, 37, 200])
def test_plan_invariants(k):
    M = hemisphere(8, 2)
    plan = dirichlet_plan(M, k)
    L = math.ceil(k ** (1 / plan.m) / math.log(k))
    assert plan.L == L
    assert plan.epsilon == pytest.approx(1 / (plan.q * L))
    assert plan.max_deviation <= plan.deviation_bound + 1e-15
    assert plan.deviation_bound == pytest.approx(1 / (plan.q * k ** (1 / plan.m)))
    for e, edge in enumerate(M.edges):
        pos = plan.positions(e)
        assert len(pos) == plan.per_edge[e].count + 1
        assert pos[-1] == pytest.approx(edge.length, rel=1e-9)
        gaps = np.diff(pos)
        assert np.allclose(gaps[1:], plan.epsilon, rtol=0, atol=1e-12)
        assert abs(gaps[0] - plan.epsilon) <= plan.deviation_bound + 1e-12
        assert plan.interval_length(e, 0) == plan.per_edge[e].last


def test_best_denominator_is_optimal():
    alphas = [SQRT2, math.sqrt(3.0), math.pi]
    q, err = best_denominator(alphas, 200)
    ref = min(range(1, 201), key=lambda d: (max(_dist_int(d * a) for a in alphas), d))
    assert q == ref
    assert err == pytest.approx(max(_dist_int(q * a) for a in alphas))
    # Dirichlet: some q <= k beats k^(-1/m)
    assert err <= 200 ** (-1 / 3)


def test_distinct_lengths():
    assert distinct_lengths([1.0, 1.0 + 1e-12, 2.0, SQRT2]) == [1.0, SQRT2, 2.0]


def test_plan_rejects_small_k():
    with pytest.raises(MeshError):
        dirichlet_plan(unit_square(), 1)


def test_plan_to_dict():
    d = dirichlet_plan(unit_square(), 10).to_dict()
    assert d["q"] == 5 and d["L"] == 2 and d["epsilon"] == pytest.approx(0.1)
