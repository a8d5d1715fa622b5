import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lpconsensus import FeasibleSet, GridSpec, NormSystem, PrincipleSpec, coordinate_optimum, grid_search
from lpconsensus.oracle import lipschitz_constant

from instances import INF, SCALAR, random_point_system

FREE1 = FeasibleSet.unconstrained(1)


def test_coordinate_optimum_examples():
    ones = [1, 1, 1]
    assert coordinate_optimum([0, 1, 5], ones, 1) == (1, 5, True)
    x, v, unique = coordinate_optimum([0, 1, 5], ones, 2)
    assert x == 2 and math.isclose(v, math.sqrt(14), rel_tol=1e-15) and unique
    x, v, _ = coordinate_optimum([0, 1, 5], ones, INF)
    assert math.isclose(x, 2.5, abs_tol=1e-12) and math.isclose(v, 2.5, abs_tol=1e-12)
    assert coordinate_optimum([1, 3], [1, 1], 1) == (2, 2, False)


def test_coordinate_optimum_weighted_minimax():
    # 2|x| = |x - 3| at x = 1
    x, v, _ = coordinate_optimum([0, 3], [2, 1], INF)
    assert math.isclose(x, 1, abs_tol=1e-12) and math.isclose(v, 2, abs_tol=1e-12)


def test_coordinate_optimum_errors():
    with pytest.raises(ValueError):
        coordinate_optimum([], [], 2)
    with pytest.raises(ValueError):
        coordinate_optimum([1, 2], [1, 0], 2)


@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0.01, 3)), min_size=1, max_size=8))
def test_two_norm_oracle_is_weighted_mean(pairs):
    v = np.array([a for a, _ in pairs])
    w = np.array([b for _, b in pairs])
    x = coordinate_optimum(v, w, 2).x
    expected = np.sum(w**2 * v) / np.sum(w**2)
    assert abs(x - expected) <= 1e-12 * max(1.0, abs(expected))


def test_grid_examples():
    r = grid_search(SCALAR, FREE1, PrincipleSpec.uniform([1, INF]), GridSpec(1e-3))
    assert abs(r.value - 9) <= 0.004
    r = grid_search(SCALAR, FREE1, PrincipleSpec.single(1), GridSpec(1e-3))
    assert abs(r.value - 5) <= 0.003


def test_borda_two_grid_is_a_segment():
    sys = NormSystem.from_points([1, 2], [[2, 1], [1.2, 1.8]])
    r = grid_search(sys, FeasibleSet.borda(2), PrincipleSpec.single(2), GridSpec(1e-3))
    assert r.points == 1001
    assert 1 <= r.x[0] <= 2 and r.x.sum() == 3


def test_lipschitz_constant():
    spec = PrincipleSpec((1, 2, INF), (1, 2, 3))
    sys = NormSystem.from_points([1, 2], [[0], [1]])
    assert math.isclose(lipschitz_constant(sys, spec), 3 + 2 * math.sqrt(5) + 3 * 2)


def test_grid_limits():
    sys = NormSystem.from_points([1], [[0, 0, 0, 0]])
    with pytest.raises(ValueError, match="d <= 3"):
        grid_search(sys, FeasibleSet.unconstrained(4), PrincipleSpec.single(1))
    wide = NormSystem.from_points([1, 1], [[0, 0, 0], [1e3, 1e3, 1e3]])
    with pytest.raises(ValueError, match="guard"):
        grid_search(wide, FeasibleSet.unconstrained(3), PrincipleSpec.single(1), GridSpec(1e-2))


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([1, 1.5, 2, 3, INF]))
def test_coordinate_optimum_agrees_with_grid(seed, p):
    rng = np.random.default_rng(seed)
    sys, F = random_point_system(rng)
    exact = coordinate_optimum(sys.targets[:, 0], sys.weights, p)
    grid = grid_search(sys, F, PrincipleSpec.single(p), GridSpec(1e-3))
    assert exact.value <= grid.value + 1e-12
    assert grid.value - exact.value <= grid.bound


def test_oracles_are_deterministic():
    rng = np.random.default_rng(4)
    sys, F = random_point_system(rng, d=2)
    spec = PrincipleSpec.uniform([1, INF])
    a, b = grid_search(sys, F, spec, GridSpec(1e-2)), grid_search(sys, F, spec, GridSpec(1e-2))
    assert np.array_equal(a.x, b.x) and a.value == b.value
    assert coordinate_optimum([3, 1, 4], [1, 2, 1], 3) == coordinate_optimum([3, 1, 4], [1, 2, 1], 3)
