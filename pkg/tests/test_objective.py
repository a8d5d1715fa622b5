import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from lpconsensus import NormSystem, PrincipleSpec, multi_objective, pnorm, psi, subgradient

from instances import SCALAR

INF = math.inf


def test_pnorm_examples():
    assert pnorm([3, 4], 2) == 5
    assert pnorm([3, 4], 1) == 7
    assert pnorm([3, 4], INF) == 4
    assert math.isclose(pnorm([3, 4], 3), 4.497941445275415, rel_tol=1e-14)
    assert pnorm([0, 0], 3) == 0


def test_pnorm_needs_p_at_least_one():
    with pytest.raises(ValueError):
        pnorm([1, 2], 0.5)


def test_pnorm_survives_large_entries():
    assert math.isclose(pnorm([1e200, 1e200], 4), 1e200 * 2 ** 0.25, rel_tol=1e-12)


def test_huge_p_is_max():
    assert pnorm([1, 3, 2], 1e7) == 3


vectors = arrays(float, st.integers(1, 1000), elements=st.floats(-1e3, 1e3))


@given(vectors, st.floats(1, 50), st.floats(1, 50))
def test_pnorm_non_increasing_in_p(r, p, q):
    p, q = min(p, q), max(p, q)
    assert pnorm(r, p) >= pnorm(r, q) * (1 - 1e-12)


@given(vectors)
def test_large_p_approaches_max(r):
    top = pnorm(r, INF)
    assert top <= pnorm(r, 500) * (1 + 1e-12)
    assert pnorm(r, 500) <= 1.015 * top + 1e-300


def test_multi_objective_examples():
    v = multi_objective([1], SCALAR, PrincipleSpec.single(1))
    assert v.total == 5
    v = multi_objective([2.5], SCALAR, PrincipleSpec.uniform([1, INF]))
    assert v.total == 9
    assert v.components == {1.0: 6.5, INF: 2.5}
    zero = NormSystem.from_points([1, 1], [[2], [2]])
    assert multi_objective([2], zero, PrincipleSpec.single(2)).total == 0


def test_subgradient_examples():
    assert subgradient([3], SCALAR, PrincipleSpec.single(1)).tolist() == [1]
    assert subgradient([2], SCALAR, PrincipleSpec.single(2)).tolist() == [0]
    assert subgradient([2.5], SCALAR, PrincipleSpec.single(INF)).tolist() == [0]
    zero = NormSystem.from_points([1], [[4]])
    for p in (1, 1.5, 2, INF):
        assert subgradient([4], zero, PrincipleSpec.single(p)).tolist() == [0]


def random_case(seed, interval=False):
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(1, 6)), int(rng.integers(1, 5))
    w = rng.uniform(0.1, 3, n)
    lo = rng.uniform(-5, 5, (n, d))
    hi = lo + (rng.uniform(0, 2, (n, d)) if interval else 0)
    ps = [p for p in (1, 1.5, 2, 3, INF) if rng.random() < 0.5] or [2]
    spec = PrincipleSpec(tuple(ps), tuple(rng.uniform(0.1, 2, len(ps))))
    return rng, NormSystem(w, lo, hi), spec


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10**9), st.booleans())
def test_subgradient_inequality(seed, interval):
    rng, sys, spec = random_case(seed, interval)
    x, y = rng.uniform(-6, 8, (2, sys.d))
    g = subgradient(x, sys, spec)
    fx = multi_objective(x, sys, spec).total
    fy = multi_objective(y, sys, spec).total
    assert fy >= fx + g @ (y - x) - 1e-9


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9), st.sampled_from([1.5, 2, 3, 6]))
def test_subgradient_matches_finite_differences(seed, p):
    rng = np.random.default_rng(seed)
    n, d = int(rng.integers(1, 6)), int(rng.integers(1, 5))
    sys = NormSystem.from_points(rng.uniform(0.1, 3, n), rng.uniform(-5, 5, (n, d)))
    spec = PrincipleSpec.single(p)
    x = rng.uniform(-5, 5, d)
    g = subgradient(x, sys, spec)
    h = 1e-6
    fd = np.array([
        (multi_objective(x + h * e, sys, spec).total - multi_objective(x - h * e, sys, spec).total) / (2 * h)
        for e in np.eye(d)
    ])
    np.testing.assert_allclose(g, fd, rtol=1e-4, atol=1e-4 * max(1.0, np.abs(fd).max()))


def test_psi_examples():
    assert psi([3.7]) == 0
    assert math.isclose(psi([1.3, 1.0]), 0.0225, rel_tol=1e-12)
    assert psi([5, 5, 5]) == 0
    assert psi({1: 2.0, 2: 4.0}) == 1.0
    with pytest.raises(ValueError):
        psi([])
