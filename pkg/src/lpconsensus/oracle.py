"""Reference solutions for checking the solver on small instances.

Nothing here shares code with the solver's objective or projection: norms
are evaluated directly and feasibility is enforced by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .model import FeasibleSet
from .problem import INF, NormSystem, PrincipleSpec, parse_principle

MAX_GRID_POINTS = 10**8


class CoordinateOptimum(NamedTuple):
    x: float
    value: float
    unique: bool = True


def _scalar_objective(x, v, w, p):
    a = w * np.abs(x - v)
    if p == INF:
        return float(a.max())
    return float(np.sum(a**p) ** (1.0 / p))


def coordinate_optimum(values: Sequence[float], weights: Sequence[float], p) -> CoordinateOptimum:
    """Minimize ``(sum_i w_i^p |x - v_i|^p)^(1/p)`` over the real line.

    p=1 gives the weighted median (the midpoint when the minimizers form an
    interval), p=2 the mean weighted by ``w^2``, p=inf the point balancing
    the worst weighted deviations; other p use ternary search.
    """
    v = np.asarray(values, dtype=float)
    w = np.asarray(weights, dtype=float)
    if v.size == 0:
        raise ValueError("coordinate_optimum needs at least one value")
    if v.shape != w.shape or np.any(w <= 0):
        raise ValueError("need one positive weight per value")
    p = parse_principle(p)

    if p == 1:
        order = np.argsort(v, kind="stable")
        vs, ws = v[order], w[order]
        half = math.fsum(ws) / 2
        cum = 0.0
        for i in range(len(vs)):
            cum = math.fsum(ws[: i + 1])
            if cum > half:
                x = vs[i]
                return CoordinateOptimum(float(x), _scalar_objective(x, v, w, 1), True)
            if cum == half:
                lo, hi = vs[i], vs[i + 1]
                x = 0.5 * (lo + hi)
                return CoordinateOptimum(float(x), _scalar_objective(x, v, w, 1), bool(lo == hi))
        raise AssertionError("unreachable")

    if p == 2:
        w2 = w**2
        x = float(np.sum(w2 * v) / np.sum(w2))
        return CoordinateOptimum(x, _scalar_objective(x, v, w, 2))

    if p == INF:
        # smallest t with max_i(v_i - t/w_i) <= min_i(v_i + t/w_i)
        lo_t, hi_t = 0.0, float(w.max() * (v.max() - v.min()))
        for _ in range(200):
            t = 0.5 * (lo_t + hi_t)
            if np.max(v - t / w) <= np.min(v + t / w):
                hi_t = t
            else:
                lo_t = t
            if hi_t - lo_t <= 1e-15 * max(1.0, hi_t):
                break
        x = float(0.5 * (np.max(v - hi_t / w) + np.min(v + hi_t / w)))
        return CoordinateOptimum(x, _scalar_objective(x, v, w, INF))

    a, b = float(v.min()), float(v.max())
    while b - a > 1e-12 * max(1.0, abs(a), abs(b)):
        m1 = a + (b - a) / 3
        m2 = b - (b - a) / 3
        if _scalar_objective(m1, v, w, p) <= _scalar_objective(m2, v, w, p):
            b = m2
        else:
            a = m1
    x = 0.5 * (a + b)
    return CoordinateOptimum(x, _scalar_objective(x, v, w, p))


@dataclass(frozen=True)
class GridSpec:
    """Grid step, and optional per-coordinate ranges (default: target hull within ``F``)."""

    step: float | None = None
    ranges: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.step is not None and not self.step > 0:
            raise ValueError("grid step must be positive")

    def resolved_step(self, d: int) -> float:
        if self.step is not None:
            return self.step
        return 1e-3 if d <= 2 else 1e-2


class GridResult(NamedTuple):
    x: np.ndarray
    value: float
    lipschitz: float
    bound: float
    points: int


def lipschitz_constant(sys: NormSystem, spec: PrincipleSpec) -> float:
    """``sum_p lambda_p (sum_i w_i^p)^(1/p)``, a Lipschitz constant w.r.t. ``||.||_1``."""
    w = sys.weights
    total = 0.0
    for p, lam in spec.items():
        total += lam * (float(w.max()) if p == INF else float(np.sum(w**p) ** (1.0 / p)))
    return total


def _batch_objective(X, sys: NormSystem, spec: PrincipleSpec) -> np.ndarray:
    Xe = X[:, None, :]
    gap = np.maximum(sys.lower[None] - Xe, 0.0) + np.maximum(Xe - sys.upper[None], 0.0)
    A = (sys.weights[None, :, None] * gap).reshape(X.shape[0], -1)
    out = np.zeros(X.shape[0])
    for p, lam in spec.items():
        if p == INF:
            out += lam * A.max(axis=1)
        elif p == 1:
            out += lam * A.sum(axis=1)
        else:
            out += lam * np.sum(A**p, axis=1) ** (1.0 / p)
    return out


def _axis(lo, hi, step):
    if lo == hi:
        return np.array([lo])
    count = int(math.ceil((hi - lo) / step - 1e-9)) + 1
    return np.linspace(lo, hi, count)


def grid_search(
    sys: NormSystem, F: FeasibleSet, spec: PrincipleSpec, grid: GridSpec | None = None
) -> GridResult:
    """Exhaustive search over a feasible grid (``d <= 3``).

    With a sum constraint the last coordinate is eliminated, so every
    evaluated point is exactly feasible. ``bound`` is
    ``lipschitz * step * sqrt(d)``.
    """
    grid = grid or GridSpec()
    d = sys.d
    if d > 3:
        raise ValueError(f"grid search supports d <= 3, got d = {d}")
    if F.d != d:
        raise ValueError("feasible set and system disagree on the dimension")
    step = grid.resolved_step(d)

    if grid.ranges is not None:
        if len(grid.ranges) != d:
            raise ValueError("one range per coordinate")
        lo = np.maximum(F.lo, [r[0] for r in grid.ranges])
        hi = np.minimum(F.hi, [r[1] for r in grid.ranges])
    else:
        lo = np.where(np.isfinite(F.lo), F.lo, sys.lower.min(axis=0))
        hi = np.where(np.isfinite(F.hi), F.hi, sys.upper.max(axis=0))
        if F.total is None:
            # the optimum lies in the target hull, clipped to the box
            lo = np.clip(sys.lower.min(axis=0), F.lo, F.hi)
            hi = np.clip(sys.upper.max(axis=0), F.lo, F.hi)
    if np.any(lo > hi):
        raise ValueError("empty search range")

    eliminate = F.total is not None and d >= 1
    axes_n = d - 1 if eliminate else d
    axes = [_axis(float(lo[c]), float(hi[c]), step) for c in range(axes_n)]
    size = int(np.prod([len(a) for a in axes])) if axes else 1
    if size > MAX_GRID_POINTS:
        raise ValueError(f"grid has {size} points, above the {MAX_GRID_POINTS} guard")

    if axes:
        mesh = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.reshape(-1) for g in mesh], axis=1)
    else:
        pts = np.zeros((1, 0))
    if eliminate:
        last = F.total - pts.sum(axis=1)
        ok = (last >= lo[-1] - 1e-9) & (last <= hi[-1] + 1e-9)
        pts = np.column_stack([pts[ok], np.clip(last[ok], lo[-1], hi[-1])])
    if pts.shape[0] == 0:
        raise ValueError("no feasible grid point")

    best_val = math.inf
    best_x = None
    chunk = 200_000
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        vals = _batch_objective(block, sys, spec)
        i = int(np.argmin(vals))  # first index wins ties
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_x = block[i].copy()
    L = lipschitz_constant(sys, spec)
    return GridResult(best_x, best_val, L, L * step * math.sqrt(d), int(pts.shape[0]))
