"""Projected subgradient solver for single, multi and re-weighted norm problems.

The objective is convex and nonsmooth (p=1 and p=inf terms are piecewise
linear). Each iteration takes a Polyak step toward a target level
``f_best - delta`` and projects back onto the feasible set. ``delta`` grows
when the target is reached and shrinks after ``patience`` iterations
without enough descent, so no knowledge of the optimum is needed. A stall
window with no progress cuts ``delta`` sharply instead of stopping; the
status ``stalled-at-tolerance`` belongs to the diminishing step rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .model import FeasibleSet
from .objective import ObjectiveValue, multi_objective, psi, value_and_subgradient
from .problem import NormSystem, PrincipleSpec, parse_principle, principle_label, unvectorize

CONVERGED = "converged"
MAX_ITER = "max-iter"
STALLED = "stalled-at-tolerance"

STALL_CUT = 1e-2


class NonConvergenceWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class SolveOptions:
    """Solver knobs. ``step_constant`` scales every step (Polyak relaxation
    for the level rule, ``c`` in ``c * R0 / (||g|| sqrt(k))`` for the
    diminishing rule).

    ``patience`` and ``level_shrink`` left at ``None`` depend on the number of
    free coordinates: with several of them the projection couples the
    coordinates and the target level has to shrink more slowly, or the
    iterates can freeze at a kink short of the optimum.
    """

    tol: float = 1e-8
    max_iter: int = 200_000
    stall_window: int = 5_000
    step_constant: float = 1.0
    step_rule: str = "level"
    patience: int | None = None
    level_shrink: float | None = None
    level_grow: float = 1.5

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.stall_window < 1:
            raise ValueError("stall_window must be at least 1")
        if not self.step_constant > 0:
            raise ValueError("step_constant must be positive")
        if self.step_rule not in ("level", "diminishing"):
            raise ValueError(f"unknown step rule {self.step_rule!r}")
        if (self.level_shrink is not None and not 0 < self.level_shrink < 1) or self.level_grow < 1:
            raise ValueError("need 0 < level_shrink < 1 <= level_grow")

    def to_dict(self) -> dict:
        return {
            "tol": self.tol,
            "max_iter": self.max_iter,
            "stall_window": self.stall_window,
            "step_constant": self.step_constant,
            "step_rule": self.step_rule,
            "patience": self.patience,
            "level_shrink": self.level_shrink,
            "level_grow": self.level_grow,
        }


@dataclass(frozen=True, eq=False)
class Solution:
    x: np.ndarray
    objective: ObjectiveValue
    lambda_used: dict[float, float]
    psi: float
    iterations: int
    status: str
    eta: dict[float, float] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()
    m: int | None = None
    matrix_mode: bool = False

    @property
    def consensus(self) -> np.ndarray:
        """``x`` reshaped to the consensus matrix in matrix mode."""
        return unvectorize(self.x) if self.matrix_mode else self.x

    @property
    def principles(self) -> tuple[float, ...]:
        return tuple(self.lambda_used)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED

    def to_dict(self) -> dict:
        def lab(d):
            return {principle_label(p): v for p, v in d.items()}

        return {
            "consensus": self.consensus.tolist(),
            "objective": self.objective.total,
            "components": lab(self.objective.components),
            "raw_norms": lab(self.objective.raw_norms),
            "eta": lab(self.eta),
            "lambda_used": lab(self.lambda_used),
            "psi": self.psi,
            "status": self.status,
            "iterations": self.iterations,
            "warnings": list(self.warnings),
            "m": self.m,
            "matrix_mode": self.matrix_mode,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "Solution":
        def unlab(d):
            return {parse_principle(k): float(v) for k, v in d.items()}

        comps = unlab(doc["components"])
        return cls(
            x=np.asarray(doc["consensus"], dtype=float).reshape(-1),
            objective=ObjectiveValue(float(doc["objective"]), comps, unlab(doc["raw_norms"])),
            lambda_used=unlab(doc["lambda_used"]),
            psi=float(doc["psi"]),
            iterations=int(doc["iterations"]),
            status=doc["status"],
            eta=unlab(doc["eta"]),
            warnings=tuple(doc.get("warnings", ())),
            m=doc.get("m"),
            matrix_mode=bool(doc.get("matrix_mode", False)),
        )

    def __eq__(self, other):
        return isinstance(other, Solution) and self.to_dict() == other.to_dict()


def project(x, F: FeasibleSet) -> np.ndarray:
    """Euclidean projection onto ``F``.

    Boxes are a clamp. With a sum constraint the answer is
    ``clip(x - mu, lo, hi)`` for the scalar ``mu`` matching the sum. The sum
    is piecewise linear in ``mu`` with kinks at ``x - hi`` and ``x - lo``, so
    bisection runs over the sorted kinks and ``mu`` is then solved exactly on
    the linear piece that contains it.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != F.lo.shape:
        raise ValueError(f"x has shape {x.shape}, feasible set has dimension {F.d}")
    if F.total is None:
        return np.clip(x, F.lo, F.hi)
    lo, hi, total = F.lo, F.hi, F.total

    kinks = np.concatenate([x - hi, x - lo])
    kinks = np.sort(kinks[np.isfinite(kinks)])
    a, b = 0, kinks.size - 1  # sum(a) >= total >= sum(b)
    while b - a > 1:
        mid = (a + b) // 2
        if np.clip(x - kinks[mid], lo, hi).sum() >= total:
            a = mid
        else:
            b = mid
    centre = 0.5 * (kinks[a] + kinks[b])
    y = x - centre
    free = (y > lo) & (y < hi)
    if free.any():
        fixed = np.where(y <= lo, lo, hi)
        mu = (x[free].sum() - (total - fixed[~free].sum())) / np.count_nonzero(free)
        mu = min(max(mu, kinks[a]), kinks[b])
    else:
        mu = kinks[a]
    return np.clip(x - mu, lo, hi)


def _initial_radius(sys: NormSystem, F: FeasibleSet) -> float:
    lo = np.where(np.isfinite(F.lo), F.lo, sys.lower.min(axis=0))
    hi = np.where(np.isfinite(F.hi), F.hi, sys.upper.max(axis=0))
    r = float(np.linalg.norm(hi - lo))
    return r if r > 0 else 1.0


def _minimize(sys: NormSystem, F: FeasibleSet, spec: PrincipleSpec, opts: SolveOptions):
    if F.d != sys.d:
        raise ValueError(f"feasible set has dimension {F.d}, system has {sys.d}")
    x = project(sys.warm_start(), F)
    f, g = value_and_subgradient(x, sys, spec)
    x_best, f_best = x, f
    free = int(np.count_nonzero(F.lo < F.hi))
    patience = opts.patience or int(min(50, max(20, 10 + 2 * free)))
    shrink = opts.level_shrink or (0.7 if free <= 1 else 0.9)
    delta = 0.25 * f if f > 0 else 0.0
    radius = _initial_radius(sys, F) if opts.step_rule == "diminishing" else 0.0
    since = 0
    window_start = f_best
    status = MAX_ITER
    k = 0
    while k < opts.max_iter:
        gg = float(g @ g)
        if gg == 0.0 or f_best == 0.0:
            status = CONVERGED
            break
        if opts.step_rule == "level":
            if delta < opts.tol * (1.0 + f_best):
                status = CONVERGED
                break
            step = opts.step_constant * (f - f_best + delta) / gg
        else:
            step = opts.step_constant * radius / (math.sqrt(gg) * math.sqrt(k + 1))
        x = project(x - step * g, F)
        f, g = value_and_subgradient(x, sys, spec)
        k += 1
        if f <= f_best - 0.5 * delta and opts.step_rule == "level":
            x_best, f_best = x, f
            since = 0
            delta *= opts.level_grow
        else:
            if f < f_best:
                x_best, f_best = x, f
            since += 1
            if since >= patience:
                delta *= shrink
                since = 0
        if k % opts.stall_window == 0:
            if window_start - f_best < opts.tol * (1.0 + f_best):
                if opts.step_rule != "level":
                    status = STALLED
                    break
                # a whole window without progress: the remaining gap is far
                # below delta, so skip ahead in the shrink schedule
                delta *= STALL_CUT
            window_start = f_best
    return project(x_best, F), k, status


def _finish(x, sys, spec, iterations, status, eta=None, notes=()) -> Solution:
    obj = multi_objective(x, sys, spec)
    return Solution(
        x=x,
        objective=obj,
        lambda_used=dict(zip(spec.principles, spec.lambdas)),
        psi=psi(obj.components),
        iterations=iterations,
        status=status,
        eta=dict(eta or {}),
        warnings=tuple(notes),
        m=sys.m,
        matrix_mode=sys.matrix_mode,
    )


def _note_status(status, what):
    if status != CONVERGED:
        msg = f"{what}: solver stopped with status {status}"
        warnings.warn(msg, NonConvergenceWarning, stacklevel=3)
        return (msg,)
    return ()


def solve_single(sys: NormSystem, F: FeasibleSet, p, opts: SolveOptions | None = None) -> Solution:
    """Minimize ``||A x - b||_p`` over ``F``; ``eta`` holds the optimal value."""
    opts = opts or SolveOptions()
    spec = PrincipleSpec.single(p)
    x, k, status = _minimize(sys, F, spec, opts)
    sol = _finish(x, sys, spec, k, status, notes=_note_status(status, f"p={principle_label(spec.principles[0])}"))
    return replace(sol, eta={spec.principles[0]: sol.objective.total})


def solve_multi(sys: NormSystem, F: FeasibleSet, spec: PrincipleSpec, opts: SolveOptions | None = None) -> Solution:
    """Minimize ``sum_p lambda_p ||A x - b||_p`` over ``F``."""
    opts = opts or SolveOptions()
    x, k, status = _minimize(sys, F, spec, opts)
    return _finish(x, sys, spec, k, status, notes=_note_status(status, "multi-norm solve"))


def solve_reweighted(
    sys: NormSystem,
    F: FeasibleSet,
    principles,
    opts: SolveOptions | None = None,
    eta_floor: float = 1e-9,
) -> Solution:
    """Two phases: every single-norm optimum ``eta_p``, then weights ``1 / eta_p``.

    A principle with ``eta_p <= eta_floor`` can be satisfied exactly; it gets
    weight 1 and a warning instead of an undefined reciprocal.
    """
    opts = opts or SolveOptions()
    ps = tuple(parse_principle(p) for p in principles)
    if not ps:
        raise ValueError("need at least one principle")
    eta = {}
    notes = []
    statuses = []
    total_iter = 0
    for p in ps:
        single = solve_single(sys, F, p, opts)
        eta[p] = single.objective.total
        notes.extend(single.warnings)
        statuses.append(single.status)
        total_iter += single.iterations
    lams = []
    for p in ps:
        if eta[p] <= eta_floor:
            notes.append(f"eta_{principle_label(p)} = {eta[p]:.3g} <= {eta_floor:g}: exact consensus exists, lambda set to 1")
            lams.append(1.0)
        else:
            lams.append(1.0 / eta[p])
    spec = PrincipleSpec(ps, tuple(lams))
    x, k, status = _minimize(sys, F, spec, opts)
    notes.extend(_note_status(status, "re-weighted solve"))
    statuses.append(status)
    overall = next((s for s in statuses if s != CONVERGED), CONVERGED)
    return _finish(x, sys, spec, total_iter + k, overall, eta=eta, notes=notes)
