"""The stacked norm-approximation system behind a consensus problem.

Minimizing the weighted Minkowski distance between a consensus and every
individual is a norm approximation ``min ||A x - b||_p`` with ``A`` the
vertical stack of ``w_i * I_d`` and ``b`` the stack of ``w_i * target_i``.
``A`` is never formed: a :class:`NormSystem` only keeps the weights and the
``n x d`` targets.

Interval targets (ordinal-partial data) are stored as ``lower <= upper``
bounds; a point target simply has ``lower == upper``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .model import (
    CARDINAL,
    ORDINAL_COMPLETE,
    PartialRelation,
    PreferenceMatrix,
    Ranking,
    Society,
    Valuation,
    borda_valuations,
    diagonal_indices,
)

INF = math.inf
# exponents above this are evaluated as the max norm
P_AS_INF = 1e6


def vectorize(M) -> np.ndarray:
    """Row-major flattening: ``v[i*m + j] == M[i][j]``."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return M.reshape(-1).copy()


def unvectorize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    m = math.isqrt(v.size)
    if m * m != v.size:
        raise ValueError(f"length {v.size} is not a perfect square")
    return v.reshape(m, m).copy()


@dataclass(frozen=True, eq=False)
class NormSystem:
    weights: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    matrix_mode: bool = False
    m: int | None = None

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).reshape(-1)
        lo = np.array(self.lower, dtype=float)
        hi = np.array(self.upper, dtype=float)
        if lo.ndim == 1:
            lo = lo[:, None]
            hi = hi[:, None]
        if lo.shape != hi.shape or lo.shape[0] != w.shape[0]:
            raise ValueError("weights, lower and upper disagree on the number of individuals")
        if np.any(lo > hi):
            raise ValueError("interval target with lower > upper")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        for a in (w, lo, hi):
            a.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def from_points(cls, weights, targets, **kw) -> "NormSystem":
        t = np.asarray(targets, dtype=float)
        return cls(weights, t, t, **kw)

    @property
    def n(self) -> int:
        return self.lower.shape[0]

    @property
    def d(self) -> int:
        return self.lower.shape[1]

    @property
    def interval(self) -> np.ndarray:
        """Per-individual flag: does this block carry interval targets."""
        return np.any(self.lower != self.upper, axis=1)

    @property
    def targets(self) -> np.ndarray:
        """Point targets (interval midpoints for interval blocks)."""
        return 0.5 * (self.lower + self.upper)

    def diagonal_mask(self) -> np.ndarray:
        mask = np.zeros(self.d, dtype=bool)
        if self.matrix_mode:
            mask[diagonal_indices(self.m)] = True
        return mask

    def warm_start(self) -> np.ndarray:
        """Weighted mean of the targets, the unconstrained p=2 optimum for point data."""
        w2 = self.weights**2
        return (w2[:, None] * self.targets).sum(axis=0) / w2.sum()

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """Materialized ``(A, b)``; only meant for small checks."""
        A = np.vstack([wi * np.eye(self.d) for wi in self.weights])
        b = (self.weights[:, None] * self.targets).reshape(-1)
        return A, b


def build_system(s: Society) -> NormSystem:
    w = s.weights
    if s.mode == CARDINAL:
        T = np.array([vectorize(ind.data.entries) for ind in s.individuals])
        return NormSystem(w, T, T, matrix_mode=True, m=s.m)
    lo = np.empty((s.n, s.m))
    hi = np.empty((s.n, s.m))
    for i, ind in enumerate(s.individuals):
        if isinstance(ind.data, Valuation):
            lo[i] = hi[i] = ind.data.values
            continue
        v = borda_valuations(ind.data, s.m)
        if isinstance(ind.data, Ranking):
            lo[i] = hi[i] = v
        else:
            lo[i], hi[i] = v.lower, v.upper
    return NormSystem(w, lo, hi, m=s.m)


def residuals(x, sys: NormSystem) -> np.ndarray:
    """Weighted residuals, block ``i`` first, as a flat ``n*d`` vector.

    For an interval target the residual is the signed distance to the
    interval, zero inside it.
    """
    return residual_matrix(x, sys).reshape(-1)


def residual_matrix(x, sys: NormSystem) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (sys.d,):
        raise ValueError(f"x has shape {x.shape}, expected ({sys.d},)")
    return sys.weights[:, None] * (x - np.clip(x, sys.lower, sys.upper))


def parse_principle(token) -> float:
    """``"inf"`` or a real number ``>= 1``."""
    if isinstance(token, str):
        t = token.strip().lower()
        if t in ("inf", "infinity", "∞"):
            return INF
        try:
            p = float(t)
        except ValueError:
            raise ValueError(f"cannot parse principle {token!r}") from None
    else:
        p = float(token)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p must be >= 1 or inf, got {token!r}")
    return INF if p > P_AS_INF else p


def principle_label(p: float) -> str:
    if p == INF:
        return "inf"
    if float(p).is_integer():
        return str(int(p))
    return repr(float(p))


@dataclass(frozen=True)
class PrincipleSpec:
    """Principles ``p`` with their non-negative weights ``lambda_p``."""

    principles: tuple[float, ...]
    lambdas: tuple[float, ...]

    def __post_init__(self):
        ps = tuple(parse_principle(p) for p in self.principles)
        lams = tuple(float(v) for v in self.lambdas)
        if not ps:
            raise ValueError("need at least one principle")
        if len(ps) != len(lams):
            raise ValueError("one lambda per principle")
        if len(set(ps)) != len(ps):
            raise ValueError("principles must be distinct")
        if any(not (v >= 0) or math.isinf(v) for v in lams):
            raise ValueError("lambdas must be finite and non-negative")
        if not any(v > 0 for v in lams):
            raise ValueError("at least one lambda must be positive")
        object.__setattr__(self, "principles", ps)
        object.__setattr__(self, "lambdas", lams)

    @classmethod
    def single(cls, p) -> "PrincipleSpec":
        return cls((p,), (1.0,))

    @classmethod
    def uniform(cls, ps: Iterable) -> "PrincipleSpec":
        ps = tuple(ps)
        return cls(ps, (1.0,) * len(ps))

    @classmethod
    def from_mapping(cls, lam: Mapping) -> "PrincipleSpec":
        return cls(tuple(lam.keys()), tuple(lam.values()))

    def items(self):
        return zip(self.principles, self.lambdas)

    def scaled(self, kappa: float) -> "PrincipleSpec":
        return PrincipleSpec(self.principles, tuple(kappa * v for v in self.lambdas))

    def labels(self) -> list[str]:
        return [principle_label(p) for p in self.principles]
