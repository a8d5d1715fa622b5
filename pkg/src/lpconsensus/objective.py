"""p-norms, the multi-norm objective, its subgradients and the balance measure."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .problem import INF, P_AS_INF, NormSystem, PrincipleSpec, principle_label, residual_matrix

# coordinates within this relative distance of the max share the p=inf subgradient
ARGMAX_TOL = 1e-12


def _check_p(p) -> float:
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"p-norm needs p >= 1, got {p}")
    return INF if p > P_AS_INF else p


def pnorm(r, p) -> float:
    """``||r||_p``, evaluated as ``M * ||r / M||_p`` with ``M = max|r|``."""
    p = _check_p(p)
    a = np.abs(np.asarray(r, dtype=float)).reshape(-1)
    if a.size == 0:
        return 0.0
    M = a.max()
    if M == 0.0:
        return 0.0
    if p == INF:
        return float(M)
    if p == 1:
        return float(a.sum())
    s = a / M
    return float(M * np.sum(s**p) ** (1.0 / p))


def pnorm_grad(r, p) -> np.ndarray:
    """A subgradient of ``||.||_p`` at ``r`` (same shape as ``r``).

    Zero at ``r == 0``. For ``p == inf`` unit mass is spread evenly over every
    coordinate attaining the max.
    """
    p = _check_p(p)
    r = np.asarray(r, dtype=float)
    a = np.abs(r)
    M = a.max() if a.size else 0.0
    if M == 0.0:
        return np.zeros_like(r)
    if p == 1:
        return np.sign(r)
    if p == INF:
        hit = a >= M * (1.0 - ARGMAX_TOL)
        return np.sign(r) * hit / np.count_nonzero(hit)
    s = a / M
    sp = s ** (p - 1)
    norm = np.sum(sp * s) ** (1.0 / p)
    return np.sign(r) * sp / norm ** (p - 1)


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    components: dict[float, float]
    raw_norms: dict[float, float]

    def labelled(self, which: str = "components") -> dict[str, float]:
        return {principle_label(p): v for p, v in getattr(self, which).items()}


def multi_objective(x, sys: NormSystem, spec: PrincipleSpec) -> ObjectiveValue:
    """``sum_p lambda_p * ||A x - b||_p`` with its per-principle parts."""
    R = residual_matrix(x, sys)
    raw = {p: pnorm(R, p) for p in spec.principles}
    comps = {p: lam * raw[p] for p, lam in spec.items()}
    return ObjectiveValue(math.fsum(comps.values()), comps, raw)


def subgradient(x, sys: NormSystem, spec: PrincipleSpec) -> np.ndarray:
    R = residual_matrix(x, sys)
    return _adjoint(sum(lam * pnorm_grad(R, p) for p, lam in spec.items()), sys)


def _adjoint(G, sys: NormSystem) -> np.ndarray:
    # A^T applied to a residual-shaped array; interval blocks have zero
    # residual (hence zero G) wherever x sits inside the interval
    return (sys.weights[:, None] * G).sum(axis=0)


def value_and_subgradient(x, sys: NormSystem, spec: PrincipleSpec) -> tuple[float, np.ndarray]:
    """Objective total and one subgradient, sharing the residual computation."""
    R = residual_matrix(x, sys)
    total = 0.0
    G = np.zeros_like(R)
    for p, lam in spec.items():
        if lam == 0:
            continue
        total += lam * pnorm(R, p)
        G += lam * pnorm_grad(R, p)
    return total, _adjoint(G, sys)


def psi(components) -> float:
    """Population variance of the weighted components ``lambda_p * ||A x - b||_p``."""
    if isinstance(components, dict):
        components = list(components.values())
    c = np.asarray(list(components), dtype=float)
    if c.size == 0:
        raise ValueError("psi of an empty set")
    return float(np.mean((c - c.mean()) ** 2))
