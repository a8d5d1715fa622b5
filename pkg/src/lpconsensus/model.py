"""Societies, preference data and feasible sets.

A society is a list of weighted individuals who all judge the same ``m``
alternatives in one of three ways:

* ``cardinal-matrix``: an ``m x m`` pairwise comparison matrix on a Saaty-like
  scale (zero diagonal),
* ``ordinal-complete``: a full ranking, best first,
* ``ordinal-partial``: a set of strict pairwise preferences ``(j, k)``,
* ``valuation``: a plain real score per alternative, used as is.

Ordinal data are turned into Borda valuations (``m`` for the best alternative,
``1`` for the worst) or valuation intervals by :func:`borda_valuations`.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Any, Mapping, Sequence, Union

import numpy as np

CARDINAL = "cardinal-matrix"
ORDINAL_COMPLETE = "ordinal-complete"
ORDINAL_PARTIAL = "ordinal-partial"
VALUATION = "valuation"
MODES = (CARDINAL, ORDINAL_COMPLETE, ORDINAL_PARTIAL, VALUATION)

DEFAULT_T1 = 1.0 / 9.0
DEFAULT_T2 = 9.0
DEFAULT_RECIPROCITY_TOL = 1e-6


class SocietyValidationError(ValueError):
    """Raised when raw society data is invalid; ``errors`` lists every problem found."""

    def __init__(self, errors: Sequence[str]):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class PreferenceMatrix:
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other):
        return isinstance(other, PreferenceMatrix) and np.array_equal(self.entries, other.entries)


@dataclass(frozen=True)
class Ranking:
    """Zero-based alternative indices, best first."""

    order: tuple[int, ...]


@dataclass(frozen=True)
class PartialRelation:
    """Zero-based ``(j, k)`` pairs meaning ``j`` is preferred to ``k``."""

    pairs: frozenset[tuple[int, int]]


@dataclass(frozen=True, eq=False)
class Valuation:
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values))

    def __eq__(self, other):
        return isinstance(other, Valuation) and np.array_equal(self.values, other.values)


PreferenceData = Union[PreferenceMatrix, Ranking, PartialRelation, Valuation]


@dataclass(frozen=True)
class Individual:
    id: str
    weight: float
    data: PreferenceData


@dataclass(frozen=True, eq=False)
class ValuationBounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lower", _frozen(self.lower))
        object.__setattr__(self, "upper", _frozen(self.upper))

    def __eq__(self, other):
        return (
            isinstance(other, ValuationBounds)
            and np.array_equal(self.lower, other.lower)
            and np.array_equal(self.upper, other.upper)
        )


@dataclass(frozen=True, eq=False)
class FeasibleSet:
    """Convex set the consensus vector must lie in.

    Every set is a coordinate box ``[lo, hi]`` (possibly infinite);
    ``borda`` sets add the hyperplane ``sum(x) == total``. Pinned coordinates
    (the diagonal of a consensus matrix) have ``lo == hi``.
    """

    kind: str
    lo: np.ndarray
    hi: np.ndarray
    total: float | None = None
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "lo", _frozen(self.lo))
        object.__setattr__(self, "hi", _frozen(self.hi))
        if self.lo.shape != self.hi.shape or self.lo.ndim != 1:
            raise ValueError("lo and hi must be vectors of the same length")
        if np.any(self.lo > self.hi):
            raise ValueError("infeasible box: lo > hi for some coordinate")
        if self.total is not None:
            if not (self.lo.sum() <= self.total <= self.hi.sum()):
                raise ValueError("infeasible set: hyperplane misses the box")

    @property
    def d(self) -> int:
        return self.lo.shape[0]

    @classmethod
    def unconstrained(cls, d: int, pinned: Sequence[int] = ()) -> "FeasibleSet":
        lo = np.full(d, -np.inf)
        hi = np.full(d, np.inf)
        lo[list(pinned)] = 0.0
        hi[list(pinned)] = 0.0
        return cls("unconstrained", lo, hi)

    @classmethod
    def borda(cls, m: int) -> "FeasibleSet":
        return cls("borda", np.ones(m), np.full(m, float(m)), total=m * (m + 1) / 2)

    @classmethod
    def interval_box(cls, lo, hi) -> "FeasibleSet":
        return cls("interval-box", lo, hi)

    @classmethod
    def saaty_box(cls, m: int, t1: float = DEFAULT_T1, t2: float = DEFAULT_T2) -> "FeasibleSet":
        """Box ``[t1, t2]`` on the off-diagonal of a vectorized ``m x m`` matrix."""
        if not t1 <= t2:
            raise ValueError(f"saaty box needs t1 <= t2, got [{t1}, {t2}]")
        lo = np.full(m * m, float(t1))
        hi = np.full(m * m, float(t2))
        diag = diagonal_indices(m)
        lo[diag] = 0.0
        hi[diag] = 0.0
        return cls("saaty-box", lo, hi, params={"t1": float(t1), "t2": float(t2)})

    def contains(self, x, atol: float = 1e-10) -> bool:
        x = np.asarray(x, dtype=float)
        if x.shape != self.lo.shape:
            return False
        ok = bool(np.all(x >= self.lo - atol) and np.all(x <= self.hi + atol))
        if self.total is not None:
            ok = ok and abs(x.sum() - self.total) <= max(atol, 1e-8)
        return ok

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"kind": self.kind}
        out.update(self.params)
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FeasibleSet)
            and self.kind == other.kind
            and np.array_equal(self.lo, other.lo)
            and np.array_equal(self.hi, other.hi)
            and self.total == other.total
        )


def diagonal_indices(m: int) -> np.ndarray:
    """Positions of the diagonal inside a row-major vectorized ``m x m`` matrix."""
    return np.arange(m) * (m + 1)


@dataclass(frozen=True)
class Society:
    individuals: tuple[Individual, ...]
    m: int
    mode: str
    alternatives: tuple[str, ...]
    feasible: FeasibleSet

    @property
    def n(self) -> int:
        return len(self.individuals)

    @property
    def weights(self) -> np.ndarray:
        return np.array([ind.weight for ind in self.individuals], dtype=float)

    def summary(self) -> str:
        return f"{self.n} individuals, m={self.m}, mode={self.mode}"

    def to_dict(self) -> dict:
        """Inverse of :func:`validate_society`."""
        labels = self.alternatives
        people = []
        for ind in self.individuals:
            item: dict[str, Any] = {"id": ind.id, "weight": ind.weight}
            if isinstance(ind.data, PreferenceMatrix):
                item["matrix"] = ind.data.entries.tolist()
            elif isinstance(ind.data, Ranking):
                item["order"] = [labels[j] for j in ind.data.order]
            elif isinstance(ind.data, Valuation):
                item["values"] = ind.data.values.tolist()
            else:
                item["pairs"] = [[labels[j], labels[k]] for j, k in sorted(ind.data.pairs)]
            people.append(item)
        return {
            "mode": self.mode,
            "alternatives": list(labels),
            "feasible": self.feasible.to_dict(),
            "individuals": people,
        }


def borda_valuations(r: Ranking | PartialRelation, m: int):
    """Borda valuation of every alternative.

    A complete ranking gives a vector where alternative ``j`` scores one plus
    the number of alternatives it beats. A partial relation gives
    :class:`ValuationBounds` ``[1 + wins_j, m - losses_j]`` counted from direct
    pairs; every linear extension of the relation scores inside them.
    """
    if isinstance(r, Ranking):
        if sorted(r.order) != list(range(m)):
            raise ValueError("ranking is not a permutation of the alternatives")
        values = np.empty(m)
        for position, j in enumerate(r.order):
            values[j] = m - position
        return values
    wins = np.zeros(m)
    losses = np.zeros(m)
    for j, k in r.pairs:
        wins[j] += 1
        losses[k] += 1
    return ValuationBounds(1.0 + wins, m - losses)


def _has_cycle(pairs, m: int) -> bool:
    succ = [[] for _ in range(m)]
    for j, k in pairs:
        succ[j].append(k)
    state = [0] * m  # 0 new, 1 on stack, 2 done
    for start in range(m):
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state[nxt] == 1:
                return True
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def _parse_feasible(raw, mode: str, m: int, errors: list[str]) -> FeasibleSet | None:
    if raw is None:
        raw = {"kind": {CARDINAL: "saaty-box", VALUATION: "unconstrained"}.get(mode, "borda")}
    if isinstance(raw, str):
        raw = {"kind": raw}
    if not isinstance(raw, Mapping) or "kind" not in raw:
        errors.append("feasible: expected an object with a 'kind'")
        return None
    kind = raw["kind"]
    d = m * m if mode == CARDINAL else m
    pinned = diagonal_indices(m) if mode == CARDINAL else ()
    try:
        if kind == "unconstrained":
            return FeasibleSet.unconstrained(d, pinned)
        if kind == "saaty-box":
            if mode != CARDINAL:
                errors.append("feasible: 'saaty-box' applies only to cardinal-matrix mode")
                return None
            return FeasibleSet.saaty_box(m, float(raw.get("t1", DEFAULT_T1)), float(raw.get("t2", DEFAULT_T2)))
        if kind == "borda":
            if mode == CARDINAL:
                errors.append("feasible: 'borda' applies only to ordinal modes")
                return None
            return FeasibleSet.borda(m)
    except (TypeError, ValueError) as exc:
        errors.append(f"feasible: {exc}")
        return None
    errors.append(f"feasible: unknown kind {kind!r}")
    return None


def _alternative_index(value, labels, where: str, errors: list[str]) -> int | None:
    if isinstance(value, str):
        if value in labels:
            return labels.index(value)
        errors.append(f"{where}: unknown alternative {value!r}")
        return None
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool) and 1 <= value <= len(labels):
        return int(value) - 1
    errors.append(f"{where}: unknown alternative {value!r}")
    return None


def _parse_matrix(raw, m, who, box, check_reciprocity, tol, errors):
    rows = raw
    if not isinstance(rows, Sequence) or len(rows) != m or any(
        not isinstance(row, Sequence) or len(row) != m for row in rows
    ):
        errors.append(f"{who}: matrix must be square {m}x{m}")
        return None
    M = np.zeros((m, m))
    ok = True
    for j in range(m):
        for k in range(m):
            v = rows[j][k]
            if j == k:
                # a missing diagonal is the one repair we make
                if v is not None and v != 0:
                    errors.append(f"{who}: diagonal cell ({j + 1}, {k + 1}) must be 0, got {v}")
                    ok = False
                continue
            if v is None or isinstance(v, bool):
                errors.append(f"{who}: cell ({j + 1}, {k + 1}) is missing")
                ok = False
                continue
            try:
                v = float(v)
            except (TypeError, ValueError):
                errors.append(f"{who}: cell ({j + 1}, {k + 1}) is not a number")
                ok = False
                continue
            if not math.isfinite(v):
                errors.append(f"{who}: cell ({j + 1}, {k + 1}) is not finite")
                ok = False
                continue
            M[j, k] = v
            if box is not None and not (box[0] <= v <= box[1]):
                errors.append(
                    f"{who}: cell ({j + 1}, {k + 1}) entry outside box [{box[0]:.6g}, {box[1]:.6g}]: {v:.6g}"
                )
                ok = False
    if ok and check_reciprocity:
        for j in range(m):
            for k in range(j + 1, m):
                prod = M[j, k] * M[k, j]
                if not (1 - tol <= prod <= 1 + tol):
                    errors.append(
                        f"{who}: reciprocity violated at cell ({j + 1}, {k + 1}): "
                        f"{M[j, k]:.6g} * {M[k, j]:.6g} = {prod:.6g}"
                    )
                    ok = False
    return PreferenceMatrix(M) if ok else None


def validate_society(
    raw: Mapping[str, Any] | Society,
    *,
    check_reciprocity: bool = True,
    reciprocity_tol: float = DEFAULT_RECIPROCITY_TOL,
) -> Society:
    """Build a :class:`Society` from a parsed input document.

    All problems are collected and raised together as a
    :class:`SocietyValidationError`. Indices in messages are one-based, with
    ``i`` the individual and ``(j, k)`` the matrix cell.
    """
    if isinstance(raw, Society):
        raw = raw.to_dict()
    errors: list[str] = []
    if not isinstance(raw, Mapping):
        raise SocietyValidationError(["input must be a JSON object"])

    mode = raw.get("mode")
    if mode not in MODES:
        raise SocietyValidationError([f"mode must be one of {', '.join(MODES)}; got {mode!r}"])

    labels = raw.get("alternatives")
    people = raw.get("individuals")
    if not isinstance(people, Sequence) or isinstance(people, str) or len(people) == 0:
        errors.append("individuals: need at least one individual")
        people = []
    if labels is None:
        m = _infer_m(mode, people)
        labels = [f"a{j + 1}" for j in range(m)] if m else []
    if not isinstance(labels, Sequence) or isinstance(labels, str) or not all(isinstance(s, str) for s in labels):
        raise SocietyValidationError(errors + ["alternatives: expected a list of strings"])
    labels = list(labels)
    if len(set(labels)) != len(labels):
        errors.append("alternatives: labels must be unique")
    m = len(labels)
    least = 1 if mode == VALUATION else 2
    if m < least:
        raise SocietyValidationError(errors + [f"alternatives: need m >= {least}, got {m}"])

    feasible = _parse_feasible(raw.get("feasible"), mode, m, errors)
    box = None
    if mode == CARDINAL and feasible is not None and feasible.kind == "saaty-box":
        box = (feasible.params["t1"], feasible.params["t2"])

    individuals = []
    seen_ids = set()
    for i, person in enumerate(people):
        where = f"individual {i + 1}"
        if not isinstance(person, Mapping):
            errors.append(f"{where}: expected an object")
            continue
        ident = str(person.get("id", i + 1))
        who = f"{where} ({ident!r})"
        if ident in seen_ids:
            errors.append(f"{who}: duplicate id")
        seen_ids.add(ident)
        weight = person.get("weight", 1.0)
        try:
            weight = float(weight)
        except (TypeError, ValueError):
            errors.append(f"{who}: weight is not a number")
            continue
        if not (weight > 0 and math.isfinite(weight)):
            errors.append(f"{who}: nonpositive weight {weight}")
        data = None
        if mode == CARDINAL:
            if "matrix" not in person:
                errors.append(f"{who}: missing 'matrix'")
                continue
            data = _parse_matrix(person["matrix"], m, who, box, check_reciprocity, reciprocity_tol, errors)
        elif mode == ORDINAL_COMPLETE:
            data = _parse_ranking(person.get("order"), labels, who, errors)
        elif mode == VALUATION:
            data = _parse_values(person.get("values"), m, who, errors)
        else:
            data = _parse_pairs(person.get("pairs"), labels, who, errors)
        if data is not None:
            individuals.append(Individual(ident, weight, data))

    if errors:
        raise SocietyValidationError(errors)
    return Society(tuple(individuals), m, mode, tuple(labels), feasible)


def _infer_m(mode, people) -> int:
    for person in people:
        if isinstance(person, Mapping):
            if mode == CARDINAL and isinstance(person.get("matrix"), Sequence):
                return len(person["matrix"])
            if mode == ORDINAL_COMPLETE and isinstance(person.get("order"), Sequence):
                return len(person["order"])
            if mode == VALUATION and isinstance(person.get("values"), Sequence):
                return len(person["values"])
    return 0


def _parse_values(raw, m, who, errors) -> Valuation | None:
    if not isinstance(raw, Sequence) or isinstance(raw, str):
        errors.append(f"{who}: missing 'values'")
        return None
    if len(raw) != m:
        errors.append(f"{who}: expected {m} values, got {len(raw)}")
        return None
    try:
        v = [float(a) for a in raw if not isinstance(a, bool)]
    except (TypeError, ValueError):
        v = []
    if len(v) != m or not all(math.isfinite(a) for a in v):
        errors.append(f"{who}: values must be finite numbers")
        return None
    return Valuation(v)


def _parse_ranking(raw, labels, who, errors) -> Ranking | None:
    if not isinstance(raw, Sequence) or isinstance(raw, str):
        errors.append(f"{who}: missing 'order'")
        return None
    order = []
    for pos, item in enumerate(raw):
        j = _alternative_index(item, labels, f"{who}: order position {pos + 1}", errors)
        if j is None:
            return None
        order.append(j)
    dupes = sorted({labels[j] for j in order if order.count(j) > 1})
    if dupes:
        errors.append(f"{who}: duplicate alternative in ranking: {', '.join(dupes)}")
        return None
    if len(order) != len(labels):
        missing = [labels[j] for j in range(len(labels)) if j not in order]
        errors.append(f"{who}: ranking is incomplete, missing {', '.join(missing)}")
        return None
    return Ranking(tuple(order))


def _parse_pairs(raw, labels, who, errors) -> PartialRelation | None:
    if not isinstance(raw, Sequence) or isinstance(raw, str):
        errors.append(f"{who}: missing 'pairs'")
        return None
    pairs = set()
    ok = True
    for item in raw:
        if not isinstance(item, Sequence) or isinstance(item, str) or len(item) != 2:
            errors.append(f"{who}: pair {item!r} must have two entries")
            ok = False
            continue
        j = _alternative_index(item[0], labels, f"{who}: pair {list(item)}", errors)
        k = _alternative_index(item[1], labels, f"{who}: pair {list(item)}", errors)
        if j is None or k is None:
            ok = False
            continue
        if j == k:
            errors.append(f"{who}: self pair ({labels[j]}, {labels[k]})")
            ok = False
            continue
        pairs.add((j, k))
    for j, k in pairs:
        if j < k and (k, j) in pairs:
            errors.append(f"{who}: pair ({labels[j]}, {labels[k]}) appears in both orientations")
            ok = False
    if not ok:
        return None
    if _has_cycle(pairs, len(labels)):
        warnings.warn(f"{who}: preference relation has a cycle", stacklevel=3)
    return PartialRelation(frozenset(pairs))
