"""Residual statistics, p sweeps and comparison tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from .model import FeasibleSet
from .problem import INF, NormSystem, parse_principle, principle_label, residuals
from .solver import Solution, SolveOptions, solve_single

# the exponents of the single-principle experiment
DEFAULT_SWEEP = (1, 2, 3, 4, 5, 10, 50, 100, 500, INF)

CSV_COLUMNS = (
    "label", "min", "max", "mean", "variance", "psi",
    "q1", "median", "q3", "whisker_lo", "whisker_hi", "eta",
)


@dataclass(frozen=True)
class ResidualReport:
    min: float
    max: float
    mean: float
    variance: float
    q1: float
    median: float
    q3: float
    whisker_lo: float
    whisker_hi: float
    count: int

    def to_dict(self) -> dict:
        return asdict(self)


def absolute_residuals(x, sys: NormSystem, include_diagonal: bool = False) -> np.ndarray:
    R = np.abs(residuals(x, sys)).reshape(sys.n, sys.d)
    if sys.matrix_mode and not include_diagonal:
        R = R[:, ~sys.diagonal_mask()]
    return R.reshape(-1)


def describe(values, ddof: int = 0) -> ResidualReport:
    """Summary statistics; quartiles interpolate linearly, whiskers follow Tukey."""
    # sorted so the result does not depend on the order of individuals
    a = np.sort(np.asarray(values, dtype=float).reshape(-1))
    if a.size == 0:
        raise ValueError("no residuals to describe")
    q1, med, q3 = (float(q) for q in np.percentile(a, [25, 50, 75]))
    iqr = q3 - q1
    inside_lo = a[a >= q1 - 1.5 * iqr]
    inside_hi = a[a <= q3 + 1.5 * iqr]
    var = float(np.var(a, ddof=ddof)) if a.size > ddof else 0.0
    return ResidualReport(
        min=float(a.min()),
        max=float(a.max()),
        mean=float(a.mean()),
        variance=var,
        q1=q1,
        median=med,
        q3=q3,
        whisker_lo=float(inside_lo.min()),
        whisker_hi=float(inside_hi.max()),
        count=int(a.size),
    )


def residual_stats(x, sys: NormSystem, *, ddof: int = 0, include_diagonal: bool = False) -> ResidualReport:
    """Statistics of ``|A x - b|``, skipping the consensus-matrix diagonal.

    ``ddof=1`` switches to the sample variance.
    """
    return describe(absolute_residuals(x, sys, include_diagonal), ddof=ddof)


@dataclass(frozen=True)
class SweepRow:
    label: str
    report: ResidualReport | None
    eta: float | None
    status: str
    solution: Solution | None = None
    error: str | None = None


def sweep(sys: NormSystem, F: FeasibleSet, ps: Sequence = DEFAULT_SWEEP, opts: SolveOptions | None = None) -> list[SweepRow]:
    """One single-norm solve and residual report per ``p``, in the given order.

    A failing row records its error instead of ending the sweep.
    """
    rows = []
    for p in ps:
        try:
            p = parse_principle(p)
            sol = solve_single(sys, F, p, opts)
            rows.append(SweepRow(principle_label(p), residual_stats(sol.x, sys), sol.objective.total, sol.status, sol))
        except (ValueError, FloatingPointError) as exc:
            rows.append(SweepRow(str(p), None, None, "error", None, str(exc)))
    return rows


def fmt(v) -> str:
    """Eight significant digits, shared by the CSV and JSON renderings."""
    if v is None:
        return ""
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if math.isnan(v):
        return "nan"
    s = f"{v:.8g}"
    return "0" if s == "-0" else s


def _num(v):
    s = fmt(v)
    if s in ("", "nan", "inf", "-inf"):
        return None if s == "" else s
    return float(s)


@dataclass(frozen=True)
class TableRow:
    label: str
    report: ResidualReport
    psi: float
    eta: tuple[float, ...]


class ComparisonTable:
    """Rows of ``min, max, mean, variance, psi`` (plus quartiles and eta)."""

    def __init__(self, rows: Sequence[TableRow]):
        self.rows = list(rows)

    def records(self) -> list[dict]:
        out = []
        for row in self.rows:
            r = row.report
            out.append({
                "label": row.label,
                "min": _num(r.min),
                "max": _num(r.max),
                "mean": _num(r.mean),
                "variance": _num(r.variance),
                "psi": _num(row.psi),
                "q1": _num(r.q1),
                "median": _num(r.median),
                "q3": _num(r.q3),
                "whisker_lo": _num(r.whisker_lo),
                "whisker_hi": _num(r.whisker_hi),
                "eta": [_num(e) for e in row.eta],
            })
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for rec in self.records():
            cells = [rec["label"]]
            cells += [fmt(rec[c]) if rec[c] is not None else "" for c in CSV_COLUMNS[1:-1]]
            cells.append(";".join(fmt(e) for e in rec["eta"]))
            writer.writerow(cells)
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=2)


def comparison_table(rows: Sequence[tuple[str, Solution, ResidualReport]]) -> ComparisonTable:
    if not rows:
        raise ValueError("comparison table needs at least one row")
    return ComparisonTable(
        TableRow(label, report, sol.psi, tuple(sol.eta.values())) for label, sol, report in rows
    )


def sweep_table(rows: Sequence[SweepRow]) -> ComparisonTable:
    return ComparisonTable(
        TableRow(r.label, r.report, 0.0, (r.eta,)) for r in rows if r.report is not None
    )


def parse_csv(text: str) -> list[dict]:
    """Read :meth:`ComparisonTable.to_csv` output back into records."""
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        row = {"label": rec["label"]}
        for c in CSV_COLUMNS[1:-1]:
            row[c] = float(rec[c]) if rec[c] else None
        row["eta"] = [float(e) for e in rec["eta"].split(";")] if rec["eta"] else []
        out.append(row)
    return out
