"""Consensus computation for group decisions as a weighted sum of p-norm approximations."""

from .model import (
    FeasibleSet,
    Individual,
    PartialRelation,
    PreferenceMatrix,
    Ranking,
    Society,
    SocietyValidationError,
    Valuation,
    ValuationBounds,
    borda_valuations,
    validate_society,
)
from .objective import ObjectiveValue, multi_objective, pnorm, psi, subgradient
from .oracle import GridSpec, coordinate_optimum, grid_search
from .problem import INF, NormSystem, PrincipleSpec, build_system, residuals, unvectorize, vectorize
from .report import ResidualReport, SweepRow, comparison_table, residual_stats, sweep
from .solver import Solution, SolveOptions, project, solve_multi, solve_reweighted, solve_single

__version__ = "0.1.0"

__all__ = [
    "FeasibleSet", "Individual", "PartialRelation", "PreferenceMatrix", "Ranking", "Society",
    "SocietyValidationError", "Valuation", "ValuationBounds", "borda_valuations", "validate_society",
    "ObjectiveValue", "multi_objective", "pnorm", "psi", "subgradient",
    "GridSpec", "coordinate_optimum", "grid_search",
    "INF", "NormSystem", "PrincipleSpec", "build_system", "residuals", "unvectorize", "vectorize",
    "ResidualReport", "SweepRow", "comparison_table", "residual_stats", "sweep",
    "Solution", "SolveOptions", "project", "solve_multi", "solve_reweighted", "solve_single",
]
