"""Supervised PageRank: feature-driven transitions fitted to graded labels."""
from .model import (LabeledQuery, RankingModel, build_transition, default_steps, objective,
                    objective_and_gradient, read_instance, solve_ranking, synthetic_query,
                    transition_matrix, write_instance)
from .optim import (OptimizerReport, QuadraticObjective, TRACE_CSV_HEADER, adaptive_gd,
                    bounded_entry_quadratic, coordinate_descent, estimate_coordinate_lipschitz,
                    finite_diff_gradient, write_trace_csv)
from .select import evaluate_scenarios, scenario_select

__all__ = [
    "LabeledQuery", "RankingModel", "build_transition", "default_steps", "objective",
    "objective_and_gradient", "read_instance", "solve_ranking", "synthetic_query",
    "transition_matrix", "write_instance", "OptimizerReport", "QuadraticObjective",
    "TRACE_CSV_HEADER", "adaptive_gd", "bounded_entry_quadratic", "coordinate_descent",
    "estimate_coordinate_lipschitz", "finite_diff_gradient", "write_trace_csv",
    "evaluate_scenarios", "scenario_select",
]
