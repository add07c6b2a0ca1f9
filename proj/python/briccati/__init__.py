"""Riccati solvers for linear-quadratic optimal control, with a Brunovsky
canonical-form fast path."""

from ._briccati import (
    BrunovskyTransform,
    Stage,
    Terminal,
    Error,
    KalmanDecomposition,
    Problem,
    SolveError,
    SolveReport,
    StructureError,
    Trajectory,
    brunovsky_transform,
    load_problem,
    objective,
    problem_from_json,
    problem_to_json,
    random_problem,
    relative_difference,
    save_problem,
    solve,
    solve_kkt,
    staircase,
    validate,
)

__all__ = [
    "BrunovskyTransform",
    "Stage",
    "Terminal",
    "Error",
    "KalmanDecomposition",
    "Problem",
    "SolveError",
    "SolveReport",
    "StructureError",
    "Trajectory",
    "brunovsky_transform",
    "load_problem",
    "objective",
    "problem_from_json",
    "problem_to_json",
    "random_problem",
    "relative_difference",
    "save_problem",
    "solve",
    "solve_kkt",
    "staircase",
    "validate",
]
