"""Fixed-point solvers for monotone inclusion problems."""
from __future__ import annotations

from monotone_pss.newton import bisect, guarded_newton
from monotone_pss.solvers.config import SolverConfig
from monotone_pss.solvers.fixed_point import douglas_rachford, empirical_contraction, forward_step, picard
from monotone_pss.solvers.problem import predicted_iterations, problem_relation, solve_inclusion, solve_problem
from monotone_pss.solvers.report import SolveReport

__all__ = [
    "SolveReport",
    "SolverConfig",
    "bisect",
    "douglas_rachford",
    "empirical_contraction",
    "forward_step",
    "guarded_newton",
    "picard",
    "predicted_iterations",
    "problem_relation",
    "solve_inclusion",
    "solve_problem",
]
