"""monotone-pss public API."""
from __future__ import annotations

from monotone_pss.diagnostics import check_monotone, check_resolvent, run_property_suite
from monotone_pss.network import DriveProblem, Element, Parallel, Series, admittance_relation, impedance_relation
from monotone_pss.packaging import get_distribution_version
from monotone_pss.signal import DriveSpec, PeriodicSignal, Sinusoid, sample_drive
from monotone_pss.solvers import SolverConfig, SolveReport, solve_inclusion, solve_problem
from monotone_pss.warning_types import PartialSolutionWarning, StepSizeWarning

__version__ = str(get_distribution_version())

__all__ = [
    "DriveProblem",
    "DriveSpec",
    "Element",
    "Parallel",
    "PeriodicSignal",
    "Series",
    "Sinusoid",
    "SolveReport",
    "SolverConfig",
    "admittance_relation",
    "check_monotone",
    "check_resolvent",
    "impedance_relation",
    "run_property_suite",
    "sample_drive",
    "solve_inclusion",
    "solve_problem",
]
