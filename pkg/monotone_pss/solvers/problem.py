"""Inclusion problems 0 in S(u) - y and their algorithm dispatch."""
from __future__ import annotations

import logging
import math

import numpy as np

from monotone_pss.const import ADMITTANCE, IMPEDANCE, Algorithm
from monotone_pss.exceptions import CapabilityError, ConfigurationError
from monotone_pss.network.audit import audit_solution
from monotone_pss.network.model import DriveProblem
from monotone_pss.network.relations import admittance_relation, impedance_relation
from monotone_pss.operators import (
    AffineOperator,
    Inverse,
    LinearRelation,
    Pointwise,
    Relation,
    Scaled,
    Shifted,
    Sum,
    add,
    invert,
    shift,
    zero,
)
from monotone_pss.signal import PeriodicSignal
from monotone_pss.solvers.config import SolverConfig
from monotone_pss.solvers.fixed_point import douglas_rachford, forward_step, log_summary
from monotone_pss.solvers.report import SolveReport
from monotone_pss.typing import Vector
from monotone_pss.utils import as_vector, norm

logger = logging.getLogger(__name__)


def predicted_iterations(m: float, lipschitz: float, tol: float) -> int:
    """Forward step iterations for a tol reduction at the optimal contraction sqrt(1 - m^2/L^2)."""
    ratio = min(m / lipschitz, 1.0)
    if ratio >= 1.0:
        return 1
    return math.ceil(math.log(tol) / math.log(math.sqrt(1.0 - ratio**2)))


def _forward_fits(relation: Relation, config: SolverConfig) -> bool:
    m, lipschitz = relation.constants
    if config.alpha is not None:
        return True
    return bool(m and lipschitz) and predicted_iterations(m, lipschitz, config.tol) <= config.max_iter


def _exact(solution, algorithm: str) -> SolveReport:
    return log_summary(SolveReport(solution=solution, converged=True, iterations=0, algorithm=algorithm))


def _proximal_point(relation: Relation, target: Vector, config: SolverConfig) -> SolveReport:
    # Douglas-Rachford against the zero relation.
    return douglas_rachford(shift(relation, target), zero(relation.dimension), config)


def _split(terms) -> tuple[Relation, Relation]:
    first, *rest = terms
    return first, add(*rest)


def _solve_sum(relation: Sum, target: Vector, config: SolverConfig) -> SolveReport:
    algorithm = config.algorithm
    if algorithm == Algorithm.FORWARD_STEP or (algorithm == Algorithm.AUTO and _forward_fits(relation, config)):
        return forward_step(shift(relation, target), config)
    first, second = _split(relation.terms)
    if not (first.supports_resolvent and second.supports_resolvent):
        raise ConfigurationError(
            f"No applicable algorithm: the sum splits into {type(first).__name__} and {type(second).__name__}, "
            "which do not both expose resolvents, and its constants do not admit a forward step"
        )
    return douglas_rachford(shift(first, target), second, config)


def _solve_affine(relation: AffineOperator, target: Vector, config: SolverConfig) -> SolveReport:
    algorithm = config.algorithm
    if algorithm == Algorithm.DOUGLAS_RACHFORD:
        return _proximal_point(relation, target, config)
    if algorithm == Algorithm.FORWARD_STEP or (relation.coercivity and _forward_fits(relation, config)):
        return forward_step(shift(relation, target), config)
    return _exact(np.asarray(relation.inverse().apply(target), dtype=float), Algorithm.LINEAR_SOLVE)


def _solve_linear(relation: LinearRelation, target: Vector, config: SolverConfig) -> SolveReport:
    algorithm = config.algorithm
    if algorithm == Algorithm.DOUGLAS_RACHFORD:
        return _proximal_point(relation, target, config)
    if algorithm == Algorithm.FORWARD_STEP:
        if relation.as_affine is None:
            raise ConfigurationError(f"{relation!r} is not single valued; forward step does not apply")
        return forward_step(shift(relation.as_affine, target), config)
    return _exact(np.asarray(relation.inverse().apply(target), dtype=float), Algorithm.LINEAR_SOLVE)


def _solve_pointwise(relation: Pointwise, target: Vector, config: SolverConfig) -> SolveReport:
    algorithm = config.algorithm
    if algorithm == Algorithm.DOUGLAS_RACHFORD:
        return _proximal_point(relation, target, config)
    if algorithm == Algorithm.FORWARD_STEP:
        return forward_step(shift(relation, target), config)
    return _exact(np.asarray(relation.inverse().apply(target), dtype=float), Algorithm.DIRECT)


def _evaluate(relation: Relation, u: Vector, config: SolverConfig, nested: list) -> Vector:
    """Apply a relation, running nested solves for the inverses it contains."""
    if isinstance(relation, Sum):
        return sum((_evaluate(term, u, config, nested) for term in relation.terms), np.zeros(relation.dimension))
    if isinstance(relation, Shifted):
        return _evaluate(relation.inner, u, config, nested) - relation.offset
    if isinstance(relation, Scaled):
        return relation.alpha * _evaluate(relation.inner, u, config, nested)
    if isinstance(relation, Inverse):
        report = solve_inclusion(relation.inner, u, relation.config or config)
        nested.append(report)
        return np.asarray(report.solution, dtype=float)
    if isinstance(relation, LinearRelation) and not isinstance(relation, AffineOperator):
        inverse = relation.inverse()
        if isinstance(inverse, AffineOperator) and inverse.coercivity:
            report = solve_inclusion(inverse, u, config)
            nested.append(report)
            return np.asarray(report.solution, dtype=float)
    return np.asarray(relation.apply(u), dtype=float)


def _evaluate_report(relation: Relation, u: Vector, config: SolverConfig) -> SolveReport:
    nested: list[SolveReport] = []
    value = _evaluate(relation, u, config, nested)
    report = SolveReport(
        solution=value,
        converged=all(item.converged for item in nested),
        iterations=sum(item.iterations for item in nested),
        algorithm=Algorithm.DIRECT,
        nested=nested,
    )
    if len(nested) == 1:
        (inner,) = nested
        report.algorithm = inner.algorithm
        report.residual_history = list(inner.residual_history)
        report.empirical_contraction = inner.empirical_contraction
        report.gap = inner.gap
        report.inclusion_residual = inner.inclusion_residual
        report.alpha = inner.alpha
    return report


def solve_inclusion(relation: Relation, target, config: SolverConfig | None = None) -> SolveReport:
    """Find u with target in S(u).

    A top-level inverse is peeled, since target in S^-1(u) means u in S(target).
    """
    config = config or SolverConfig()
    target = np.array(as_vector(target, relation.dimension, name="target"))

    if isinstance(relation, Inverse):
        return _evaluate_report(relation.inner, target, config)
    if isinstance(relation, Shifted):
        return solve_inclusion(relation.inner, target + relation.offset, config)
    if isinstance(relation, Scaled):
        return solve_inclusion(relation.inner, target / relation.alpha, config)
    if isinstance(relation, AffineOperator):
        return _solve_affine(relation, target, config)
    if isinstance(relation, LinearRelation):
        return _solve_linear(relation, target, config)
    if isinstance(relation, Pointwise):
        return _solve_pointwise(relation, target, config)
    if isinstance(relation, Sum):
        return _solve_sum(relation, target, config)
    if config.algorithm != Algorithm.DOUGLAS_RACHFORD and (
        config.alpha is not None or all(relation.constants)
    ):
        return forward_step(shift(relation, target), config)
    if config.algorithm != Algorithm.FORWARD_STEP and relation.supports_resolvent:
        return _proximal_point(relation, target, config)
    raise ConfigurationError(
        f"No applicable algorithm for {type(relation).__name__}: it is neither a sum with resolvent-capable parts "
        "nor single valued with known constants"
    )


def problem_relation(problem: DriveProblem, config: SolverConfig) -> Relation:
    """The relation whose inclusion problem the drive poses: drive in R(response)."""
    natural = ADMITTANCE if problem.is_current_driven else IMPEDANCE
    form = natural if config.form == "auto" else config.form
    build = admittance_relation if form == ADMITTANCE else impedance_relation
    relation = build(problem.oneport, problem.n, problem.period, scale=problem.scale)
    if form != natural:
        relation = invert(relation)
    return relation


def solve_problem(problem: DriveProblem, config: SolverConfig | None = None) -> SolveReport:
    """Solve for the port response of a driven one-port and audit the branch waveforms."""
    config = config or SolverConfig()
    relation = problem_relation(problem, config)
    drive = as_vector(problem.drive, problem.n, name="drive")
    try:
        invert(relation).check_domain(drive)
    except CapabilityError:
        pass
    logger.debug("solving %s with %s", type(relation).__name__, config)

    report = solve_inclusion(relation, drive, config)
    solution = np.asarray(report.solution, dtype=float)
    if np.all(np.isfinite(solution)):
        report.solution = PeriodicSignal(samples=solution, period=problem.period)
    report.audit = audit_solution(problem, solution)
    logger.info(
        "audit kcl=%.3e kvl=%.3e device=%.3e response_norm=%.6e",
        report.audit.kcl,
        report.audit.kvl,
        report.audit.device,
        norm(solution),
    )
    return log_summary(report)
