"""Picard iteration, forward step and Douglas-Rachford splitting."""
from __future__ import annotations

import logging
import warnings
from typing import Callable

import numpy as np

from monotone_pss.const import CONTRACTION_BURN_IN, Algorithm
from monotone_pss.exceptions import ConfigurationError, DivergenceError, DomainError
from monotone_pss.operators import Relation
from monotone_pss.solvers.config import SolverConfig
from monotone_pss.solvers.report import SolveReport
from monotone_pss.typing import Vector
from monotone_pss.utils import as_vector, norm, relative_threshold
from monotone_pss.warning_types import StepSizeWarning

logger = logging.getLogger(__name__)


def empirical_contraction(history, burn_in: int = CONTRACTION_BURN_IN) -> float | None:
    """Geometric mean of successive residual ratios after the first burn_in entries."""
    tail = [float(value) for value in history[burn_in:]]
    if len(tail) < 2 or not tail[0] > 0 or not all(np.isfinite(tail)):
        return None
    return (tail[-1] / tail[0]) ** (1.0 / (len(tail) - 1))


def log_summary(report: SolveReport) -> SolveReport:
    contraction = report.empirical_contraction
    logger.info(
        "converged=%s iterations=%d residual=%.6e contraction=%s",
        report.converged,
        report.iterations,
        report.final_residual,
        "n/a" if contraction is None else f"{contraction:.6f}",
    )
    return report


def _log_iteration(iteration: int, residual: float) -> None:
    logger.debug("iter=%d residual=%.6e", iteration, residual)


def picard(step: Callable[[Vector], Vector], x0, config: SolverConfig | None = None) -> SolveReport:
    """Iterate x <- F(x) until ||x_new - x|| <= tol (1 + ||x||)."""
    config = config or SolverConfig()
    x = np.array(as_vector(x0, name="initial guess"))
    history: list[float] = []
    converged = False
    iteration = 0
    while iteration < config.max_iter:
        iteration += 1
        try:
            x_new = np.asarray(step(x), dtype=float)
        except DomainError as e:
            raise e.at_iteration(iteration) from e
        residual = norm(x_new - x)
        history.append(residual)
        _log_iteration(iteration, residual)
        converged = residual <= relative_threshold(config.tol, norm(x))
        x = x_new
        if converged:
            break

    return log_summary(
        SolveReport(
            solution=x,
            converged=converged,
            iterations=iteration,
            residual_history=history,
            empirical_contraction=empirical_contraction(history),
            algorithm="picard",
        )
    )


def default_step_size(relation: Relation) -> float:
    m, lipschitz = relation.constants
    if not (m and lipschitz):
        raise ConfigurationError(
            f"Forward step needs alpha or known constants m > 0 and L; "
            f"{type(relation).__name__} reports m={m!r}, L={lipschitz!r}"
        )
    return m / lipschitz**2


def forward_step(relation: Relation, config: SolverConfig | None = None) -> SolveReport:
    """x <- x - alpha S(x) until ||S(x)|| <= tol (1 + ||S(x0)||).

    :param relation: single valued along the iterates; strongly monotone and Lipschitz for guaranteed convergence
    :param config: alpha defaults to m / L^2
    """
    config = config or SolverConfig()
    alpha = config.alpha if config.alpha is not None else default_step_size(relation)
    m, lipschitz = relation.constants
    if m and lipschitz and not alpha < 2 * m / lipschitz**2:
        warnings.warn(StepSizeWarning(alpha, m, lipschitz))

    x = config.start(relation.dimension)

    def evaluate(point, iteration):
        try:
            return np.asarray(relation.apply(point), dtype=float)
        except DomainError as e:
            raise e.at_iteration(iteration) from e

    y = evaluate(x, 0)
    residual = norm(y)
    history = [residual]
    threshold = relative_threshold(config.tol, residual)
    _log_iteration(0, residual)
    iteration = 0
    while not residual <= threshold and iteration < config.max_iter:
        x = x - alpha * y
        iteration += 1
        y = evaluate(x, iteration)
        residual = norm(y)
        history.append(residual)
        _log_iteration(iteration, residual)
        if iteration >= config.divergence_window and not residual <= config.divergence_factor * min(history):
            report = SolveReport(
                solution=x,
                converged=False,
                iterations=iteration,
                residual_history=history,
                empirical_contraction=empirical_contraction(history),
                algorithm=Algorithm.FORWARD_STEP,
                alpha=alpha,
            )
            log_summary(report)
            raise DivergenceError(
                f"Forward step residual {residual:.3e} exceeds {config.divergence_factor:g} times its minimum "
                f"{min(history):.3e} after {iteration} iterations (alpha={alpha:.6g})",
                report=report,
            )

    return log_summary(
        SolveReport(
            solution=x,
            converged=bool(residual <= threshold),
            iterations=iteration,
            residual_history=history,
            empirical_contraction=empirical_contraction(history),
            algorithm=Algorithm.FORWARD_STEP,
            alpha=alpha,
        )
    )


def douglas_rachford(first: Relation, second: Relation, config: SolverConfig | None = None) -> SolveReport:
    """Find x with 0 in S1(x) + S2(x) from the resolvents of S1 and S2.

    The auxiliary iterate ``i`` is not a current. The step x^{k+1} is returned; the gap
    ||x^{k+1} - x^{k+1/2}|| / lam bounds the norm of the inclusion residual y1 + y2 built
    from the resolvent selections.
    """
    config = config or SolverConfig()
    lam = config.lam
    auxiliary = config.start(first.dimension)
    history: list[float] = []
    x = auxiliary
    converged = False
    iteration = 0
    while iteration < config.max_iter:
        iteration += 1
        try:
            x_half = np.asarray(first.resolvent(auxiliary, lam), dtype=float)
            reflected = 2.0 * x_half - auxiliary
            x = np.asarray(second.resolvent(reflected, lam), dtype=float)
        except DomainError as e:
            raise e.at_iteration(iteration) from e
        auxiliary = auxiliary + x - x_half
        gap = norm(x - x_half)
        history.append(gap)
        _log_iteration(iteration, gap)
        if gap <= relative_threshold(config.tol, norm(x)):
            converged = True
            break

    gap = history[-1] if history else 0.0
    return log_summary(
        SolveReport(
            solution=x,
            converged=converged,
            iterations=iteration,
            residual_history=history,
            empirical_contraction=empirical_contraction(history),
            algorithm=Algorithm.DOUGLAS_RACHFORD,
            gap=gap,
            inclusion_residual=gap / lam,
        )
    )
