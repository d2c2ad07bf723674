"""Bracketed scalar root finding, vectorised over independent samples."""
from __future__ import annotations

import logging
from typing import Callable

import numpy as np
from attr import attrib, attrs

from monotone_pss.const import BRACKET_MAX_EXPANSIONS, NEWTON_MAX_ITER, NEWTON_TOL
from monotone_pss.exceptions import ArgumentError, DomainError, NumericalError
from monotone_pss.typing import Vector
from monotone_pss.typing.law import ScalarFunctionProtocol

logger = logging.getLogger(__name__)

COLLAPSE_ULPS = 4


@attrs
class RootInfo:
    root = attrib()
    iterations = attrib()
    converged = attrib()
    history: list = attrib(repr=False)
    brackets: list = attrib(repr=False)


def _prepare_bracket(func, bracket, tol):
    lo, hi = (np.array(bound, dtype=float, ndmin=1) for bound in bracket)
    lo, hi = (np.array(side) for side in np.broadcast_arrays(lo, hi))
    tol = np.broadcast_to(np.asarray(tol, dtype=float), lo.shape)
    with np.errstate(all="ignore"):
        f_lo, _ = func(lo)
        f_hi, _ = func(hi)
    invalid = ~((f_lo <= 0) & (f_hi >= 0))
    if invalid.any():
        index = int(np.flatnonzero(invalid)[0])
        raise ArgumentError(
            f"Invalid bracket [{lo[index]!r}, {hi[index]!r}] at index {index}: "
            f"h(lo)={f_lo[index]!r}, h(hi)={f_hi[index]!r} do not change sign"
        )
    return lo, hi, f_lo, f_hi, tol


def _collapsed(lo, hi, x):
    return hi - lo <= COLLAPSE_ULPS * np.spacing(np.maximum(np.abs(x), 1.0))


def _finish(x, scalar, iterations, done, history, brackets, full_output, method):
    if not done.all():
        index = int(np.flatnonzero(~done)[0])
        raise NumericalError(f"{method} did not converge within {int(iterations.max())} iterations at index {index}")
    root = x[0] if scalar else x
    if full_output:
        return RootInfo(
            root=root,
            iterations=int(iterations[0]) if scalar else iterations,
            converged=True,
            history=history,
            brackets=brackets,
        )
    return root


def guarded_newton(
    func: ScalarFunctionProtocol | Callable[[Vector], tuple[Vector, Vector]],
    bracket,
    tol=NEWTON_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    *,
    full_output: bool = False,
):
    """Find roots of increasing functions inside a sign-changing bracket.

    Newton steps are taken from the current iterate; a step that leaves the bracket, is not finite,
    or does not shrink the residual fast enough is replaced by bisection.

    :param func: maps x to (h(x), h'(x)) elementwise
    :param bracket: (lo, hi) with h(lo) <= 0 <= h(hi), scalars or arrays
    :param tol: absolute residual tolerance, scalar or per element
    :param max_iter: iteration budget
    :param full_output: return a RootInfo instead of the bare root
    """
    scalar = all(np.ndim(bound) == 0 for bound in bracket)
    lo, hi, f_lo, f_hi, tol = _prepare_bracket(func, bracket, tol)

    x = np.where(f_lo == 0, lo, np.where(f_hi == 0, hi, 0.5 * (lo + hi)))
    dx_old = hi - lo
    with np.errstate(all="ignore"):
        f, df = func(x)
    done = (np.abs(f) <= tol) | _collapsed(lo, hi, x)
    iterations = np.zeros(x.shape, dtype=int)
    history, brackets = [x.copy()], [(lo.copy(), hi.copy())]

    for _ in range(max_iter):
        if done.all():
            break
        active = ~done
        lo = np.where(active & (f < 0), x, lo)
        hi = np.where(active & (f > 0), x, hi)

        with np.errstate(all="ignore"):
            newton = x - f / df
            slow = np.abs(2.0 * f) > np.abs(dx_old * df)
        bisecting = ~np.isfinite(newton) | (newton <= lo) | (newton >= hi) | slow
        midpoint = 0.5 * (lo + hi)
        step = np.where(bisecting, 0.5 * (hi - lo), np.abs(newton - x))
        x = np.where(active, np.where(bisecting, midpoint, newton), x)
        dx_old = np.where(active, step, dx_old)
        iterations += active

        with np.errstate(all="ignore"):
            f, df = func(x)
        done = done | (np.abs(f) <= tol) | _collapsed(lo, hi, x)
        history.append(x.copy())
        brackets.append((lo.copy(), hi.copy()))

    return _finish(x, scalar, iterations, done, history, brackets, full_output, "Guarded Newton")


def bisect(func, bracket, tol=NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER, *, full_output: bool = False):
    """Plain bisection with the same contract as guarded_newton."""
    scalar = all(np.ndim(bound) == 0 for bound in bracket)
    lo, hi, f_lo, f_hi, tol = _prepare_bracket(func, bracket, tol)

    x = np.where(f_lo == 0, lo, np.where(f_hi == 0, hi, 0.5 * (lo + hi)))
    with np.errstate(all="ignore"):
        f, _ = func(x)
    done = (np.abs(f) <= tol) | _collapsed(lo, hi, x)
    iterations = np.zeros(x.shape, dtype=int)
    history, brackets = [x.copy()], [(lo.copy(), hi.copy())]

    for _ in range(max_iter):
        if done.all():
            break
        active = ~done
        lo = np.where(active & (f < 0), x, lo)
        hi = np.where(active & (f > 0), x, hi)
        x = np.where(active, 0.5 * (lo + hi), x)
        iterations += active
        with np.errstate(all="ignore"):
            f, _ = func(x)
        done = done | (np.abs(f) <= tol) | _collapsed(lo, hi, x)
        history.append(x.copy())
        brackets.append((lo.copy(), hi.copy()))

    return _finish(x, scalar, iterations, done, history, brackets, full_output, "Bisection")


def expand_bracket(func, start, *, lower: float = -np.inf, width: float = 1.0):
    """Grow a bracket around start until the increasing func changes sign.

    Expansion doubles the step upwards; downwards it doubles too but, with a finite
    lower domain edge, halves the remaining distance to that edge instead of crossing it.
    """
    start = np.array(start, dtype=float, ndmin=1)
    with np.errstate(all="ignore"):
        f_start, _ = func(start)
    lo, hi = start.copy(), start.copy()
    f_lo, f_hi = f_start.copy(), f_start.copy()
    step = np.full(start.shape, float(width)) * np.maximum(1.0, np.abs(start))

    for _ in range(BRACKET_MAX_EXPANSIONS):
        need_hi = ~(f_hi >= 0)
        need_lo = ~(f_lo <= 0)
        if not (need_hi.any() or need_lo.any()):
            return lo, hi

        candidate_hi = hi + step
        candidate_lo = lo - step
        if np.isfinite(lower):
            candidate_lo = np.where(candidate_lo <= lower, lower + 0.5 * (lo - lower), candidate_lo)

        with np.errstate(all="ignore"):
            f_candidate_hi, _ = func(candidate_hi)
            f_candidate_lo, _ = func(candidate_lo)
        # Moving one side keeps the other side's sign; the old end becomes the new opposite bound.
        lo = np.where(need_hi, hi, lo)
        f_lo = np.where(need_hi, f_hi, f_lo)
        hi = np.where(need_hi, candidate_hi, hi)
        f_hi = np.where(need_hi, f_candidate_hi, f_hi)

        hi = np.where(need_lo, lo, hi)
        f_hi = np.where(need_lo, f_lo, f_hi)
        lo = np.where(need_lo, candidate_lo, lo)
        f_lo = np.where(need_lo, f_candidate_lo, f_lo)
        step = step * 2.0

    failed = ~((f_lo <= 0) & (f_hi >= 0))
    index = int(np.flatnonzero(failed)[0])
    raise DomainError("Target is outside the range of the scalar law", index=index)


def solve_increasing(func, target, *, lower: float = -np.inf, start=None, tol=None):
    """Solve func(x) = target elementwise for an increasing func.

    :param func: maps x to (f(x), f'(x))
    :param target: right-hand side values
    :param lower: open lower edge of func's domain
    :param start: initial point inside the domain (zero by default)
    :param tol: absolute tolerance, defaults to NEWTON_TOL * (1 + |target|)
    """
    target = np.array(target, dtype=float, ndmin=1)
    if start is None:
        start = np.zeros_like(target) if lower < 0 else np.full_like(target, lower + 1.0)
    if tol is None:
        tol = NEWTON_TOL * (1.0 + np.abs(target))

    def shifted(x):
        value, slope = func(x)
        return value - target, slope

    bracket = expand_bracket(shifted, start, lower=lower)
    return guarded_newton(shifted, bracket, tol)
