from __future__ import annotations

import attr
import numpy as np
from attr import attrib, attrs

from monotone_pss import const
from monotone_pss.const import ALGORITHM_BY_FLAG, Algorithm
from monotone_pss.exceptions import ArgumentError
from monotone_pss.utils import as_vector

ALGORITHMS = (Algorithm.FORWARD_STEP, Algorithm.DOUGLAS_RACHFORD, Algorithm.AUTO)
FORMS = ("auto", const.IMPEDANCE, const.ADMITTANCE)


def _algorithm(value):
    return ALGORITHM_BY_FLAG.get(value, value)


def _positive_or_none(instance, attribute, value):
    if value is not None and not (np.isfinite(value) and value > 0):
        raise ArgumentError(f"{attribute.name} must be positive, got {value!r}")


def _positive(instance, attribute, value):
    if not (np.isfinite(value) and value > 0):
        raise ArgumentError(f"{attribute.name} must be positive, got {value!r}")


def _optional_float(value):
    return None if value is None else float(value)


@attrs(frozen=True)
class SolverConfig:
    """Algorithm choice, step parameters and stopping rule of one solve."""

    algorithm: str = attrib(default=Algorithm.AUTO, converter=_algorithm)
    alpha: float | None = attrib(default=None, converter=_optional_float, validator=_positive_or_none)
    lam: float = attrib(default=const.DEFAULT_LAMBDA, converter=float, validator=_positive)
    tol: float = attrib(default=const.DEFAULT_TOL, converter=float, validator=_positive)
    max_iter: int = attrib(default=const.DEFAULT_MAX_ITER)
    initial_guess = attrib(default=None, eq=False)
    form: str = attrib(default="auto")
    divergence_factor: float = attrib(default=const.DIVERGENCE_FACTOR, converter=float, validator=_positive)
    divergence_window: int = attrib(default=const.DIVERGENCE_WINDOW)

    @algorithm.validator
    def _check_algorithm(self, attribute, value):
        if value not in ALGORITHMS:
            raise ArgumentError(f"Unknown algorithm {value!r}, expected one of {ALGORITHMS}")

    @max_iter.validator
    def _check_max_iter(self, attribute, value):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise ArgumentError(f"max_iter must be an integer >= 1, got {value!r}")

    @divergence_window.validator
    def _check_window(self, attribute, value):
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
            raise ArgumentError(f"divergence_window must be an integer >= 1, got {value!r}")

    @form.validator
    def _check_form(self, attribute, value):
        if value not in FORMS:
            raise ArgumentError(f"Unknown form {value!r}, expected one of {FORMS}")

    def with_overrides(self, **overrides) -> SolverConfig:
        """Copy with every override that is not None applied."""
        return attr.evolve(self, **{key: value for key, value in overrides.items() if value is not None})

    def start(self, n: int):
        """Initial iterate of dimension n, zeros unless an initial guess is configured."""
        if self.initial_guess is None:
            return np.zeros(n)
        return np.array(as_vector(self.initial_guess, n, name="initial guess"))
