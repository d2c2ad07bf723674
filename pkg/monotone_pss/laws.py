"""Scalar monotone laws and their algebra.

A law is a monotone relation on the reals. Lifted sample by sample it becomes a relation on
periodic signals, so sums, scalings and inverses of laws stay separable in time.
"""
from __future__ import annotations

from abc import ABCMeta, abstractmethod
from functools import cached_property

import numpy as np
from attr import attrib, attrs

from monotone_pss.exceptions import ArgumentError, CapabilityError, DomainError, NumericalError
from monotone_pss.newton import solve_increasing
from monotone_pss.typing import Vector


def _array(x) -> Vector:
    return np.asarray(x, dtype=float)


class ScalarLaw(metaclass=ABCMeta):
    """Increasing scalar law x -> f(x), evaluated elementwise."""

    @abstractmethod
    def evaluate(self, x) -> Vector:
        """Values without the domain check; may be infinite or nan outside the domain."""

    def value(self, x) -> Vector:
        x = _array(x)
        self.check_domain(x)
        return self.evaluate(x)

    @abstractmethod
    def derivative(self, x) -> Vector:
        ...

    @property
    def domain_lower(self) -> float:
        """Open lower edge of the domain."""
        return -np.inf

    @property
    def range_lower(self) -> float:
        """Infimum of the values taken by the law."""
        return -np.inf

    def slope_bounds(self) -> tuple[float | None, float | None]:
        return None, None

    def check_domain(self, x) -> None:
        lower = self.domain_lower
        if np.isfinite(lower):
            outside = np.flatnonzero(~(_array(x) > lower))
            if outside.size:
                index = int(outside[0])
                raise DomainError(
                    f"{type(self).__name__} is defined for x > {lower!r}, got {_array(x).flat[index]!r}",
                    index=index,
                )

    def resolvent(self, z, lam: float) -> Vector:
        """Solve x + lam * f(x) = z elementwise."""
        z = _array(z)

        def shifted(x):
            return x + lam * self.evaluate(x), 1.0 + lam * self.derivative(x)

        return solve_increasing(shifted, z, lower=self.domain_lower).reshape(z.shape)

    def inverse(self) -> ScalarLaw:
        return InverseLaw(self)

    def scaled(self, alpha: float) -> ScalarLaw:
        return ScaledLaw(alpha, self)

    def graph(self, x) -> tuple[Vector, Vector]:
        x = _array(x)
        return x, self.value(x)

    @property
    def sampling_floor(self) -> float | None:
        lower = self.domain_lower
        return float(lower) if np.isfinite(lower) else None

    def __call__(self, x):
        return self.value(x)


@attrs(frozen=True)
class LinearLaw(ScalarLaw):
    gain: float = attrib(converter=float)

    def evaluate(self, x):
        return self.gain * _array(x)

    def derivative(self, x):
        return np.full_like(_array(x), self.gain)

    def resolvent(self, z, lam):
        denominator = 1.0 + lam * self.gain
        if denominator == 0:
            raise NumericalError(f"Resolvent of gain {self.gain!r} is singular at lambda={lam!r}")
        return _array(z) / denominator

    def inverse(self):
        if self.gain == 0:
            raise CapabilityError("A zero gain law has no inverse law")
        return LinearLaw(1.0 / self.gain)

    def scaled(self, alpha):
        return LinearLaw(alpha * self.gain)

    @property
    def range_lower(self):
        return 0.0 if self.gain == 0 else -np.inf

    def slope_bounds(self):
        return self.gain, abs(self.gain)


@attrs(frozen=True)
class ScaledLaw(ScalarLaw):
    alpha: float = attrib(converter=float)
    law: ScalarLaw = attrib()

    @alpha.validator
    def _check_alpha(self, attribute, value):
        if not value > 0:
            raise ArgumentError(f"Scaling factor must be positive, got {value!r}")

    def evaluate(self, x):
        return self.alpha * self.law.evaluate(x)

    def derivative(self, x):
        return self.alpha * self.law.derivative(x)

    def resolvent(self, z, lam):
        return self.law.resolvent(z, lam * self.alpha)

    def scaled(self, alpha):
        return ScaledLaw(alpha * self.alpha, self.law)

    @property
    def domain_lower(self):
        return self.law.domain_lower

    @property
    def range_lower(self):
        return self.alpha * self.law.range_lower

    def slope_bounds(self):
        m, lipschitz = self.law.slope_bounds()
        return (
            None if m is None else self.alpha * m,
            None if lipschitz is None else self.alpha * lipschitz,
        )

    def graph(self, x):
        inputs, outputs = self.law.graph(x)
        return inputs, self.alpha * outputs

    @property
    def sampling_floor(self):
        return self.law.sampling_floor


@attrs(frozen=True)
class SumLaw(ScalarLaw):
    laws: tuple = attrib(converter=tuple)

    @laws.validator
    def _check_laws(self, attribute, value):
        if len(value) < 2:
            raise ArgumentError("A sum of laws needs at least two terms")

    def evaluate(self, x):
        x = _array(x)
        return sum((law.evaluate(x) for law in self.laws), np.zeros_like(x))

    def derivative(self, x):
        x = _array(x)
        return sum((law.derivative(x) for law in self.laws), np.zeros_like(x))

    @property
    def domain_lower(self):
        return max(law.domain_lower for law in self.laws)

    @property
    def range_lower(self):
        return float(sum(law.range_lower for law in self.laws))

    def slope_bounds(self):
        bounds = [law.slope_bounds() for law in self.laws]
        ms, lipschitz = zip(*bounds)
        return (
            None if any(m is None for m in ms) else float(sum(ms)),
            None if any(value is None for value in lipschitz) else float(sum(lipschitz)),
        )


@attrs(frozen=True)
class InverseLaw(ScalarLaw):
    """Inverse of an increasing law, evaluated by bracketed Newton solves."""

    law: ScalarLaw = attrib()

    def evaluate(self, y):
        y = _array(y)

        def forward(x):
            return self.law.evaluate(x), self.law.derivative(x)

        return solve_increasing(forward, y.ravel(), lower=self.law.domain_lower).reshape(y.shape)

    def derivative(self, y):
        with np.errstate(divide="ignore"):
            return 1.0 / self.law.derivative(self.evaluate(y))

    def resolvent(self, z, lam):
        z = _array(z)
        return z - lam * self.law.resolvent(z / lam, 1.0 / lam)

    def inverse(self):
        return self.law

    @property
    def domain_lower(self):
        return self.law.range_lower

    @property
    def range_lower(self):
        return self.law.domain_lower

    def slope_bounds(self):
        m, lipschitz = self.law.slope_bounds()
        inverse_m = 1.0 / lipschitz if lipschitz else (0.0 if m is not None and m >= 0 else None)
        inverse_lipschitz = 1.0 / m if m else None
        return inverse_m, inverse_lipschitz

    def graph(self, x):
        inputs, outputs = self.law.graph(x)
        return outputs, inputs

    @property
    def sampling_floor(self):
        return self.law.sampling_floor


@attrs(frozen=True)
class PiecewiseLinearLaw(ScalarLaw):
    """Continuous piecewise linear law through knots, extended linearly past the end knots."""

    knots_x = attrib(converter=_array)
    knots_y = attrib(converter=_array)

    def __attrs_post_init__(self):
        if self.knots_x.ndim != 1 or self.knots_x.shape != self.knots_y.shape or self.knots_x.size < 2:
            raise ArgumentError("A piecewise linear law needs at least two knots with matching coordinates")
        if not np.all(np.diff(self.knots_x) > 0):
            raise ArgumentError("Knot abscissae must be strictly increasing")

    @cached_property
    def slopes(self) -> Vector:
        return np.diff(self.knots_y) / np.diff(self.knots_x)

    def _segment(self, knots, x):
        return np.clip(np.searchsorted(knots, x, side="right") - 1, 0, knots.size - 2)

    def evaluate(self, x):
        x = _array(x)
        segment = self._segment(self.knots_x, x)
        return self.knots_y[segment] + self.slopes[segment] * (x - self.knots_x[segment])

    def derivative(self, x):
        return self.slopes[self._segment(self.knots_x, _array(x))]

    def resolvent(self, z, lam):
        z = _array(z)
        growth = 1.0 + lam * self.slopes
        if not np.all(growth > 0):
            raise NumericalError(f"Resolvent of a decreasing segment is not single valued at lambda={lam!r}")
        # x + lam * f(x) is piecewise linear with knots at x_k + lam * y_k
        knots = self.knots_x + lam * self.knots_y
        segment = self._segment(knots, z)
        return self.knots_x[segment] + (z - knots[segment]) / growth[segment]

    def inverse(self):
        if np.all(self.slopes > 0):
            return PiecewiseLinearLaw(self.knots_y, self.knots_x)
        return InverseLaw(self)

    @property
    def range_lower(self):
        return -np.inf if self.slopes[0] > 0 else float(self.knots_y[0])

    def slope_bounds(self):
        return float(self.slopes.min()), float(np.abs(self.slopes).max())
