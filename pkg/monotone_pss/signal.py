"""Discrete periodic signals and the discretised derivative and integral."""
from __future__ import annotations

import numpy as np
from attr import Factory, attrib, attrs

from monotone_pss.const import ZERO_MEAN_RTOL
from monotone_pss.exceptions import ArgumentError, DomainError
from monotone_pss.operators import AffineOperator, LinearRelation
from monotone_pss.typing import Literal, Vector
from monotone_pss.utils import as_vector, check_positive


def _samples(value) -> Vector:
    samples = np.array(value, dtype=float)
    samples.setflags(write=False)
    return samples


@attrs(frozen=True, eq=False)
class PeriodicSignal:
    """One period of a discrete T-periodic trajectory; sample k is read modulo N."""

    samples: Vector = attrib(converter=_samples)
    period: float = attrib(default=1.0, converter=float)

    @samples.validator
    def _check_samples(self, attribute, value):
        if value.ndim != 1 or value.shape[0] < 2:
            raise ArgumentError(f"A periodic signal needs at least two samples, got shape {value.shape}")
        if not np.all(np.isfinite(value)):
            raise ArgumentError("Signal samples must be finite")

    @period.validator
    def _check_period(self, attribute, value):
        check_positive("period", value)

    def __array__(self, dtype=None, copy=None):
        return np.array(self.samples, dtype=dtype)

    def __len__(self):
        return self.samples.shape[0]

    def __getitem__(self, index):
        return self.samples[index % len(self)] if isinstance(index, (int, np.integer)) else self.samples[index]

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def step(self) -> float:
        return self.period / self.n

    @property
    def times(self) -> Vector:
        return np.arange(self.n) * self.step

    def mean(self) -> float:
        return float(np.mean(self.samples))

    def with_samples(self, samples) -> PeriodicSignal:
        return PeriodicSignal(samples=samples, period=self.period)

    @classmethod
    def zeros(cls, n: int, period: float = 1.0) -> PeriodicSignal:
        return cls(samples=np.zeros(n), period=period)


def mean(signal) -> float:
    return float(np.mean(np.asarray(signal, dtype=float)))


@attrs(frozen=True)
class Sinusoid:
    amplitude: float = attrib(converter=float)
    frequency: float = attrib(converter=float)
    phase: float = attrib(default=0.0, converter=float)


@attrs(frozen=True)
class DriveSpec:
    bias: float = attrib(default=0.0, converter=float)
    sinusoids: tuple = attrib(default=Factory(tuple), converter=tuple)


HARMONIC_RTOL = 1e-9
DERIVATIVE_SCALES = ("physical", "sample")


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 2:
        raise ArgumentError(f"Number of samples must be an integer >= 2, got {n!r}")
    return int(n)


def sample_drive(spec: DriveSpec, n: int, period: float) -> PeriodicSignal:
    """Sample bias + sum of a_k sin(2 pi f_k t + phi_k) at t_j = j T / N."""
    n = _check_n(n)
    period = check_positive("period", period)
    times = np.arange(n) * period / n
    samples = np.full(n, spec.bias)
    for sinusoid in spec.sinusoids:
        cycles = sinusoid.frequency * period
        if abs(cycles - round(cycles)) > HARMONIC_RTOL * max(1.0, abs(cycles)):
            raise ArgumentError(
                f"Frequency {sinusoid.frequency!r} Hz is not a multiple of 1/{period!r} s; "
                "the sampled drive would not be periodic"
            )
        samples += sinusoid.amplitude * np.sin(2 * np.pi * sinusoid.frequency * times + sinusoid.phase)
    return PeriodicSignal(samples=samples, period=period)


@attrs(frozen=True)
class BackwardDifference:
    """Periodic backward difference (x_k - x_{k-1}) scaled by N/T, or per sample."""

    scale: Literal["physical", "sample"] = attrib(default="physical")

    @scale.validator
    def _check_scale(self, attribute, value):
        if value not in DERIVATIVE_SCALES:
            raise ArgumentError(f"Derivative scale must be one of {DERIVATIVE_SCALES}, got {value!r}")

    def rate(self, n: int, period: float) -> float:
        return n / period if self.scale == "physical" else 1.0

    @staticmethod
    def difference_matrix(n: int) -> Vector:
        return np.eye(n) - np.roll(np.eye(n), 1, axis=0)


def difference_block(n: int) -> Vector:
    """Lower bidiagonal D_T of size N-1."""
    size = _check_n(n) - 1
    return np.eye(size) - np.eye(size, k=-1)


def summation_block(n: int) -> Vector:
    """Lower triangular all-ones J_T of size N-1."""
    size = _check_n(n) - 1
    return np.tril(np.ones((size, size)))


class DerivativeOperator(AffineOperator):
    """gain * D on R^N with D the periodic backward difference; outputs are zero mean."""

    def __init__(self, n: int, period: float, *, gain: float = 1.0, scheme: BackwardDifference | None = None):
        self.n = _check_n(n)
        self.period = check_positive("period", period)
        self.gain = check_positive("gain", gain)
        self.scheme = scheme or BackwardDifference()
        self.rate = self.scheme.rate(self.n, self.period)
        super().__init__(self.gain * self.rate * self.scheme.difference_matrix(self.n))

    def inverse(self):
        return IntegralOperator(self.n, self.period, gain=self.gain, scheme=self.scheme)

    def __repr__(self):
        return (
            f"DerivativeOperator(n={self.n}, period={self.period!r}, gain={self.gain!r}, scale={self.scheme.scale!r})"
        )


class IntegralOperator(LinearRelation):
    """Inverse of gain * D: zero-mean inputs, zero-offset selection y_{N-1} = 0."""

    def __init__(
        self,
        n: int,
        period: float,
        *,
        gain: float = 1.0,
        scheme: BackwardDifference | None = None,
        zero_mean_rtol: float = ZERO_MEAN_RTOL,
    ):
        self.n = _check_n(n)
        self.period = check_positive("period", period)
        self.gain = check_positive("gain", gain)
        self.scheme = scheme or BackwardDifference()
        self.rate = self.scheme.rate(self.n, self.period)
        self.zero_mean_rtol = check_positive("zero_mean_rtol", zero_mean_rtol, strict=False)
        super().__init__(self.gain * self.rate * self.scheme.difference_matrix(self.n), np.eye(self.n))

    def check_domain(self, u):
        u = as_vector(u, self.n)
        offset = float(np.mean(u))
        tolerance = self.zero_mean_rtol * (np.linalg.norm(u) + 1.0)
        if abs(offset) > tolerance:
            raise DomainError(
                f"Input mean {offset:.6g} violates the zero-mean constraint of the integral domain "
                f"(tolerance {tolerance:.3g})"
            )

    def _apply(self, u):
        self.check_domain(u)
        output = np.zeros(self.n)
        output[:-1] = np.cumsum(u[:-1]) / (self.gain * self.rate)
        return output

    def inverse(self):
        return DerivativeOperator(self.n, self.period, gain=self.gain, scheme=self.scheme)

    @property
    def sampling_zero_mean(self):
        return True

    def __repr__(self):
        return f"IntegralOperator(n={self.n}, period={self.period!r}, gain={self.gain!r}, scale={self.scheme.scale!r})"


def make_derivative(
    n: int, period: float, *, gain: float = 1.0, scale: str = "physical"
) -> DerivativeOperator:
    return DerivativeOperator(n, period, gain=gain, scheme=BackwardDifference(scale=scale))


def make_integral(
    n: int,
    period: float,
    *,
    gain: float = 1.0,
    scale: str = "physical",
    zero_mean_rtol: float = ZERO_MEAN_RTOL,
) -> IntegralOperator:
    return IntegralOperator(n, period, gain=gain, scheme=BackwardDifference(scale=scale), zero_mean_rtol=zero_mean_rtol)
