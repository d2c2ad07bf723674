"""Device laws and their relations on the discrete signal space."""
from __future__ import annotations

from typing import Union

import numpy as np
from attr import attrib, attrs

from monotone_pss import const
from monotone_pss.exceptions import ArgumentError
from monotone_pss.laws import (
    InverseLaw,
    LinearLaw,
    PiecewiseLinearLaw,
    ScalarLaw,
    ScaledLaw,
    SumLaw,
)
from monotone_pss.newton import guarded_newton
from monotone_pss.operators import Pointwise, Relation
from monotone_pss.signal import BackwardDifference, DerivativeOperator, IntegralOperator
from monotone_pss.typing.law import DeviceProtocol
from monotone_pss.utils import check_positive

__all__ = [
    "Capacitor",
    "Inductor",
    "InverseLaw",
    "LinearLaw",
    "LinearResistor",
    "PiecewiseLinearLaw",
    "PiecewiseLinearResistor",
    "ScaledLaw",
    "ShockleyConductanceLaw",
    "ShockleyDiode",
    "ShockleyLaw",
    "SumLaw",
    "capacitor_admittance",
    "capacitor_impedance",
    "device_admittance",
    "device_impedance",
    "diode_resolvent_scalar",
    "diode_v_of_i",
    "inductor_admittance",
    "inductor_impedance",
    "lift_pointwise",
]


def _array(x):
    return np.asarray(x, dtype=float)


@attrs(frozen=True)
class _ShockleyParameters:
    saturation_current: float = attrib(default=const.SATURATION_CURRENT, converter=float)
    ideality: float = attrib(default=const.IDEALITY_FACTOR, converter=float)
    thermal_voltage: float = attrib(default=const.THERMAL_VOLTAGE, converter=float)

    def __attrs_post_init__(self):
        check_positive("saturation_current", self.saturation_current)
        check_positive("thermal_voltage", self.thermal_voltage)
        if not self.ideality >= 1:
            raise ArgumentError(f"Ideality factor must be >= 1, got {self.ideality!r}")

    @property
    def emission_voltage(self) -> float:
        """n * V_T."""
        return self.ideality * self.thermal_voltage


@attrs(frozen=True)
class ShockleyLaw(_ShockleyParameters, ScalarLaw):
    """Current-controlled diode law v = n V_T ln(1 + i / I_s)."""

    def evaluate(self, i):
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.emission_voltage * np.log1p(_array(i) / self.saturation_current)

    def derivative(self, i):
        with np.errstate(divide="ignore"):
            return self.emission_voltage / (_array(i) + self.saturation_current)

    @property
    def domain_lower(self):
        return -self.saturation_current

    def slope_bounds(self):
        return 0.0, None

    def resolvent(self, z, lam):
        """Solve i + lam * v(i) = z through the voltage v, which keeps i above -I_s."""
        z = _array(z)
        flat = z.ravel()
        nvt, saturation = self.emission_voltage, self.saturation_current

        def residual(v):
            with np.errstate(over="ignore"):
                growth = np.exp(v / nvt)
            return saturation * np.expm1(v / nvt) + lam * v - flat, saturation / nvt * growth + lam

        with np.errstate(divide="ignore", over="ignore"):
            upper = np.minimum(flat / lam, nvt * np.log1p(np.maximum(flat, 0.0) / saturation))
        lo = np.where(flat >= 0, 0.0, flat / lam)
        hi = np.where(flat >= 0, upper, 0.0)
        voltage = guarded_newton(residual, (lo, hi), const.NEWTON_TOL * (1.0 + np.abs(flat)))
        current = np.maximum(saturation * np.expm1(voltage / nvt), -saturation * (1.0 - const.DOMAIN_GUARD))
        return current.reshape(z.shape)

    def inverse(self):
        return ShockleyConductanceLaw(self.saturation_current, self.ideality, self.thermal_voltage)


@attrs(frozen=True)
class ShockleyConductanceLaw(_ShockleyParameters, ScalarLaw):
    """Voltage-controlled diode law i = I_s (exp(v / n V_T) - 1)."""

    def evaluate(self, v):
        with np.errstate(over="ignore"):
            return self.saturation_current * np.expm1(_array(v) / self.emission_voltage)

    def derivative(self, v):
        with np.errstate(over="ignore"):
            return self.saturation_current / self.emission_voltage * np.exp(_array(v) / self.emission_voltage)

    @property
    def range_lower(self):
        return -self.saturation_current

    def slope_bounds(self):
        return 0.0, None

    def resolvent(self, z, lam):
        """Solve v + lam * i(v) = z."""
        z = _array(z)
        flat = z.ravel()

        def residual(v):
            return v + lam * self.evaluate(v) - flat, 1.0 + lam * self.derivative(v)

        with np.errstate(divide="ignore"):
            upper = np.minimum(
                flat, self.emission_voltage * np.log1p(np.maximum(flat, 0.0) / (lam * self.saturation_current))
            )
        lo = np.where(flat >= 0, 0.0, flat)
        hi = np.where(flat >= 0, upper, 0.0)
        return guarded_newton(residual, (lo, hi), const.NEWTON_TOL * (1.0 + np.abs(flat))).reshape(z.shape)

    def inverse(self):
        return ShockleyLaw(self.saturation_current, self.ideality, self.thermal_voltage)


def _check_resistance(instance, attribute, value):
    if not np.isfinite(value) or value == 0:
        raise ArgumentError(f"Resistance must be finite and nonzero, got {value!r}")


@attrs(frozen=True)
class LinearResistor:
    """v = R i; a negative R describes an active element."""

    resistance: float = attrib(converter=float, validator=_check_resistance)

    @property
    def kind(self):
        return const.RESISTOR if self.resistance > 0 else const.NEGATIVE_RESISTOR

    def impedance(self) -> ScalarLaw:
        return LinearLaw(self.resistance)

    def admittance(self) -> ScalarLaw:
        return LinearLaw(1.0 / self.resistance)


@attrs(frozen=True)
class ShockleyDiode(_ShockleyParameters):
    kind = const.DIODE

    def impedance(self) -> ScalarLaw:
        return ShockleyLaw(self.saturation_current, self.ideality, self.thermal_voltage)

    def admittance(self) -> ScalarLaw:
        return ShockleyConductanceLaw(self.saturation_current, self.ideality, self.thermal_voltage)


def _breakpoints(value):
    return tuple((float(current), float(voltage)) for current, voltage in value)


@attrs(frozen=True)
class PiecewiseLinearResistor:
    """Continuous nondecreasing v(i) through sorted (i, v) breakpoints."""

    breakpoints: tuple = attrib(converter=_breakpoints)
    kind = const.PWL_RESISTOR

    @breakpoints.validator
    def _check_breakpoints(self, attribute, value):
        if len(value) < 2:
            raise ArgumentError("A piecewise linear resistor needs at least two breakpoints")
        currents, voltages = map(np.array, zip(*value))
        if not np.all(np.diff(currents) > 0):
            raise ArgumentError("Breakpoint currents must be strictly increasing")
        if not np.all(np.diff(voltages) >= 0):
            raise ArgumentError("Breakpoint voltages must be nondecreasing")

    def impedance(self) -> ScalarLaw:
        currents, voltages = zip(*self.breakpoints)
        return PiecewiseLinearLaw(currents, voltages)

    def admittance(self) -> ScalarLaw:
        return self.impedance().inverse()


@attrs(frozen=True)
class Capacitor:
    """q = C v."""

    capacitance: float = attrib(converter=float)
    kind = const.CAPACITOR

    @capacitance.validator
    def _check_capacitance(self, attribute, value):
        check_positive("capacitance", value)


@attrs(frozen=True)
class Inductor:
    """phi = L i."""

    inductance: float = attrib(converter=float)
    kind = const.INDUCTOR

    @inductance.validator
    def _check_inductance(self, attribute, value):
        check_positive("inductance", value)


Resistive = Union[LinearResistor, ShockleyDiode, PiecewiseLinearResistor]
Device = Union[LinearResistor, ShockleyDiode, PiecewiseLinearResistor, Capacitor, Inductor]


def diode_v_of_i(diode: ShockleyDiode, i):
    """n V_T ln(i / I_s + 1); scalars in, scalars out."""
    value = diode.impedance().value(np.atleast_1d(_array(i)))
    return float(value[0]) if np.ndim(i) == 0 else value


def diode_resolvent_scalar(diode: ShockleyDiode, z, lam: float):
    """Unique x > -I_s with x + lam * v(x) = z."""
    lam = check_positive("lambda", lam)
    value = diode.impedance().resolvent(np.atleast_1d(_array(z)), lam)
    return float(value[0]) if np.ndim(z) == 0 else value


def lift_pointwise(law: ScalarLaw | DeviceProtocol, n: int) -> Pointwise:
    """Apply a scalar law (or a resistive device in impedance form) at every sample."""
    if isinstance(law, DeviceProtocol):
        law = law.impedance()
    if not isinstance(law, ScalarLaw):
        raise ArgumentError(f"Cannot lift {type(law).__name__} pointwise")
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ArgumentError(f"Dimension must be a positive integer, got {n!r}")
    return Pointwise(law, int(n))


def capacitor_admittance(capacitor: Capacitor, n: int, period: float, *, scale: str = "physical"):
    """v -> i = C D v."""
    return DerivativeOperator(n, period, gain=capacitor.capacitance, scheme=BackwardDifference(scale=scale))


def capacitor_impedance(capacitor: Capacitor, n: int, period: float, *, scale: str = "physical"):
    """i -> v = (1/C) J i on zero-mean currents."""
    return IntegralOperator(n, period, gain=capacitor.capacitance, scheme=BackwardDifference(scale=scale))


def inductor_impedance(inductor: Inductor, n: int, period: float, *, scale: str = "physical"):
    """i -> v = L D i."""
    return DerivativeOperator(n, period, gain=inductor.inductance, scheme=BackwardDifference(scale=scale))


def inductor_admittance(inductor: Inductor, n: int, period: float, *, scale: str = "physical"):
    """v -> i = (1/L) J v on zero-mean voltages."""
    return IntegralOperator(n, period, gain=inductor.inductance, scheme=BackwardDifference(scale=scale))


def device_impedance(device: Device, n: int, period: float, *, scale: str = "physical") -> Relation:
    if isinstance(device, Capacitor):
        return capacitor_impedance(device, n, period, scale=scale)
    if isinstance(device, Inductor):
        return inductor_impedance(device, n, period, scale=scale)
    return lift_pointwise(device.impedance(), n)


def device_admittance(device: Device, n: int, period: float, *, scale: str = "physical") -> Relation:
    if isinstance(device, Capacitor):
        return capacitor_admittance(device, n, period, scale=scale)
    if isinstance(device, Inductor):
        return inductor_admittance(device, n, period, scale=scale)
    return lift_pointwise(device.admittance(), n)
