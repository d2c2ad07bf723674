"""Post-solve reconstruction of branch waveforms and physical residuals."""
from __future__ import annotations

import logging

import numpy as np
from attr import Factory, attrib, attrs

from monotone_pss.elements import Capacitor, Inductor, device_admittance, device_impedance
from monotone_pss.exceptions import MonotonePSSError
from monotone_pss.network.model import ROOT_PATH, DriveProblem, Element, Series, child_path
from monotone_pss.network.relations import admittance_relation, impedance_relation
from monotone_pss.typing import Vector
from monotone_pss.utils import as_vector

logger = logging.getLogger(__name__)


@attrs
class Branch:
    path: str = attrib()
    kind: str = attrib()
    current: Vector = attrib(repr=False)
    voltage: Vector = attrib(repr=False)


@attrs
class ResidualReport:
    """Worst KCL, KVL and device-law residuals over every node of the tree."""

    kcl: float = attrib(default=0.0)
    kvl: float = attrib(default=0.0)
    device: float = attrib(default=0.0)
    branches: dict = attrib(default=Factory(dict), repr=False)
    failures: list = attrib(default=Factory(list))

    @property
    def worst(self) -> float:
        return max(self.kcl, self.kvl, self.device)

    def within(self, tolerance: float) -> bool:
        return not self.failures and self.worst <= tolerance


def _max_abs(values) -> float:
    values = np.abs(np.asarray(values, dtype=float))
    if values.size == 0:
        return 0.0
    return float(np.where(np.isfinite(values), values, np.inf).max())


def _law_residual(forward, backward, current, voltage) -> float:
    with np.errstate(all="ignore"):
        voltage_gap = np.abs(voltage - forward.evaluate(current))
        current_gap = np.abs(current - backward.evaluate(voltage))
    voltage_gap = np.where(np.isfinite(voltage_gap), voltage_gap, np.inf)
    current_gap = np.where(np.isfinite(current_gap), current_gap, np.inf)
    # A blocked diode is checked in its voltage-controlled form, a conducting one in its current-controlled form.
    return _max_abs(np.minimum(voltage_gap, current_gap))


class _Auditor:
    def __init__(self, problem: DriveProblem, report: ResidualReport):
        self.n = problem.n
        self.period = problem.period
        self.scale = problem.scale
        self.report = report

    def element(self, node: Element, path: str, current, voltage):
        device = node.device
        if isinstance(device, Capacitor):
            admittance = device_admittance(device, self.n, self.period, scale=self.scale)
            residual = _max_abs(current - admittance.apply(voltage))
        elif isinstance(device, Inductor):
            impedance = device_impedance(device, self.n, self.period, scale=self.scale)
            residual = _max_abs(voltage - impedance.apply(current))
        else:
            residual = _law_residual(device.impedance(), device.admittance(), current, voltage)
        self.report.device = max(self.report.device, residual)

    def composite(self, node, path: str, current, voltage):
        # Series children share the current and split the voltage; parallel children the reverse.
        series = isinstance(node, Series)
        shared, total = (current, voltage) if series else (voltage, current)
        build = impedance_relation if series else admittance_relation
        parts: list = []
        blocked: list[int] = []
        unbounded: list[int] = []
        for index, child in enumerate(node.children):
            try:
                relation = build(child, self.n, self.period, scale=self.scale)
                parts.append(np.asarray(relation.apply(shared), dtype=float))
            except MonotonePSSError as e:
                logger.debug("%s cannot be evaluated directly: %s", child_path(path, index), e)
                parts.append(None)
                blocked.append(index)
                continue
            if relation.lipschitz is None:
                unbounded.append(index)

        # A single child with unbounded slope is rebuilt by closure and checked through its own law.
        if not blocked and len(unbounded) == 1:
            blocked = unbounded
            parts[blocked[0]] = None

        if len(blocked) > 1:
            self.report.failures.append(
                f"{path}: children {', '.join(map(str, blocked))} could not be evaluated; branch waveforms unknown"
            )
            if series:
                self.report.kvl = np.inf
            else:
                self.report.kcl = np.inf
            return

        if blocked:
            (index,) = blocked
            parts[index] = total - sum(part for part in parts if part is not None)
        else:
            closure = _max_abs(sum(parts) - total)
            if series:
                self.report.kvl = max(self.report.kvl, closure)
            else:
                self.report.kcl = max(self.report.kcl, closure)

        for index, (child, part) in enumerate(zip(node.children, parts)):
            child_current, child_voltage = (shared, part) if series else (part, shared)
            self.visit(child, child_path(path, index), child_current, child_voltage)

    def visit(self, node, path: str, current, voltage):
        self.report.branches[path] = Branch(path, node.kind, np.array(current), np.array(voltage))
        if isinstance(node, Element):
            self.element(node, path, current, voltage)
        else:
            self.composite(node, path, current, voltage)


def port_waveforms(problem: DriveProblem, solution) -> tuple[Vector, Vector]:
    """(current, voltage) at the port for a solved drive problem."""
    drive = as_vector(problem.drive, problem.n, name="drive")
    response = as_vector(solution, problem.n, name="solution")
    return (drive, response) if problem.is_current_driven else (response, drive)


def audit_solution(problem: DriveProblem, solution) -> ResidualReport:
    """Rebuild every branch current and voltage from the port waveforms and measure the residuals.

    Never raises: a subtree that cannot be reconstructed is listed in ``failures``.
    """
    report = ResidualReport()
    try:
        current, voltage = port_waveforms(problem, solution)
        _Auditor(problem, report).visit(problem.oneport, ROOT_PATH, current, voltage)
    except MonotonePSSError as e:
        report.failures.append(f"{ROOT_PATH}: {e}")
    if report.failures:
        logger.warning("audit incomplete: %s", "; ".join(report.failures))
    return report
