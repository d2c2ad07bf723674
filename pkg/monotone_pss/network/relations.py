"""Impedance and admittance relations of one-port trees."""
from __future__ import annotations

import logging

from attr import Factory, attrib, attrs

from monotone_pss.elements import device_admittance, device_impedance
from monotone_pss.exceptions import ArgumentError, CapabilityError, ConstructionError, NumericalError
from monotone_pss.laws import InverseLaw
from monotone_pss.network.model import ROOT_PATH, Element, OnePort, Parallel, Series, child_path
from monotone_pss.operators import Inverse, Pointwise, Relation, add, invert, shift

logger = logging.getLogger(__name__)


@attrs
class OrientationReport:
    """Tree paths whose relation is only available through iterative inversion."""

    impedance: list = attrib(default=Factory(list))
    admittance: list = attrib(default=Factory(list))
    errors: dict = attrib(default=Factory(dict))


def _invert(relation: Relation, path: str, inversions: list | None) -> Relation:
    try:
        inverse = invert(relation)
    except (CapabilityError, ArgumentError) as e:
        raise ConstructionError(f"Orientation unavailable: {e}", path=path) from e
    if isinstance(inverse, Inverse):
        logger.debug("%s needs iterative inversion of %s", path, type(relation).__name__)
        if inversions is not None:
            inversions.append(path)
    return inverse


def _element(node: Element, n, period, scale, path, orientation) -> Relation:
    build = device_impedance if orientation == "impedance" else device_admittance
    try:
        relation = build(node.device, n, period, scale=scale)
    except (CapabilityError, ArgumentError) as e:
        raise ConstructionError(f"{node.kind} has no {orientation} relation: {e}", path=path) from e
    if isinstance(relation, Pointwise) and isinstance(relation.law, InverseLaw):
        _, lipschitz = relation.law.law.slope_bounds()
        if lipschitz == 0:
            raise ConstructionError(f"{node.kind} law is constant and has no {orientation} form", path=path)
    return relation


def _combine(children, path) -> Relation:
    try:
        return add(*children)
    except (ConstructionError, NumericalError) as e:
        raise ConstructionError(str(e), path=path) from e


def _build(node: OnePort, n, period, scale, path, orientation, inversions) -> Relation:
    if isinstance(node, Element):
        return _element(node, n, period, scale, path, orientation)
    native = Series if orientation == "impedance" else Parallel
    if isinstance(node, native):
        children = [
            _build(child, n, period, scale, child_path(path, index), orientation, inversions)
            for index, child in enumerate(node.children)
        ]
        return _combine(children, path)
    dual = "admittance" if orientation == "impedance" else "impedance"
    return _invert(_build(node, n, period, scale, path, dual, inversions), path, inversions)


def impedance_relation(
    oneport: OnePort, n: int, period: float, *, scale: str = "physical", inversions: list | None = None
) -> Relation:
    """Current to voltage relation: series nodes sum impedances, parallel nodes invert summed admittances."""
    return _build(oneport, n, period, scale, ROOT_PATH, "impedance", inversions)


def admittance_relation(
    oneport: OnePort, n: int, period: float, *, scale: str = "physical", inversions: list | None = None
) -> Relation:
    """Voltage to current relation, the dual of impedance_relation."""
    return _build(oneport, n, period, scale, ROOT_PATH, "admittance", inversions)


def orientation_report(oneport: OnePort, n: int, period: float, *, scale: str = "physical") -> OrientationReport:
    report = OrientationReport()
    for name, build in (("impedance", impedance_relation), ("admittance", admittance_relation)):
        try:
            build(oneport, n, period, scale=scale, inversions=getattr(report, name))
        except ConstructionError as e:
            report.errors[name] = str(e)
    return report


def delta_relation(relation: Relation, y_star) -> Relation:
    """u -> R(u) - y_star; its zeros solve the drive problem."""
    return shift(relation, y_star)


def feedback(forward: Relation, backward: Relation) -> Relation:
    """Negative feedback interconnection (F^-1 + G)^-1."""
    return invert(add(invert(forward), backward))