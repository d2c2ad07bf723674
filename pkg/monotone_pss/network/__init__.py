"""Series/parallel one-port networks."""
from __future__ import annotations

from monotone_pss.network.audit import Branch, ResidualReport, audit_solution, port_waveforms
from monotone_pss.network.model import DriveProblem, Element, OnePort, Parallel, Series, depth, leaves, walk
from monotone_pss.network.relations import (
    OrientationReport,
    admittance_relation,
    delta_relation,
    feedback,
    impedance_relation,
    orientation_report,
)

__all__ = [
    "Branch",
    "DriveProblem",
    "Element",
    "OnePort",
    "OrientationReport",
    "Parallel",
    "ResidualReport",
    "Series",
    "admittance_relation",
    "audit_solution",
    "delta_relation",
    "depth",
    "feedback",
    "impedance_relation",
    "leaves",
    "orientation_report",
    "port_waveforms",
    "walk",
]
