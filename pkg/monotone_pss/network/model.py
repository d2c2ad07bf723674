"""One-port composition trees and drive problems."""
from __future__ import annotations

from typing import Iterator, Union

import numpy as np
from attr import attrib, attrs

from monotone_pss.const import CURRENT, PARALLEL, SERIES, VOLTAGE
from monotone_pss.elements import Device
from monotone_pss.exceptions import ArgumentError
from monotone_pss.signal import PeriodicSignal

ROOT_PATH = "root"


@attrs(frozen=True)
class Element:
    device: Device = attrib()
    name: str | None = attrib(default=None, kw_only=True)

    @property
    def kind(self) -> str:
        return self.device.kind


def _check_children(instance, attribute, value):
    if len(value) < 2:
        raise ArgumentError(f"{type(instance).__name__} needs at least two children, got {len(value)}")
    for child in value:
        if not isinstance(child, (Element, Series, Parallel)):
            raise ArgumentError(f"{type(child).__name__} is not a one-port")


@attrs(frozen=True)
class Series:
    children: tuple = attrib(converter=tuple, validator=_check_children)
    name: str | None = attrib(default=None, kw_only=True)
    kind = SERIES


@attrs(frozen=True)
class Parallel:
    children: tuple = attrib(converter=tuple, validator=_check_children)
    name: str | None = attrib(default=None, kw_only=True)
    kind = PARALLEL


OnePort = Union[Element, Series, Parallel]


def child_path(path: str, index: int) -> str:
    return f"{path}.{index}"


def walk(node: OnePort, path: str = ROOT_PATH) -> Iterator[tuple[str, OnePort]]:
    """Depth-first (path, node) pairs, parents before children."""
    yield path, node
    for index, child in enumerate(getattr(node, "children", ())):
        yield from walk(child, child_path(path, index))


def depth(node: OnePort) -> int:
    children = getattr(node, "children", ())
    return 1 + max(map(depth, children)) if children else 0


def leaves(node: OnePort) -> list[tuple[str, Element]]:
    return [(path, item) for path, item in walk(node) if isinstance(item, Element)]


@attrs(frozen=True)
class DriveProblem:
    """Find the port response of oneport to a known periodic current or voltage."""

    oneport: OnePort = attrib()
    drive: PeriodicSignal = attrib()
    drive_kind: str = attrib()
    n: int = attrib()
    period: float = attrib(converter=float)
    scale: str = attrib(default="physical", kw_only=True)

    @drive_kind.validator
    def _check_drive_kind(self, attribute, value):
        if value not in (CURRENT, VOLTAGE):
            raise ArgumentError(f"Drive kind must be {CURRENT!r} or {VOLTAGE!r}, got {value!r}")

    def __attrs_post_init__(self):
        if len(self.drive) != self.n:
            raise ArgumentError(f"Drive has {len(self.drive)} samples, expected {self.n}")
        if not np.isclose(self.drive.period, self.period):
            raise ArgumentError(f"Drive period {self.drive.period!r} differs from the problem period {self.period!r}")

    @property
    def is_current_driven(self) -> bool:
        return self.drive_kind == CURRENT
