from __future__ import annotations

from typing import TYPE_CHECKING

from monotone_pss.typing import Protocol, Vector, runtime_checkable

if TYPE_CHECKING:  # pragma: no cover
    from monotone_pss.elements import ScalarLaw


@runtime_checkable
class DeviceProtocol(Protocol):
    kind: str

    def impedance(self) -> ScalarLaw:  # pragma: no cover
        ...

    def admittance(self) -> ScalarLaw:  # pragma: no cover
        ...


@runtime_checkable
class ScalarFunctionProtocol(Protocol):
    def __call__(self, x: Vector) -> tuple[Vector, Vector]:  # pragma: no cover
        ...
