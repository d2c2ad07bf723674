from __future__ import annotations

from numpy.random import Generator

from monotone_pss.typing import Protocol, Vector, runtime_checkable


@runtime_checkable
class SamplerProtocol(Protocol):
    zero_mean: bool
    floor: float | None

    def draw(self, n: int, trials: int, rng: Generator) -> tuple[Vector, Vector]:  # pragma: no cover
        ...
