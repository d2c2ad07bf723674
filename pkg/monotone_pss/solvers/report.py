from __future__ import annotations

from attr import Factory, attrib, attrs


@attrs
class SolveReport:
    solution = attrib()
    converged: bool = attrib()
    iterations: int = attrib()
    residual_history: list = attrib(default=Factory(list), repr=False)
    empirical_contraction: float | None = attrib(default=None)
    algorithm: str | None = attrib(default=None)
    nested: list = attrib(default=Factory(list), repr=False)
    gap: float | None = attrib(default=None)
    inclusion_residual: float | None = attrib(default=None)
    audit = attrib(default=None, repr=False)
    alpha: float | None = attrib(default=None)

    @property
    def final_residual(self) -> float:
        return float(self.residual_history[-1]) if self.residual_history else 0.0
