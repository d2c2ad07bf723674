"""monotone-pss Exceptions."""
from __future__ import annotations

from typing import Any


class MonotonePSSError(Exception):
    """Base class for all monotone-pss errors."""


class ArgumentError(MonotonePSSError, ValueError):
    """Invalid argument."""


class DomainError(MonotonePSSError, ValueError):
    """Point outside the domain of a relation."""

    def __init__(self, message: str, *, index: int | None = None, iteration: int | None = None):
        super().__init__(message)
        self.message = message
        self.index = index
        self.iteration = iteration

    def at_iteration(self, iteration: int) -> DomainError:
        return DomainError(self.message, index=self.index, iteration=iteration)

    def __str__(self):
        """String representation."""
        location = []
        if self.iteration is not None:
            location.append(f"iteration {self.iteration}")
        if self.index is not None:
            location.append(f"sample {self.index}")
        return f"{self.message} ({', '.join(location)})" if location else self.message


class NumericalError(MonotonePSSError, ArithmeticError):
    """Numerical failure of a linear solve or an inner iteration."""

    def __init__(self, message: str, *, condition: float | None = None):
        super().__init__(message)
        self.message = message
        self.condition = condition

    def __str__(self):
        """String representation."""
        if self.condition is None:
            return self.message
        return f"{self.message} (condition number {self.condition:.3e})"


class DivergenceError(NumericalError):
    """Forward step residual grew past the divergence threshold."""

    def __init__(self, message: str, *, report: Any = None):
        super().__init__(message)
        self.report = report


class ConfigurationError(MonotonePSSError):
    """Solver configuration does not fit the problem."""


class ConstructionError(MonotonePSSError):
    """Network relation could not be constructed."""

    def __init__(self, message: str, *, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.path = path

    def __str__(self):
        """String representation."""
        return self.message if self.path is None else f"{self.message} at {self.path}"


class CapabilityError(MonotonePSSError, NotImplementedError):
    """Relation does not provide the requested capability."""


class NetlistValidationError(MonotonePSSError):
    """Netlist or run spec document is not valid."""

    message = "{0}.\nDocument: {1}"

    def __str__(self):
        """String representation."""
        if len(self.args) < 2:
            return str(self.args[0]) if self.args else ""
        return self.message.format(*self.args)
