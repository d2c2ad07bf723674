"""Various utility functions."""
from __future__ import annotations

from functools import partial
from typing import Any

import numpy as np
from marshmallow import post_load

from monotone_pss.exceptions import ArgumentError
from monotone_pss.typing import Vector


def as_vector(value: Any, dimension: int | None = None, *, name: str = "signal") -> Vector:
    """Convert signals, sequences and arrays to a flat float vector.

    :param value: PeriodicSignal, array or sequence of reals
    :param dimension: expected length, checked when given
    :param name: used in the error message
    """
    vector = np.asarray(value, dtype=float)
    if vector.ndim != 1:
        raise ArgumentError(f"{name} must be one-dimensional, got shape {vector.shape}")
    if dimension is not None and vector.shape[0] != dimension:
        raise ArgumentError(f"{name} has {vector.shape[0]} samples, expected {dimension}")
    return vector


def like(template: Any, samples: Vector):
    """Wrap samples into the same kind of value as template."""
    from monotone_pss.signal import PeriodicSignal

    if isinstance(template, PeriodicSignal):
        return PeriodicSignal(samples=samples, period=template.period)
    return samples


def norm(vector: Vector) -> float:
    return float(np.linalg.norm(vector))


def relative_threshold(tol: float, reference: float) -> float:
    return tol * (1.0 + reference)


def check_positive(name: str, value: float, *, strict: bool = True) -> float:
    value = float(value)
    if not np.isfinite(value) or value < 0 or (strict and value == 0):
        raise ArgumentError(f"{name} must be {'positive' if strict else 'nonnegative'}, got {value!r}")
    return value


def is_identity(matrix: Vector) -> bool:
    return matrix.ndim == 2 and matrix.shape[0] == matrix.shape[1] and np.array_equal(matrix, np.eye(matrix.shape[0]))


class ModelSchemaPostLoadable:
    @staticmethod
    def build_from_schema(cls, data, many, **kwargs):
        return cls(**data)

    @classmethod
    def schema_post_loader(cls):
        return post_load(partial(cls.build_from_schema, cls))
