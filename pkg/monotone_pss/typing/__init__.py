"""Common type definitions."""
from __future__ import annotations

from typing import Literal, Protocol, Union, runtime_checkable

import numpy as np
from numpy.typing import ArrayLike, NDArray

Vector = NDArray[np.float64]
SignalLike = Union[ArrayLike, "PeriodicSignal"]  # noqa: F821

assert Literal
assert Protocol
assert runtime_checkable
assert ArrayLike
