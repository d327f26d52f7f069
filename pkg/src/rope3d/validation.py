"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, ParameterError


def check_even_dimension(d: int) -> int:
    """Validate a head dimension: a positive even integer, at least 2."""
    d = int(d)
    if d < 2 or d % 2 != 0:
        raise DimensionError(f"head dimension must be a positive even integer, got {d}")
    return d


def check_positive_int(value: int, name: str) -> int:
    value = int(value)
    if value < 1:
        raise ParameterError(f"{name} must be a positive integer, got {value}")
    return value


def check_positive_real(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ParameterError(f"{name} must be a positive finite real, got {value}")
    return value


def as_head_vector(values, d: int | None = None) -> np.ndarray:
    """Coerce to a finite 1-D float64 vector of even length.

    If ``d`` is given the length must match it exactly.
    """
    h = np.asarray(values, dtype=np.float64)
    if h.ndim != 1:
        raise DimensionError(f"expected a 1-D vector, got shape {h.shape}")
    check_even_dimension(h.shape[0])
    if d is not None and h.shape[0] != d:
        raise DimensionError(f"vector length {h.shape[0]} does not match d={d}")
    if not np.all(np.isfinite(h)):
        raise ParameterError("vector contains non-finite entries")
    return h


def as_head_matrix(values, d: int | None = None) -> np.ndarray:
    """Coerce to a finite 2-D float64 array of shape (positions, d), d even."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 2:
        raise DimensionError(f"expected a 2-D array of row vectors, got shape {x.shape}")
    if x.shape[0] < 1:
        raise ParameterError("need at least one row vector")
    check_even_dimension(x.shape[1])
    if d is not None and x.shape[1] != d:
        raise DimensionError(f"row length {x.shape[1]} does not match d={d}")
    if not np.all(np.isfinite(x)):
        raise ParameterError("array contains non-finite entries")
    return x


def readonly(a: np.ndarray) -> np.ndarray:
    """Return ``a`` flagged immutable (value types share arrays freely)."""
    a.setflags(write=False)
    return a
