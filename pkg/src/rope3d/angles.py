"""Rotary frequency schedules and per-chunk phase schedules.

Both schedules are geometric in a shared ``base`` (default 10000): the
within-position frequencies fall off as ``base**(-2l/d)`` across dimension
pairs, and the chunk phases fall off as ``base**(-j)`` across chunks.
Schedules are immutable values; transforms return new values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .validation import check_even_dimension, check_positive_int, check_positive_real, readonly

DEFAULT_BASE = 10000.0


@dataclass(frozen=True)
class AngleSchedule:
    """Per-pair rotation frequencies for a head of even dimension ``d``.

    ``thetas[l]`` is the frequency applied to the pair formed by components
    ``l`` and ``d/2 + l``. Fresh schedules from :func:`theta_schedule` satisfy
    ``thetas[l] == base**(-2l/d)``; schedules rescaled for interpolation keep
    ``d`` and ``base`` but carry scaled frequencies.
    """

    d: int
    base: float
    thetas: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        thetas = np.asarray(self.thetas, dtype=np.float64)
        if thetas.ndim != 1 or thetas.shape[0] != self.d // 2:
            raise ParameterError(
                f"schedule needs d/2 = {self.d // 2} frequencies, got shape {thetas.shape}"
            )
        object.__setattr__(self, "thetas", readonly(thetas))

    @property
    def num_pairs(self) -> int:
        return self.d // 2


@dataclass(frozen=True)
class ChunkAngles:
    """Per-chunk rotation phases ``phis[j]``, one per chunk index."""

    num_chunks: int
    base: float
    phis: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        phis = np.asarray(self.phis, dtype=np.float64)
        if phis.ndim != 1 or phis.shape[0] != self.num_chunks:
            raise ParameterError(
                f"phase schedule needs {self.num_chunks} entries, got shape {phis.shape}"
            )
        object.__setattr__(self, "phis", readonly(phis))


def theta_schedule(d: int, base: float = DEFAULT_BASE) -> AngleSchedule:
    """Build the rotary frequency schedule ``thetas[l] = base**(-2l/d)``.

    ``d`` must be even and at least 2; ``base`` positive. ``thetas[0] == 1.0``
    exactly, and the frequencies decrease strictly when ``base > 1``.
    """
    d = check_even_dimension(d)
    base = check_positive_real(base, "base")
    exponents = -2.0 * np.arange(d // 2, dtype=np.float64) / d
    return AngleSchedule(d=d, base=base, thetas=base**exponents)


def phi_schedule(num_chunks: int, base: float = DEFAULT_BASE) -> ChunkAngles:
    """Build the chunk phase schedule ``phis[j] = base**(-j)``."""
    num_chunks = check_positive_int(num_chunks, "num_chunks")
    base = check_positive_real(base, "base")
    phis = base ** (-np.arange(num_chunks, dtype=np.float64))
    return ChunkAngles(num_chunks=num_chunks, base=base, phis=phis)


def scale_thetas(schedule: AngleSchedule, factor: float) -> AngleSchedule:
    """Rescale every frequency by ``factor`` in (0, 1], as linear interpolation does.

    Returns a new schedule; ``d`` and ``base`` are unchanged.
    """
    factor = float(factor)
    if not np.isfinite(factor) or factor <= 0.0 or factor > 1.0:
        raise ParameterError(f"scale factor must lie in (0, 1], got {factor}")
    return AngleSchedule(d=schedule.d, base=schedule.base, thetas=factor * schedule.thetas)
