"""Long-term decay bounds from partial exponential sums.

Summation by parts bounds the magnitude of a rotary attention score by the
content-free quantity ``mean_l |E_l|`` with ``E_l = sum_{t<l} exp(i*rel*theta_t)``,
taken over ``l = 1 .. d/2`` for a token offset ``rel``. The chunked variant
uses the same per-offset values but restricts ``rel`` to ``[0, chunk_size)``;
the chunk phase factor has unit modulus, so chunk distance never shrinks the
bound. The curves emitted here are exact evaluations, not fits: the bound
oscillates point-wise and only its coarse trend decays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import AngleSchedule
from .errors import ParameterError
from .validation import check_positive_int, readonly


@dataclass(frozen=True)
class DecayCurve:
    """Bound values per relative distance, plus the parameters they came from."""

    rel_distances: np.ndarray = field(repr=False)
    bounds: np.ndarray = field(repr=False)
    d: int
    base: float
    chunk_size: int | None = None

    def __post_init__(self) -> None:
        rel = np.asarray(self.rel_distances, dtype=np.int64)
        bounds = np.asarray(self.bounds, dtype=np.float64)
        if rel.shape != bounds.shape or rel.ndim != 1:
            raise ParameterError("rel_distances and bounds must be 1-D and equal length")
        object.__setattr__(self, "rel_distances", readonly(rel))
        object.__setattr__(self, "bounds", readonly(bounds))

    def __len__(self) -> int:
        return self.bounds.shape[0]


def _check_rel(rel: int) -> int:
    rel = int(rel)
    if rel < 0:
        raise ParameterError(f"relative distance must be nonnegative, got {rel}")
    return rel


def partial_sums(rel: int, schedule: AngleSchedule) -> np.ndarray:
    """Magnitudes ``|E_l|`` of the partial sums ``sum_{t<l} exp(i*rel*theta_t)``, l = 1..d/2."""
    rel = _check_rel(rel)
    return np.abs(np.cumsum(np.exp(1j * rel * schedule.thetas)))


def decay_bound(rel: int, schedule: AngleSchedule) -> float:
    """Mean of the partial-sum magnitudes at token offset ``rel``.

    At ``rel = 0`` every term is 1, the partial sums are 1..d/2, and the mean
    is exactly ``(d/2 + 1) / 2``.
    """
    return float(partial_sums(rel, schedule).mean())


def _bounds_through(max_rel: int, schedule: AngleSchedule) -> np.ndarray:
    rel = np.arange(max_rel + 1, dtype=np.float64)
    phases = np.exp(1j * rel[:, None] * schedule.thetas[None, :])
    return np.abs(np.cumsum(phases, axis=1)).mean(axis=1)


def decay_curve_rope(max_rel: int, schedule: AngleSchedule) -> DecayCurve:
    """Bound at every token offset 0..max_rel (the unrestricted rotary case)."""
    max_rel = int(max_rel)
    if max_rel < 0:
        raise ParameterError(f"max_rel must be nonnegative, got {max_rel}")
    return DecayCurve(
        rel_distances=np.arange(max_rel + 1),
        bounds=_bounds_through(max_rel, schedule),
        d=schedule.d,
        base=schedule.base,
    )


def decay_curve_3d(chunk_size: int, schedule: AngleSchedule) -> DecayCurve:
    """Bound over the within-chunk domain only: offsets 0..chunk_size-1.

    Chunking keeps token offsets inside ``[0, chunk_size)``, so this curve is
    exactly the prefix of the unrestricted one; that domain restriction is the
    whole mechanism.
    """
    chunk_size = check_positive_int(chunk_size, "chunk_size")
    return DecayCurve(
        rel_distances=np.arange(chunk_size),
        bounds=_bounds_through(chunk_size - 1, schedule),
        d=schedule.d,
        base=schedule.base,
        chunk_size=chunk_size,
    )


def decay_surface_3d(chunk_size: int, num_chunk_deltas: int,
                     schedule: AngleSchedule) -> np.ndarray:
    """Bound grid over (token offset, chunk distance), shape (chunk_size, num_chunk_deltas).

    The chunk phase factor has modulus one, so every column repeats the
    within-chunk curve; the grid makes the flat chunk axis explicit.
    """
    chunk_size = check_positive_int(chunk_size, "chunk_size")
    num_chunk_deltas = check_positive_int(num_chunk_deltas, "num_chunk_deltas")
    column = _bounds_through(chunk_size - 1, schedule)
    return np.tile(column[:, None], (1, num_chunk_deltas))
