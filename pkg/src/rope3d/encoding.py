"""Position-encoding kernels.

Two interchangeable computations are exposed for the chunked 3D encoding:

* a real-arithmetic reference path (:func:`encode_3d`) that forms
  ``cos(phi_j) * perp(h) + sin(phi_j) * h`` and rotates each dimension pair
  through ``m * theta_l``, and
* a paired-complex fast path (:func:`encode_3d_phase`) that treats components
  ``(l, d/2 + l)`` as one complex number and multiplies by
  ``exp(i * (m * theta_l + pi/2 - phi_j))``.

Both are public so they can cross-validate each other; every encoding is an
isometry (plain rotation), so norms are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import AngleSchedule, ChunkAngles
from .chunking import ChunkLayout
from .errors import ChunkIndexError, ParameterError
from .validation import as_head_matrix, as_head_vector, readonly

# The dense rotation matrix is quadratic storage and exists for verification
# and small analyses only.
MAX_MATERIALIZED_DIM = 256


@dataclass(frozen=True)
class EncodedVector:
    """A position-encoded head vector plus the (chunk, within-chunk) it was encoded at."""

    values: np.ndarray = field(repr=False)
    chunk_index: int
    within_index: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", readonly(np.asarray(self.values, dtype=np.float64)))

    def __array__(self, dtype=None, copy=None) -> np.ndarray:
        return np.asarray(self.values, dtype=dtype)

    @property
    def d(self) -> int:
        return self.values.shape[0]


def perp(h) -> np.ndarray:
    """Map ``[h1, h2]`` to ``[-h2, h1]`` (halves along the last axis).

    Orthogonal to ``h`` with the same norm; applying it twice negates ``h``.
    Works on single vectors and on stacks of row vectors alike.
    """
    h = np.asarray(h, dtype=np.float64)
    half = h.shape[-1] // 2
    if h.shape[-1] < 2 or h.shape[-1] % 2 != 0:
        raise ParameterError(f"perp needs an even last axis, got shape {h.shape}")
    return np.concatenate([-h[..., half:], h[..., :half]], axis=-1)


def rotation_matrix(m: int, schedule: AngleSchedule) -> np.ndarray:
    """Materialize the d x d rotation for position ``m``.

    Pair ``l`` couples components ``l`` and ``d/2 + l``:
    ``[[cos(m th_l), -sin(m th_l)], [sin(m th_l), cos(m th_l)]]`` scattered on
    those rows/columns, zeros elsewhere. Only supported up to
    ``MAX_MATERIALIZED_DIM``; the encode functions never build it.
    """
    if schedule.d > MAX_MATERIALIZED_DIM:
        raise ParameterError(
            f"dense rotation only materialized for d <= {MAX_MATERIALIZED_DIM}, got d={schedule.d}"
        )
    angles = float(m) * schedule.thetas
    c, s = np.cos(angles), np.sin(angles)
    half = schedule.d // 2
    out = np.zeros((schedule.d, schedule.d), dtype=np.float64)
    idx = np.arange(half)
    out[idx, idx] = c
    out[idx, half + idx] = -s
    out[half + idx, idx] = s
    out[half + idx, half + idx] = c
    return out


def _rotate_pairs(values: np.ndarray, angles: np.ndarray) -> np.ndarray:
    """Rotate each (l, d/2+l) pair of ``values`` by ``angles[l]`` (real path)."""
    half = values.shape[-1] // 2
    first, second = values[..., :half], values[..., half:]
    c, s = np.cos(angles), np.sin(angles)
    return np.concatenate([c * first - s * second, s * first + c * second], axis=-1)


def _as_complex_pairs(values: np.ndarray) -> np.ndarray:
    half = values.shape[-1] // 2
    return values[..., :half] + 1j * values[..., half:]


def _from_complex_pairs(z: np.ndarray) -> np.ndarray:
    return np.concatenate([z.real, z.imag], axis=-1)


def _check_chunk(j: int, phis: ChunkAngles) -> int:
    j = int(j)
    if j < 0 or j >= phis.num_chunks:
        raise ChunkIndexError(f"chunk index {j} outside [0, {phis.num_chunks})")
    return j


def _check_within(m: int) -> int:
    m = int(m)
    if m < 0:
        raise ParameterError(f"position index must be nonnegative, got {m}")
    return m


def encode_rope(h, m: int, schedule: AngleSchedule) -> EncodedVector:
    """Rotary-encode ``h`` at flat position ``m``: rotate pair ``l`` by ``m * theta_l``."""
    h = as_head_vector(h, schedule.d)
    m = _check_within(m)
    return EncodedVector(_rotate_pairs(h, m * schedule.thetas), 0, m)


def encode_3d(h, j: int, m: int, schedule: AngleSchedule, phis: ChunkAngles) -> EncodedVector:
    """Chunked 3D encoding of ``h`` at chunk ``j``, within-chunk position ``m``.

    Reference real-arithmetic path: mixes ``h`` with its perpendicular by the
    chunk phase, then applies the within-chunk rotation,
    ``rotate_m(cos(phi_j) * perp(h) + sin(phi_j) * h)``.
    """
    h = as_head_vector(h, schedule.d)
    j = _check_chunk(j, phis)
    m = _check_within(m)
    phi = phis.phis[j]
    mixed = np.cos(phi) * perp(h) + np.sin(phi) * h
    return EncodedVector(_rotate_pairs(mixed, m * schedule.thetas), j, m)


def encode_3d_phase(h, j: int, m: int, schedule: AngleSchedule, phis: ChunkAngles) -> EncodedVector:
    """Chunked 3D encoding via the paired-complex fast path.

    Must agree with :func:`encode_3d` to double-precision roundoff; the two
    paths share no trig code.
    """
    h = as_head_vector(h, schedule.d)
    j = _check_chunk(j, phis)
    m = _check_within(m)
    angles = m * schedule.thetas + (np.pi / 2.0 - phis.phis[j])
    z = _as_complex_pairs(h) * np.exp(1j * angles)
    return EncodedVector(_from_complex_pairs(z), j, m)


def decode_3d(encoded, j: int, m: int, schedule: AngleSchedule, phis: ChunkAngles) -> np.ndarray:
    """Invert the chunked 3D encoding (the adjoint of this orthogonal map)."""
    values = as_head_vector(np.asarray(encoded), schedule.d)
    j = _check_chunk(j, phis)
    m = _check_within(m)
    angles = m * schedule.thetas + (np.pi / 2.0 - phis.phis[j])
    z = _as_complex_pairs(values) * np.exp(-1j * angles)
    return _from_complex_pairs(z)


def _sequence_angles(layout: ChunkLayout, schedule: AngleSchedule, phis: ChunkAngles) -> np.ndarray:
    """Per-position, per-pair phase angles for a whole layout, shape (L, d/2)."""
    if phis.num_chunks < layout.num_chunks:
        raise ChunkIndexError(
            f"phase schedule covers {phis.num_chunks} chunks, layout needs {layout.num_chunks}"
        )
    positions = np.arange(layout.seq_len)
    chunks = positions // layout.chunk_size
    within = positions % layout.chunk_size
    return within[:, None] * schedule.thetas[None, :] + (
        np.pi / 2.0 - phis.phis[chunks][:, None]
    )


def encode_sequence_rope(x, schedule: AngleSchedule, positions=None) -> np.ndarray:
    """Rotary-encode a stack of row vectors; row ``p`` is encoded at position ``p``.

    ``positions`` overrides the per-row positions when given.
    """
    x = as_head_matrix(x, schedule.d)
    if positions is None:
        positions = np.arange(x.shape[0])
    else:
        positions = np.asarray(positions, dtype=np.float64)
        if positions.shape != (x.shape[0],):
            raise ParameterError("positions must have one entry per row")
    angles = positions[:, None] * schedule.thetas[None, :]
    return _from_complex_pairs(_as_complex_pairs(x) * np.exp(1j * angles))


def encode_sequence_3d(
    x, layout: ChunkLayout, schedule: AngleSchedule, phis: ChunkAngles
) -> np.ndarray:
    """Chunked-3D-encode a stack of row vectors; row ``p`` sits at flat position ``p``."""
    x = as_head_matrix(x, schedule.d)
    if x.shape[0] != layout.seq_len:
        raise ParameterError(f"got {x.shape[0]} rows for a layout of {layout.seq_len} positions")
    angles = _sequence_angles(layout, schedule, phis)
    return _from_complex_pairs(_as_complex_pairs(x) * np.exp(1j * angles))


def decode_sequence_3d(
    x, layout: ChunkLayout, schedule: AngleSchedule, phis: ChunkAngles
) -> np.ndarray:
    """Apply the inverse (adjoint) per-position encoding to a stack of row vectors."""
    x = as_head_matrix(x, schedule.d)
    if x.shape[0] != layout.seq_len:
        raise ParameterError(f"got {x.shape[0]} rows for a layout of {layout.seq_len} positions")
    angles = _sequence_angles(layout, schedule, phis)
    return _from_complex_pairs(_as_complex_pairs(x) * np.exp(-1j * angles))
