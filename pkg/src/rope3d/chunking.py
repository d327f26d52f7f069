"""Chunk layouts: flat positions vs (chunk index, within-chunk index)."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import OutOfRangeError
from .validation import check_positive_int


class RelPos(NamedTuple):
    """Relative position between two tokens: chunk delta and token delta."""

    chunk_delta: int
    token_delta: int


@dataclass(frozen=True)
class ChunkLayout:
    """A sequence of ``seq_len`` tokens split into chunks of ``chunk_size``.

    The last chunk may be partial; its within-chunk indices still start at 0.
    """

    seq_len: int
    chunk_size: int
    num_chunks: int = field(init=False)

    def __post_init__(self) -> None:
        check_positive_int(self.seq_len, "seq_len")
        check_positive_int(self.chunk_size, "chunk_size")
        object.__setattr__(self, "num_chunks", chunk_count(self.seq_len, self.chunk_size))


def chunk_count(seq_len: int, chunk_size: int) -> int:
    """Number of chunks covering ``seq_len`` tokens: ceil(seq_len / chunk_size)."""
    seq_len = check_positive_int(seq_len, "seq_len")
    chunk_size = check_positive_int(chunk_size, "chunk_size")
    return -(-seq_len // chunk_size)


def decompose(position: int, layout: ChunkLayout) -> tuple[int, int]:
    """Split a flat position into (chunk index, within-chunk index).

    ``position`` must satisfy ``0 <= position < layout.seq_len``; the result
    satisfies ``chunk * chunk_size + within == position``.
    """
    position = int(position)
    if position < 0 or position >= layout.seq_len:
        raise OutOfRangeError(
            f"position {position} outside [0, {layout.seq_len}) for this layout"
        )
    return divmod(position, layout.chunk_size)


def relative_position_matrix(layout: ChunkLayout) -> np.ndarray:
    """All pairwise relative positions, as an (L, L, 2) int array.

    Entry ``[p, q]`` holds ``(chunk_delta, token_delta)`` between query
    position ``p`` and key position ``q``: the difference of their chunk
    indices and of their within-chunk indices.
    """
    positions = np.arange(layout.seq_len)
    chunks = positions // layout.chunk_size
    within = positions % layout.chunk_size
    out = np.empty((layout.seq_len, layout.seq_len, 2), dtype=np.int64)
    out[:, :, 0] = chunks[:, None] - chunks[None, :]
    out[:, :, 1] = within[:, None] - within[None, :]
    return out
