"""Context extension: linear interpolation for rotary encoding vs re-chunking.

Linear interpolation squeezes an extended window of ``target_len`` positions
into a pre-trained window of ``pretrain_len`` by scaling every rotary
frequency by ``pretrain_len / target_len``, which drops the effective index
spacing of adjacent tokens to that same ratio. The chunked encoding instead
keeps the chunk count fixed and stretches chunk capacity, so adjacent tokens
in one chunk keep integer spacing (resolution 1) as long as the stretched
capacity stays within the pre-trained range.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .angles import AngleSchedule, ChunkAngles
from .errors import InfeasibleRechunkError, ParameterError
from .validation import check_positive_int

REPORT_FIELDS = (
    "pretrain_len",
    "target_len",
    "chunk_size",
    "num_chunks",
    "new_chunk_size",
    "resolution_rope_pi",
    "resolution_3d",
    "boundary_resolution",
    "theorem_holds",
    "feasible",
)


@dataclass(frozen=True)
class ResolutionReport:
    """Resolution comparison for one (target length, chunk size) configuration.

    ``resolution_rope_pi`` is the post-interpolation index spacing under plain
    rotary encoding; ``resolution_3d`` is the within-chunk spacing after
    re-chunking (1 whenever re-chunking is feasible). ``boundary_resolution``
    is the spacing across a chunk boundary in the worst case, between the last
    slot of chunk 0 and the first slot of chunk 1. For infeasible
    configurations the resolution fields are ``None``.
    """

    pretrain_len: int
    target_len: int
    chunk_size: int
    num_chunks: int
    new_chunk_size: int
    resolution_rope_pi: float
    resolution_3d: float | None
    boundary_resolution: float | None
    theorem_holds: bool | None
    feasible: bool

    @property
    def meets_chunk_minimum(self) -> bool:
        """Whether the stretched chunk capacity reaches the guarantee threshold (>= 3)."""
        return self.feasible and self.new_chunk_size >= 3

    @property
    def degenerate(self) -> bool:
        """No actual extension requested (target equals pre-train length)."""
        return self.target_len == self.pretrain_len

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in REPORT_FIELDS}


def _check_extension(pretrain_len: int, target_len: int) -> tuple[int, int]:
    pretrain_len = check_positive_int(pretrain_len, "pretrain_len")
    target_len = check_positive_int(target_len, "target_len")
    if target_len < pretrain_len:
        raise ParameterError(
            f"target length {target_len} is shorter than pre-train length {pretrain_len};"
            " only extension is modeled"
        )
    return pretrain_len, target_len


def linear_pi_rope(pretrain_len: int, target_len: int) -> tuple[float, float]:
    """Linear-interpolation factor and the resolution it leaves behind.

    Both equal ``pretrain_len / target_len``; apply the factor with
    :func:`rope3d.angles.scale_thetas`.
    """
    pretrain_len, target_len = _check_extension(pretrain_len, target_len)
    ratio = pretrain_len / target_len
    return ratio, ratio


def rechunk_3d(pretrain_len: int, target_len: int, chunk_size: int) -> tuple[int, int]:
    """Stretch chunk capacity for an extended window, keeping the chunk count.

    Returns ``(num_chunks, new_chunk_size)`` with ``num_chunks =
    ceil(pretrain_len / chunk_size)`` and ``new_chunk_size = ceil(target_len /
    num_chunks)``. Raises :class:`InfeasibleRechunkError` when the stretched
    capacity would exceed ``pretrain_len`` (pick a smaller chunk size).
    """
    pretrain_len, target_len = _check_extension(pretrain_len, target_len)
    chunk_size = check_positive_int(chunk_size, "chunk_size")
    num_chunks = math.ceil(pretrain_len / chunk_size)
    new_chunk_size = math.ceil(target_len / num_chunks)
    if new_chunk_size > pretrain_len:
        raise InfeasibleRechunkError(
            f"stretched chunk capacity {new_chunk_size} exceeds pre-train length "
            f"{pretrain_len}; use more chunks (smaller chunk size) for target {target_len}"
        )
    return num_chunks, new_chunk_size


def resolution_3d(pretrain_len: int, target_len: int, chunk_size: int,
                  schedule: AngleSchedule, phis: ChunkAngles) -> ResolutionReport:
    """Build the resolution report for one configuration.

    Within-chunk resolution stays 1 after re-chunking. The boundary case uses
    the largest phase step, between chunks 0 and 1, against the head frequency
    ``thetas[0]``; with one chunk there is no boundary and the field is NaN.
    Degenerate zero extension is reported, not rejected: the strict
    improvement over interpolation holds only for real extension.
    """
    num_chunks, new_chunk_size = rechunk_3d(pretrain_len, target_len, chunk_size)
    _, resolution_rope_pi = linear_pi_rope(pretrain_len, target_len)
    if num_chunks >= 2:
        if phis.num_chunks < 2:
            raise ParameterError("phase schedule needs at least two chunks for the boundary case")
        phase_step = float(phis.phis[1] - phis.phis[0])
        boundary = (new_chunk_size - 1) + phase_step / float(schedule.thetas[0])
    else:
        boundary = float("nan")
    within = 1.0
    return ResolutionReport(
        pretrain_len=pretrain_len,
        target_len=target_len,
        chunk_size=chunk_size,
        num_chunks=num_chunks,
        new_chunk_size=new_chunk_size,
        resolution_rope_pi=resolution_rope_pi,
        resolution_3d=within,
        boundary_resolution=boundary,
        theorem_holds=within > resolution_rope_pi,
        feasible=True,
    )


def resolution_grid_check(pretrain_len: int, target_lens, chunk_sizes,
                          schedule: AngleSchedule, phis: ChunkAngles) -> list[ResolutionReport]:
    """Reports for every (target length, chunk size) pair.

    Infeasible pairs are recorded with ``feasible=False`` and ``None``
    resolution fields rather than raised.
    """
    reports = []
    for target_len in target_lens:
        for chunk_size in chunk_sizes:
            try:
                reports.append(
                    resolution_3d(pretrain_len, target_len, chunk_size, schedule, phis)
                )
            except InfeasibleRechunkError:
                num_chunks = math.ceil(pretrain_len / chunk_size)
                reports.append(
                    ResolutionReport(
                        pretrain_len=pretrain_len,
                        target_len=int(target_len),
                        chunk_size=int(chunk_size),
                        num_chunks=num_chunks,
                        new_chunk_size=math.ceil(target_len / num_chunks),
                        resolution_rope_pi=pretrain_len / target_len,
                        resolution_3d=None,
                        boundary_resolution=None,
                        theorem_holds=None,
                        feasible=False,
                    )
                )
    return reports
