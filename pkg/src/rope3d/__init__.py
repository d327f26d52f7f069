"""Rotary and chunked 3D rotary position encoding, with analysis tools.

The package provides exact double-precision kernels for rotary position
encoding and its chunked 3D extension (a second rotation over chunk phases),
the attention scores they induce, long-term decay bounds, and an analysis of
how re-chunking preserves positional resolution under context extension where
linear interpolation dilutes it.
"""

from .angles import (
    DEFAULT_BASE,
    AngleSchedule,
    ChunkAngles,
    phi_schedule,
    scale_thetas,
    theta_schedule,
)
from .attention import (
    AttentionBatch,
    attention_forward,
    attention_gradients,
    grad_check,
    random_batch,
    score_3d,
    score_from_encoded,
    score_rope,
)
from .chunking import (
    ChunkLayout,
    RelPos,
    chunk_count,
    decompose,
    relative_position_matrix,
)
from .decay import (
    DecayCurve,
    decay_bound,
    decay_curve_3d,
    decay_curve_rope,
    decay_surface_3d,
    partial_sums,
)
from .encoding import (
    EncodedVector,
    decode_3d,
    decode_sequence_3d,
    encode_3d,
    encode_3d_phase,
    encode_rope,
    encode_sequence_3d,
    encode_sequence_rope,
    perp,
    rotation_matrix,
)
from .errors import (
    ChunkIndexError,
    DimensionError,
    InfeasibleRechunkError,
    OutOfRangeError,
    ParameterError,
)
from .estimators import ChunkedRotaryEncoder, RotaryEncoder
from .interpolation import (
    ResolutionReport,
    linear_pi_rope,
    rechunk_3d,
    resolution_3d,
    resolution_grid_check,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BASE",
    "AngleSchedule",
    "AttentionBatch",
    "ChunkAngles",
    "ChunkIndexError",
    "ChunkLayout",
    "ChunkedRotaryEncoder",
    "DecayCurve",
    "DimensionError",
    "EncodedVector",
    "InfeasibleRechunkError",
    "OutOfRangeError",
    "ParameterError",
    "RelPos",
    "ResolutionReport",
    "RotaryEncoder",
    "attention_forward",
    "attention_gradients",
    "chunk_count",
    "decay_bound",
    "decay_curve_3d",
    "decay_curve_rope",
    "decay_surface_3d",
    "decode_3d",
    "decode_sequence_3d",
    "decompose",
    "encode_3d",
    "encode_3d_phase",
    "encode_rope",
    "encode_sequence_3d",
    "encode_sequence_rope",
    "grad_check",
    "linear_pi_rope",
    "partial_sums",
    "perp",
    "phi_schedule",
    "random_batch",
    "rechunk_3d",
    "relative_position_matrix",
    "resolution_3d",
    "resolution_grid_check",
    "rotation_matrix",
    "scale_thetas",
    "score_3d",
    "score_from_encoded",
    "score_rope",
    "theta_schedule",
]
