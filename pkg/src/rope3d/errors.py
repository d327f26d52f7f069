"""Exception types raised by rope3d."""


class ParameterError(ValueError):
    """An argument value violates a precondition (nonpositive size, bad factor, ...)."""


class DimensionError(ParameterError):
    """A vector or head dimension is invalid (odd, nonpositive, or mismatched)."""


class OutOfRangeError(ParameterError):
    """A sequence position falls outside the layout it was addressed against."""


class ChunkIndexError(OutOfRangeError):
    """A chunk index is not covered by the phase schedule in use."""


class InfeasibleRechunkError(ParameterError):
    """Re-chunking would push within-chunk indices past the pre-trained range.

    Raised when the stretched chunk capacity exceeds the pre-training length;
    the caller must pick a smaller chunk size (more chunks) for the requested
    extension.
    """
