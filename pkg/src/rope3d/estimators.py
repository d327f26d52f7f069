"""Scikit-learn compatible wrappers around the encoding kernels.

Rows of ``X`` are head vectors in sequence order; row ``p`` is encoded at
position ``p``. The transforms are stateless rotations, so ``fit`` only
validates the feature count and freezes the angle schedules.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .angles import DEFAULT_BASE, phi_schedule, scale_thetas, theta_schedule
from .chunking import ChunkLayout
from .encoding import encode_sequence_3d, encode_sequence_rope
from .validation import as_head_matrix


class RotaryEncoder(TransformerMixin, BaseEstimator):
    """Rotary position encoding as a transformer.

    Parameters
    ----------
    base : float, default=10000.0
        Base of the geometric frequency schedule.
    scale : float, default=1.0
        Linear-interpolation factor in (0, 1] applied to every frequency;
        use ``pretrain_len / target_len`` when encoding an extended window.
    """

    def __init__(self, base: float = DEFAULT_BASE, scale: float = 1.0):
        self.base = base
        self.scale = scale

    def fit(self, X, y=None):
        X = as_head_matrix(X)
        schedule = theta_schedule(X.shape[1], self.base)
        if self.scale != 1.0:
            schedule = scale_thetas(schedule, self.scale)
        self.schedule_ = schedule
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_head_matrix(X, self.n_features_in_)
        return encode_sequence_rope(X, self.schedule_)

    def _check_fitted(self) -> None:
        if not hasattr(self, "schedule_"):
            raise NotFittedError("this encoder must be fitted before calling transform")


class ChunkedRotaryEncoder(TransformerMixin, BaseEstimator):
    """Chunked 3D rotary position encoding as a transformer.

    Rows are split into chunks of ``chunk_size``; each row is rotated by its
    within-chunk position and by its chunk's phase. The chunk phase schedule
    depends on the number of chunks, hence on ``len(X)``, and is rebuilt per
    transform.

    Parameters
    ----------
    chunk_size : int, default=1000
        Tokens per chunk; keeps within-chunk offsets below this value.
    base : float, default=10000.0
        Shared base of the frequency and chunk phase schedules.
    """

    def __init__(self, chunk_size: int = 1000, base: float = DEFAULT_BASE):
        self.chunk_size = chunk_size
        self.base = base

    def fit(self, X, y=None):
        X = as_head_matrix(X)
        self.schedule_ = theta_schedule(X.shape[1], self.base)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X) -> np.ndarray:
        self._check_fitted()
        X = as_head_matrix(X, self.n_features_in_)
        layout = ChunkLayout(seq_len=X.shape[0], chunk_size=self.chunk_size)
        phis = phi_schedule(layout.num_chunks, self.base)
        return encode_sequence_3d(X, layout, self.schedule_, phis)

    def _check_fitted(self) -> None:
        if not hasattr(self, "schedule_"):
            raise NotFittedError("this encoder must be fitted before calling transform")
