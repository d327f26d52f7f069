"""Attention scores over encoded vectors, a toy forward pass, and gradient checks.

The score of an encoded query/key pair is the real part of their paired
complex inner product, which equals the plain dot product of the encoded
vectors. Closed forms are provided that skip the encoding step: the rotary
score depends only on the token offset ``m - n``, and the chunked 3D score
depends on the pair ``(phi_i - phi_j, m - n)``. The query side carries the
conjugation, so the chunk phases enter the score as ``exp(i*(phi_i - phi_j))``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .angles import AngleSchedule, ChunkAngles
from .chunking import ChunkLayout
from .encoding import (
    _as_complex_pairs,
    _check_chunk,
    _check_within,
    decode_sequence_3d,
    encode_sequence_3d,
)
from .errors import DimensionError, ParameterError
from .validation import as_head_vector


def _pair_score(q: np.ndarray, k: np.ndarray, token_delta: float, phase_delta: float,
                schedule: AngleSchedule) -> float:
    # Re[sum_l zq_l * conj(zk_l) * exp(i*(dm*theta_l - dphi))]; with dphi = 0.0
    # this is arithmetic-identical to the plain rotary score.
    w = _as_complex_pairs(q) * np.conj(_as_complex_pairs(k))
    phase = np.exp(1j * (token_delta * schedule.thetas - phase_delta))
    return float(np.sum(w * phase).real)


def score_rope(q, k, m: int, n: int, schedule: AngleSchedule) -> float:
    """Pre-softmax rotary attention score; depends on positions only via ``m - n``."""
    q = as_head_vector(q, schedule.d)
    k = as_head_vector(k, schedule.d)
    return _pair_score(q, k, _check_within(m) - _check_within(n), 0.0, schedule)


def score_3d(q, k, i: int, j: int, m: int, n: int, schedule: AngleSchedule,
             phis: ChunkAngles) -> float:
    """Chunked 3D attention score for a query at (i, m) and a key at (j, n).

    Within one chunk (``i == j``) the chunk phases cancel exactly and the
    value coincides with :func:`score_rope`.
    """
    q = as_head_vector(q, schedule.d)
    k = as_head_vector(k, schedule.d)
    i = _check_chunk(i, phis)
    j = _check_chunk(j, phis)
    token_delta = _check_within(m) - _check_within(n)
    phase_delta = phis.phis[i] - phis.phis[j]
    return _pair_score(q, k, token_delta, phase_delta, schedule)


def score_from_encoded(q_enc, k_enc) -> float:
    """Score two already-encoded vectors: Re[sum_l q_l * conj(k_l)] over paired halves."""
    q = np.asarray(q_enc, dtype=np.float64)
    k = np.asarray(k_enc, dtype=np.float64)
    if q.shape != k.shape or q.ndim != 1:
        raise DimensionError(f"encoded vectors must share one shape, got {q.shape} vs {k.shape}")
    return float(np.sum(_as_complex_pairs(q) * np.conj(_as_complex_pairs(k))).real)


@dataclass(frozen=True)
class AttentionBatch:
    """Query/key/value sequences for a toy forward pass.

    Arrays are either (L, d) for a single head or (H, L, d) for several
    independent heads; L must match the layout.
    """

    q: np.ndarray = field(repr=False)
    k: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    layout: ChunkLayout
    num_heads: int = field(init=False)

    def __post_init__(self) -> None:
        q = np.asarray(self.q, dtype=np.float64)
        k = np.asarray(self.k, dtype=np.float64)
        v = np.asarray(self.v, dtype=np.float64)
        if q.shape != k.shape or q.shape != v.shape:
            raise DimensionError(
                f"q, k, v must share a shape, got {q.shape}, {k.shape}, {v.shape}"
            )
        if q.ndim not in (2, 3):
            raise DimensionError(f"expected (L, d) or (heads, L, d), got shape {q.shape}")
        if q.shape[-2] != self.layout.seq_len:
            raise ParameterError(
                f"sequences of length {q.shape[-2]} do not fit a layout of {self.layout.seq_len}"
            )
        if q.shape[-1] % 2 != 0 or q.shape[-1] < 2:
            raise DimensionError(f"head dimension must be even, got {q.shape[-1]}")
        for name, a in (("q", q), ("k", k), ("v", v)):
            if not np.all(np.isfinite(a)):
                raise ParameterError(f"{name} contains non-finite entries")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "num_heads", 1 if q.ndim == 2 else q.shape[0])

    @property
    def d(self) -> int:
        return self.q.shape[-1]


def random_batch(layout: ChunkLayout, d: int, num_heads: int = 1,
                 rng: np.random.Generator | None = None) -> AttentionBatch:
    """Standard-normal q/k/v for demos and randomized checks."""
    rng = rng if rng is not None else np.random.default_rng(0)
    shape = (layout.seq_len, d) if num_heads == 1 else (num_heads, layout.seq_len, d)
    return AttentionBatch(
        q=rng.standard_normal(shape),
        k=rng.standard_normal(shape),
        v=rng.standard_normal(shape),
        layout=layout,
    )


def _softmax_rows(scores: np.ndarray) -> np.ndarray:
    shifted = scores - scores.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _masked_scores(scores: np.ndarray, causal: bool) -> np.ndarray:
    if not causal:
        return scores
    length = scores.shape[-1]
    mask = np.triu(np.ones((length, length), dtype=bool), k=1)
    return np.where(mask, -np.inf, scores)


def _forward_single(q, k, v, layout, schedule, phis, causal):
    q_enc = encode_sequence_3d(q, layout, schedule, phis)
    k_enc = encode_sequence_3d(k, layout, schedule, phis)
    scores = (q_enc @ k_enc.T) / np.sqrt(q.shape[-1])
    weights = _softmax_rows(_masked_scores(scores, causal))
    return q_enc, k_enc, scores, weights, weights @ v


def attention_forward(batch: AttentionBatch, schedule: AngleSchedule, phis: ChunkAngles,
                      causal: bool = False) -> np.ndarray:
    """Softmax attention with chunked-3D-encoded queries and keys.

    Scores are scaled by ``1/sqrt(d)``; masking is off by default. The output
    has the same shape as ``batch.v`` and each row is a convex combination of
    value rows.
    """
    if batch.q.ndim == 2:
        return _forward_single(batch.q, batch.k, batch.v, batch.layout, schedule, phis, causal)[-1]
    return np.stack([
        _forward_single(batch.q[h], batch.k[h], batch.v[h], batch.layout, schedule, phis, causal)[-1]
        for h in range(batch.num_heads)
    ])


def _grads_single(q, k, v, layout, schedule, phis, causal):
    # Analytic gradients of loss = sum(outputs) through the closed-form
    # pipeline: dot-product scores over encoded vectors, row softmax, and the
    # per-position orthogonal encoding (whose adjoint is the decode).
    q_enc, k_enc, _, weights, _ = _forward_single(q, k, v, layout, schedule, phis, causal)
    d_out = np.ones_like(v)
    d_v = weights.T @ d_out
    d_weights = d_out @ v.T
    d_scores = weights * (d_weights - np.sum(d_weights * weights, axis=-1, keepdims=True))
    d_scores /= np.sqrt(q.shape[-1])
    d_q = decode_sequence_3d(d_scores @ k_enc, layout, schedule, phis)
    d_k = decode_sequence_3d(d_scores.T @ q_enc, layout, schedule, phis)
    return d_q, d_k, d_v


def attention_gradients(batch: AttentionBatch, schedule: AngleSchedule, phis: ChunkAngles,
                        causal: bool = False) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Hand-derived gradients of ``attention_forward(...).sum()`` w.r.t. q, k, v."""
    if batch.q.ndim == 2:
        return _grads_single(batch.q, batch.k, batch.v, batch.layout, schedule, phis, causal)
    per_head = [
        _grads_single(batch.q[h], batch.k[h], batch.v[h], batch.layout, schedule, phis, causal)
        for h in range(batch.num_heads)
    ]
    return tuple(np.stack([g[i] for g in per_head]) for i in range(3))


def grad_check(batch: AttentionBatch, schedule: AngleSchedule, phis: ChunkAngles,
               eps: float = 1e-4, causal: bool = False,
               max_coords_per_tensor: int | None = None, seed: int = 0) -> float:
    """Compare analytic gradients against central finite differences.

    Returns ``max |g_analytic - g_fd| / max(1, |g_analytic|)`` over the
    sampled coordinates of q, k and v. ``eps`` must lie in [1e-6, 1e-3].
    """
    eps = float(eps)
    if eps < 1e-6 or eps > 1e-3:
        raise ParameterError(f"eps must lie in [1e-6, 1e-3], got {eps}")
    analytic = attention_gradients(batch, schedule, phis, causal)
    if not all(np.all(np.isfinite(g)) for g in analytic):
        raise ParameterError("analytic gradient is not finite")

    rng = np.random.default_rng(seed)
    arrays = {"q": batch.q, "k": batch.k, "v": batch.v}

    def loss_with(name: str, perturbed: np.ndarray) -> float:
        parts = dict(arrays)
        parts[name] = perturbed
        probe = AttentionBatch(q=parts["q"], k=parts["k"], v=parts["v"], layout=batch.layout)
        return float(attention_forward(probe, schedule, phis, causal).sum())

    worst = 0.0
    for name, grad in zip(("q", "k", "v"), analytic):
        flat_indices = np.arange(grad.size)
        if max_coords_per_tensor is not None and grad.size > max_coords_per_tensor:
            flat_indices = rng.choice(grad.size, size=max_coords_per_tensor, replace=False)
        base = arrays[name]
        for idx in flat_indices:
            coord = np.unravel_index(int(idx), base.shape)
            plus = base.copy()
            plus[coord] += eps
            minus = base.copy()
            minus[coord] -= eps
            fd = (loss_with(name, plus) - loss_with(name, minus)) / (2.0 * eps)
            g = grad[coord]
            worst = max(worst, abs(g - fd) / max(1.0, abs(g)))
    return worst
