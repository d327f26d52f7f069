"""Independent brute-force references used as oracles by the tests.

Everything here goes through the dense rotation matrix and explicit Python
loops; none of it shares the paired-complex code paths under test.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

from rope3d import ChunkLayout


def naive_perp_matrix(d: int) -> np.ndarray:
    half = d // 2
    out = np.zeros((d, d))
    out[:half, half:] = -np.eye(half)
    out[half:, :half] = np.eye(half)
    return out


def naive_rotation_matrix(m, schedule) -> np.ndarray:
    """Dense position rotation built entry by entry from its definition."""
    d = schedule.d
    half = d // 2
    out = np.zeros((d, d))
    for l in range(half):
        angle = m * schedule.thetas[l]
        out[l, l] = math.cos(angle)
        out[l, half + l] = -math.sin(angle)
        out[half + l, l] = math.sin(angle)
        out[half + l, half + l] = math.cos(angle)
    return out


def naive_encode_3d(h, j, m, schedule, phis) -> np.ndarray:
    """Dense-matrix encoding: rotate the phase-mixed vector."""
    h = np.asarray(h, dtype=np.float64)
    phi = phis.phis[j]
    mixed = math.cos(phi) * (naive_perp_matrix(len(h)) @ h) + math.sin(phi) * h
    return naive_rotation_matrix(m, schedule) @ mixed


def paired_inner(a, b) -> float:
    """Re[sum_l (a_l + i a_{d/2+l}) * conj(b_l + i b_{d/2+l})], term by term."""
    half = len(a) // 2
    total = 0j
    for l in range(half):
        total += complex(a[l], a[half + l]) * complex(b[l], b[half + l]).conjugate()
    return total.real


def naive_score(q, k, i, j, m, n, schedule, phis) -> float:
    """Score from naively encoded vectors."""
    q_enc = naive_encode_3d(q, i, m, schedule, phis)
    k_enc = naive_encode_3d(k, j, n, schedule, phis)
    return paired_inner(q_enc, k_enc)


def naive_attention(q, k, v, layout: ChunkLayout, schedule, phis, causal=False) -> np.ndarray:
    """Double-loop softmax attention over dense-matrix encodings."""
    length, d = q.shape
    q_enc = []
    k_enc = []
    for p in range(length):
        j, m = divmod(p, layout.chunk_size)
        q_enc.append(naive_encode_3d(q[p], j, m, schedule, phis))
        k_enc.append(naive_encode_3d(k[p], j, m, schedule, phis))
    scores = np.empty((length, length))
    for p in range(length):
        for t in range(length):
            scores[p, t] = paired_inner(q_enc[p], k_enc[t])
    scores /= math.sqrt(d)
    out = np.zeros_like(v)
    for p in range(length):
        row = scores[p].copy()
        if causal:
            row[p + 1:] = -np.inf
        row -= row.max()
        weights = np.exp(row)
        weights /= weights.sum()
        for t in range(length):
            out[p] += weights[t] * v[t]
    return out


def naive_partial_sum_bound(rel, schedule) -> float:
    """Mean magnitude of the partial exponential sums, accumulated term by term."""
    half = schedule.d // 2
    total = 0.0
    running = 0j
    for l in range(half):
        running += cmath.exp(1j * rel * schedule.thetas[l])
        total += abs(running)
    return total / half
