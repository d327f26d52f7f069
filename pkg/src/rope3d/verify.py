"""Randomized self-checks of the library's invariants.

Each check draws its own seeded generator so a failure can be reproduced from
the reported seed alone. The CLI ``verify`` command runs everything and maps
any failure to exit code 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import attention, chunking, decay, encoding, interpolation
from .angles import ChunkAngles, phi_schedule, scale_thetas, theta_schedule

_EVEN_DIMS = (2, 4, 8, 16, 64, 128)


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    seed: int
    detail: str = ""

    def line(self) -> str:
        status = "ok" if self.passed else "FAIL"
        msg = f" ({self.detail})" if self.detail and not self.passed else ""
        return f"{self.suite}.{self.name}: {status}{msg}"


def _result(suite, name, seed, passed, detail=""):
    return CheckResult(suite=suite, name=name, passed=bool(passed), seed=seed, detail=detail)


def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _random_schedule(rng):
    d = int(rng.choice(_EVEN_DIMS))
    base = float(rng.uniform(2.0, 1e6))
    return theta_schedule(d, base)


# ---------------------------------------------------------------- angles

def check_theta_ratio(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s = _random_schedule(rng)
        ls = rng.integers(0, s.num_pairs, size=2)
        expected = s.base ** (-2.0 * (ls[0] - ls[1]) / s.d)
        got = s.thetas[ls[0]] / s.thetas[ls[1]]
        worst = max(worst, abs(got - expected) / abs(expected))
    return _result("angles", "theta_ratio", seed, worst <= 1e-12, f"worst rel err {worst:.3e}")


def check_theta_shape(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        s = _random_schedule(rng)
        ok &= s.thetas[0] == 1.0
        ok &= bool(np.all(np.diff(s.thetas) < 0)) if s.num_pairs > 1 and s.base > 1 else True
        ok &= bool(np.all(s.thetas > 0))
    return _result("angles", "head_one_and_decreasing", seed, ok)


def check_scale_identity(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        s = _random_schedule(rng)
        ok &= bool(np.array_equal(scale_thetas(s, 1.0).thetas, s.thetas))
    return _result("angles", "scale_identity", seed, ok)


def check_phi_ratio(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        base = float(rng.uniform(2.0, 1e6))
        phis = phi_schedule(int(rng.integers(2, 12)), base).phis
        ratios = phis[1:] / phis[:-1]
        worst = max(worst, float(np.max(np.abs(ratios - 1.0 / base) * base)))
    return _result("angles", "phi_ratio", seed, worst <= 1e-12, f"worst rel err {worst:.3e}")


# ---------------------------------------------------------------- chunking

def _random_layout(rng):
    seq_len = int(rng.integers(1, 40))
    chunk = int(rng.integers(1, 12))
    return chunking.ChunkLayout(seq_len=seq_len, chunk_size=chunk)


def check_decompose_roundtrip(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        layout = _random_layout(rng)
        p = int(rng.integers(0, layout.seq_len))
        j, m = chunking.decompose(p, layout)
        ok &= j * layout.chunk_size + m == p
        ok &= 0 <= m < layout.chunk_size and 0 <= j < layout.num_chunks
    return _result("chunking", "decompose_roundtrip", seed, ok)


def check_matrix_antisymmetry(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(max(1, trials // 10)):
        layout = _random_layout(rng)
        a = chunking.relative_position_matrix(layout)
        ok &= bool(np.array_equal(a, -a.transpose(1, 0, 2)))
    return _result("chunking", "matrix_antisymmetry", seed, ok)


def check_within_chunk_span(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(max(1, trials // 10)):
        layout = _random_layout(rng)
        a = chunking.relative_position_matrix(layout)
        chunks = np.arange(layout.seq_len) // layout.chunk_size
        for g in range(layout.num_chunks):
            members = np.flatnonzero(chunks == g)
            occupancy = members.size
            deltas = a[np.ix_(members, members)][:, :, 1]
            ok &= set(deltas.ravel().tolist()) == set(range(-(occupancy - 1), occupancy))
    return _result("chunking", "within_chunk_span", seed, ok)


# ---------------------------------------------------------------- encoding

def _random_encode_inputs(rng, max_chunks=6, max_within=512):
    s = _random_schedule(rng)
    phis = phi_schedule(int(rng.integers(1, max_chunks + 1)), s.base)
    h = rng.standard_normal(s.d)
    j = int(rng.integers(0, phis.num_chunks))
    m = int(rng.integers(0, max_within))
    return s, phis, h, j, m


def check_isometry(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, h, j, m = _random_encode_inputs(rng)
        out = encoding.encode_3d(h, j, m, s, phis).values
        worst = max(worst, abs(np.linalg.norm(out) - np.linalg.norm(h)) / np.linalg.norm(h))
    return _result("encoding", "isometry", seed, worst <= 1e-12, f"worst rel err {worst:.3e}")


def check_form_equivalence(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, h, j, m = _random_encode_inputs(rng)
        a = encoding.encode_3d(h, j, m, s, phis).values
        b = encoding.encode_3d_phase(h, j, m, s, phis).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    return _result("encoding", "form_equivalence", seed, worst <= 1e-12, f"worst abs err {worst:.3e}")


def check_rope_degeneration(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s = _random_schedule(rng)
        n_chunks = int(rng.integers(1, 5))
        flat_phis = ChunkAngles(n_chunks, s.base, np.full(n_chunks, np.pi / 2.0))
        h = rng.standard_normal(s.d)
        j = int(rng.integers(0, n_chunks))
        m = int(rng.integers(0, 64))
        a = encoding.encode_3d(h, j, m, s, flat_phis).values
        b = encoding.encode_rope(h, m, s).values
        worst = max(worst, float(np.max(np.abs(a - b))))
    return _result("encoding", "rope_degeneration", seed, worst <= 1e-12, f"worst abs err {worst:.3e}")


def check_perp_properties(seed, trials):
    rng = _rng(seed)
    ok = True
    worst = 0.0
    for _ in range(trials):
        d = int(rng.choice(_EVEN_DIMS))
        h = rng.standard_normal(d)
        p = encoding.perp(h)
        worst = max(worst, abs(float(np.dot(h, p))))
        ok &= bool(np.array_equal(encoding.perp(p), -h))
        ok &= abs(np.linalg.norm(p) - np.linalg.norm(h)) <= 1e-12 * np.linalg.norm(h)
    return _result("encoding", "perp_orthogonal_involution", seed, ok and worst <= 1e-12,
                   f"worst |<h, perp(h)>| {worst:.3e}")


def check_rotation_orthogonal(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(max(1, trials // 10)):
        s = theta_schedule(int(rng.choice((2, 4, 8, 16))), float(rng.uniform(2.0, 1e5)))
        m = int(rng.integers(0, 200))
        r = encoding.rotation_matrix(m, s)
        worst = max(worst, float(np.max(np.abs(r.T @ r - np.eye(s.d)))))
    return _result("encoding", "rotation_orthogonal", seed, worst <= 1e-12,
                   f"worst abs err {worst:.3e}")


def check_rotation_composition(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(max(1, trials // 10)):
        s = theta_schedule(int(rng.choice((2, 4, 8, 16))), float(rng.uniform(2.0, 1e5)))
        m1, m2 = (int(v) for v in rng.integers(0, 100, size=2))
        lhs = encoding.rotation_matrix(m1, s) @ encoding.rotation_matrix(m2, s)
        rhs = encoding.rotation_matrix(m1 + m2, s)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return _result("encoding", "rotation_composition", seed, worst <= 1e-10,
                   f"worst abs err {worst:.3e}")


# ---------------------------------------------------------------- attention

def _random_score_inputs(rng):
    s = _random_schedule(rng)
    phis = phi_schedule(int(rng.integers(1, 6)), s.base)
    q = rng.standard_normal(s.d)
    k = rng.standard_normal(s.d)
    i, j = (int(v) for v in rng.integers(0, phis.num_chunks, size=2))
    m, n = (int(v) for v in rng.integers(0, 256, size=2))
    return s, phis, q, k, i, j, m, n


def check_same_chunk_reduction(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, q, k, i, _, m, n = _random_score_inputs(rng)
        diff = abs(attention.score_3d(q, k, i, i, m, n, s, phis)
                   - attention.score_rope(q, k, m, n, s))
        worst = max(worst, diff)
    return _result("attention", "same_chunk_reduction", seed, worst < 1e-12,
                   f"worst abs diff {worst:.3e}")


def check_conjugate_symmetry(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, q, k, i, j, m, n = _random_score_inputs(rng)
        a = attention.score_3d(q, k, i, j, m, n, s, phis)
        b = attention.score_3d(k, q, j, i, n, m, s, phis)
        worst = max(worst, abs(a - b))
    return _result("attention", "conjugate_symmetry", seed, worst <= 1e-12,
                   f"worst abs diff {worst:.3e}")


def check_shift_invariance(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, q, k, i, j, m, n = _random_score_inputs(rng)
        shift = int(rng.integers(0, 64))
        a = attention.score_3d(q, k, i, j, m, n, s, phis)
        b = attention.score_3d(q, k, i, j, m + shift, n + shift, s, phis)
        worst = max(worst, abs(a - b) / max(1.0, abs(a)))
    return _result("attention", "shift_invariance", seed, worst <= 1e-12,
                   f"worst rel diff {worst:.3e}")


def check_encoded_vs_closed_form(seed, trials):
    rng = _rng(seed)
    worst = 0.0
    for _ in range(trials):
        s, phis, q, k, i, j, m, n = _random_score_inputs(rng)
        enc = attention.score_from_encoded(
            encoding.encode_3d(q, i, m, s, phis), encoding.encode_3d(k, j, n, s, phis)
        )
        closed = attention.score_3d(q, k, i, j, m, n, s, phis)
        worst = max(worst, abs(enc - closed))
    return _result("attention", "encoded_vs_closed_form", seed, worst <= 1e-10,
                   f"worst abs diff {worst:.3e}")


def check_softmax_and_hull(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(max(1, trials // 20)):
        layout = chunking.ChunkLayout(seq_len=int(rng.integers(1, 12)),
                                      chunk_size=int(rng.integers(1, 5)))
        d = int(rng.choice((2, 4, 8)))
        s = theta_schedule(d)
        phis = phi_schedule(layout.num_chunks)
        batch = attention.random_batch(layout, d, rng=rng)
        q_enc = encoding.encode_sequence_3d(batch.q, layout, s, phis)
        k_enc = encoding.encode_sequence_3d(batch.k, layout, s, phis)
        weights = attention._softmax_rows((q_enc @ k_enc.T) / np.sqrt(d))
        ok &= bool(np.all(np.abs(weights.sum(axis=1) - 1.0) <= 1e-12))
        out = attention.attention_forward(batch, s, phis)
        lo = batch.v.min(axis=0) - 1e-12
        hi = batch.v.max(axis=0) + 1e-12
        ok &= bool(np.all(out >= lo) and np.all(out <= hi))
    return _result("attention", "softmax_rows_and_hull", seed, ok)


# ---------------------------------------------------------------- decay

def check_bound_at_zero(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        s = _random_schedule(rng)
        ok &= abs(decay.decay_bound(0, s) - (s.d / 2 + 1) / 2) <= 1e-12
    return _result("decay", "bound_at_zero", seed, ok)


def check_curve_prefix(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(max(1, trials // 10)):
        s = _random_schedule(rng)
        c = int(rng.integers(1, 64))
        full = decay.decay_curve_rope(c - 1, s)
        restricted = decay.decay_curve_3d(c, s)
        ok &= bool(np.all(np.abs(full.bounds - restricted.bounds) <= 1e-12))
    return _result("decay", "restricted_curve_is_prefix", seed, ok)


def check_partial_sum_triangle(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        s = _random_schedule(rng)
        rel = int(rng.integers(0, 10000))
        sums = decay.partial_sums(rel, s)
        ok &= bool(np.all(sums <= np.arange(1, s.num_pairs + 1) + 1e-12))
    return _result("decay", "partial_sum_triangle", seed, ok)


def check_coarse_decay_trend(seed, trials):
    s = theta_schedule(128, 10000.0)
    bounds = decay.decay_curve_rope(8191, s).bounds
    windows = bounds.reshape(32, 256).mean(axis=1)
    ok = windows[0] >= windows[-1]
    return _result("decay", "coarse_trend_first_to_last_window", seed, ok,
                   f"first {windows[0]:.3f}, last {windows[-1]:.3f}")


# ---------------------------------------------------------------- interpolation

def check_pi_resolution_monotone(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        pretrain = int(rng.integers(64, 4097))
        lengths = np.sort(rng.integers(pretrain, pretrain * 16, size=4))
        res = [interpolation.linear_pi_rope(pretrain, int(t))[1] for t in lengths]
        ok &= all(b < a or lb == la for a, b, la, lb in zip(res, res[1:], lengths, lengths[1:]))
    return _result("interpolation", "pi_resolution_monotone", seed, ok)


def check_grid_resolution_improvement(seed, trials):
    s = theta_schedule(128)
    phis = phi_schedule(8)
    reports = interpolation.resolution_grid_check(
        4096, [8192, 12288, 16384], [512, 1024, 2048], s, phis
    )
    ok = all(
        r.theorem_holds
        for r in reports
        if r.feasible and r.meets_chunk_minimum and r.target_len > r.pretrain_len
    )
    ok &= any(not r.feasible for r in reports)  # the 2048-chunk grid corner
    return _result("interpolation", "grid_resolution_improvement", seed, ok)


def check_boundary_chain(seed, trials):
    rng = _rng(seed)
    s = theta_schedule(128)
    ok = True
    for _ in range(trials):
        base = float(rng.uniform(1.5, 1e6))
        phis = phi_schedule(4, base)
        pretrain = int(rng.integers(16, 4096))
        chunk = int(rng.integers(1, pretrain))
        target = int(rng.integers(pretrain, pretrain * 2))
        try:
            report = interpolation.resolution_3d(pretrain, target, chunk, s, phis)
        except interpolation.InfeasibleRechunkError:
            continue
        if report.num_chunks >= 2:
            ok &= report.boundary_resolution > report.new_chunk_size - 2
    return _result("interpolation", "boundary_exceeds_capacity_minus_two", seed, ok)


def check_redecompose_range(seed, trials):
    rng = _rng(seed)
    ok = True
    for _ in range(trials):
        pretrain = int(rng.integers(16, 2048))
        chunk = int(rng.integers(1, pretrain + 1))
        target = int(rng.integers(pretrain, pretrain * 3))
        try:
            num_chunks, new_chunk = interpolation.rechunk_3d(pretrain, target, chunk)
        except interpolation.InfeasibleRechunkError:
            continue
        layout = chunking.ChunkLayout(seq_len=target, chunk_size=new_chunk)
        within = np.arange(target) % new_chunk
        ok &= layout.num_chunks <= num_chunks and bool(np.all(within <= pretrain - 1))
    return _result("interpolation", "rechunk_keeps_pretrained_range", seed, ok)


_CHECKS = (
    check_theta_ratio,
    check_theta_shape,
    check_scale_identity,
    check_phi_ratio,
    check_decompose_roundtrip,
    check_matrix_antisymmetry,
    check_within_chunk_span,
    check_isometry,
    check_form_equivalence,
    check_rope_degeneration,
    check_perp_properties,
    check_rotation_orthogonal,
    check_rotation_composition,
    check_same_chunk_reduction,
    check_conjugate_symmetry,
    check_shift_invariance,
    check_encoded_vs_closed_form,
    check_softmax_and_hull,
    check_bound_at_zero,
    check_curve_prefix,
    check_partial_sum_triangle,
    check_coarse_decay_trend,
    check_pi_resolution_monotone,
    check_grid_resolution_improvement,
    check_boundary_chain,
    check_redecompose_range,
)


def run_all(seed: int = 0, trials: int = 200) -> list[CheckResult]:
    """Run every invariant check with per-check seeds derived from ``seed``."""
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    results = []
    for offset, check in enumerate(_CHECKS):
        results.append(check(seed + offset, trials))
    return results
