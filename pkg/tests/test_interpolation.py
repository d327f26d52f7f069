import math

import pytest

from rope3d import (
    InfeasibleRechunkError,
    ParameterError,
    linear_pi_rope,
    phi_schedule,
    rechunk_3d,
    resolution_3d,
    resolution_grid_check,
    theta_schedule,
)
from rope3d.interpolation import REPORT_FIELDS


class TestLinearPi:
    def test_no_extension(self):
        assert linear_pi_rope(4096, 4096) == (1.0, 1.0)

    def test_halving(self):
        assert linear_pi_rope(4096, 8192) == (0.5, 0.5)

    def test_quartering(self):
        assert linear_pi_rope(4096, 16384) == (0.25, 0.25)

    def test_shrinking_rejected(self):
        with pytest.raises(ParameterError):
            linear_pi_rope(4096, 2048)

    def test_resolution_strictly_decreases(self):
        values = [linear_pi_rope(4096, target)[1] for target in (8192, 12288, 16384, 32768)]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestRechunk:
    def test_doubling(self):
        assert rechunk_3d(4096, 8192, 1024) == (4, 2048)

    def test_boundary_exactly_at_pretrain(self):
        assert rechunk_3d(4096, 16384, 1024) == (4, 4096)

    def test_infeasible(self):
        with pytest.raises(InfeasibleRechunkError):
            rechunk_3d(4096, 32768, 1024)

    def test_redecomposed_positions_stay_in_pretrained_range(self):
        _, new_chunk = rechunk_3d(4096, 16384, 1024)
        assert all(p % new_chunk <= 4096 - 1 for p in range(0, 16384, 97))


class TestResolutionReport:
    @pytest.fixture
    def schedule(self):
        return theta_schedule(128)

    @pytest.fixture
    def phis(self):
        return phi_schedule(4)

    def test_doubling_beats_interpolation(self, schedule, phis):
        report = resolution_3d(4096, 8192, 1024, schedule, phis)
        assert report.resolution_3d == 1.0
        assert report.resolution_rope_pi == 0.5
        assert report.theorem_holds and report.feasible
        assert not report.degenerate

    def test_zero_extension_is_degenerate_not_error(self, schedule, phis):
        report = resolution_3d(4096, 4096, 1024, schedule, phis)
        assert report.degenerate
        assert report.resolution_3d == 1.0 == report.resolution_rope_pi
        assert report.theorem_holds is False

    def test_boundary_value(self, schedule, phis):
        report = resolution_3d(4096, 16384, 1024, schedule, phis)
        expected = (4096 - 1) + (1e-4 - 1.0) / 1.0
        assert report.boundary_resolution == pytest.approx(expected, rel=1e-12)
        assert report.boundary_resolution == pytest.approx(4094.0001, rel=1e-12)
        assert report.boundary_resolution > report.new_chunk_size - 2

    def test_boundary_exceeds_capacity_minus_two_for_any_base(self, schedule):
        # phi_1 - phi_0 lies in (-1, 0) whenever base > 1, which keeps the
        # boundary spacing above new_chunk_size - 2.
        for base in (1.0001, 2.0, 10.0, 10000.0, 1e6):
            report = resolution_3d(4096, 8192, 1024, schedule, phi_schedule(4, base))
            assert report.boundary_resolution > report.new_chunk_size - 2

    def test_single_chunk_has_no_boundary(self, schedule, phis):
        report = resolution_3d(16, 16, 16, schedule, phis)
        assert report.num_chunks == 1
        assert math.isnan(report.boundary_resolution)

    def test_propagates_infeasible(self, schedule, phis):
        with pytest.raises(InfeasibleRechunkError):
            resolution_3d(4096, 32768, 1024, schedule, phis)

    def test_serialization_key_order(self, schedule, phis):
        report = resolution_3d(4096, 8192, 1024, schedule, phis)
        assert tuple(report.to_dict().keys()) == REPORT_FIELDS


class TestGrid:
    @pytest.fixture
    def schedule(self):
        return theta_schedule(128)

    @pytest.fixture
    def phis(self):
        return phi_schedule(8)

    def test_reference_grid(self, schedule, phis):
        reports = resolution_grid_check(
            4096, [8192, 12288, 16384], [512, 1024, 2048], schedule, phis
        )
        assert len(reports) == 9
        feasible = [r for r in reports if r.feasible]
        assert all(r.theorem_holds for r in feasible if r.meets_chunk_minimum)
        assert all(r.resolution_3d == 1.0 > r.resolution_rope_pi for r in feasible)
        infeasible = {(r.target_len, r.chunk_size) for r in reports if not r.feasible}
        assert infeasible == {(12288, 2048), (16384, 2048)}

    def test_infeasible_record_fields(self, schedule, phis):
        reports = resolution_grid_check(4096, [32768], [1024], schedule, phis)
        (report,) = reports
        assert not report.feasible
        assert report.new_chunk_size == 8192
        assert report.resolution_3d is None
        assert report.boundary_resolution is None
        assert report.theorem_holds is None

    def test_small_capacity_flagged_not_guaranteed(self, schedule, phis):
        # engineered so the stretched capacity lands at 2, below the
        # guarantee threshold of 3
        reports = resolution_grid_check(3, [4], [2], schedule, phis)
        (report,) = reports
        assert report.feasible
        assert report.new_chunk_size == 2
        assert not report.meets_chunk_minimum
        assert report.theorem_holds is True

    def test_empty_targets(self, schedule, phis):
        assert resolution_grid_check(4096, [], [1024], schedule, phis) == []
