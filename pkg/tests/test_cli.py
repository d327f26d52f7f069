import json

import pytest

import rope3d.encoding
from rope3d import decay_bound, theta_schedule
from rope3d.cli import main


def run(tmp_path, *argv):
    return main(list(argv)), tmp_path


class TestDecayCommand:
    def test_single_point_exact_bytes(self, tmp_path):
        out = tmp_path / "curve.csv"
        code = main(["decay", "--d", "4", "--base", "10000", "--max-rel", "0",
                     "--out", str(out)])
        assert code == 0
        assert out.read_bytes() == b"rel,bound\n0,1.500000\n"

    def test_full_curve_row_count_and_head(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert main(["decay", "--d", "128", "--max-rel", "8192", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 8194
        assert lines[0] == "rel,bound"
        assert lines[1] == "0,32.500000"

    def test_chunk_restricted_curve(self, tmp_path):
        out = tmp_path / "chunk.csv"
        assert main(["decay", "--d", "128", "--chunk", "100", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 101
        schedule = theta_schedule(128)
        assert lines[7] == f"6,{decay_bound(6, schedule):.6f}"

    def test_chunk_1000_row_count(self, tmp_path):
        out = tmp_path / "chunk.csv"
        assert main(["decay", "--d", "128", "--chunk", "1000", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 1001  # header plus one row per within-chunk offset
        assert lines[1] == "0,32.500000"

    def test_json_format(self, tmp_path):
        out = tmp_path / "curve.json"
        assert main(["decay", "--d", "4", "--max-rel", "2", "--format", "json",
                     "--out", str(out)]) == 0
        points = json.loads(out.read_text())
        assert points[0] == {"rel": 0, "bound": 1.5}
        assert len(points) == 3

    def test_surface_output(self, tmp_path):
        out = tmp_path / "surface.csv"
        assert main(["decay", "--d", "8", "--chunk", "3", "--chunk-deltas", "2",
                     "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "rel,chunk_delta,bound"
        assert len(lines) == 7
        assert lines[1] == "0,0,2.500000"
        assert lines[2] == "0,1,2.500000"

    def test_missing_mode_is_usage_error(self, capsys):
        assert main(["decay", "--d", "4"]) == 1
        assert "error" in capsys.readouterr().err

    def test_surface_without_chunk_is_usage_error(self):
        assert main(["decay", "--d", "4", "--chunk-deltas", "2"]) == 1

    def test_odd_dimension_is_usage_error(self, capsys):
        assert main(["decay", "--d", "5", "--max-rel", "1"]) == 1
        assert "even" in capsys.readouterr().err

    def test_unwritable_path_is_io_error(self, capsys):
        code = main(["decay", "--d", "4", "--max-rel", "0",
                     "--out", "/nonexistent-dir/curve.csv"])
        assert code == 2
        assert "cannot write" in capsys.readouterr().err


class TestRelposCommand:
    def test_twelve_by_four_grid(self, tmp_path):
        out = tmp_path / "relpos.csv"
        assert main(["relpos", "--length", "12", "--chunk", "4", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("qpos,k0,k1,")
        assert len(lines) == 13
        cells = lines[6].split(",")  # query position 5
        assert cells[0] == "5"
        assert cells[1 + 5] == "0/0"
        assert cells[1 + 2] == "1/-1"

    def test_single_cell(self, tmp_path):
        out = tmp_path / "one.csv"
        assert main(["relpos", "--length", "1", "--chunk", "1", "--out", str(out)]) == 0
        assert out.read_bytes() == b"qpos,k0\n0,0/0\n"

    def test_missing_flags_usage_error(self):
        assert main(["relpos", "--length", "4"]) == 1


class TestResolutionCommand:
    def test_single_record(self, tmp_path):
        out = tmp_path / "res.json"
        assert main(["resolution", "--pretrain", "4096", "--targets", "8192",
                     "--chunks", "1024", "--format", "json", "--out", str(out)]) == 0
        (record,) = json.loads(out.read_text())
        assert record["theorem_holds"] is True
        assert record["resolution_rope_pi"] == 0.5
        assert record["new_chunk_size"] == 2048

    def test_degenerate_record(self, tmp_path):
        out = tmp_path / "res.json"
        assert main(["resolution", "--pretrain", "4096", "--targets", "4096",
                     "--chunks", "1024", "--format", "json", "--out", str(out)]) == 0
        (record,) = json.loads(out.read_text())
        assert record["feasible"] is True
        assert record["theorem_holds"] is False

    def test_mixed_grid_keeps_exit_zero(self, tmp_path):
        out = tmp_path / "res.csv"
        assert main(["resolution", "--pretrain", "4096", "--targets", "8192,32768",
                     "--chunks", "1024", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0].startswith("pretrain_len,target_len,")
        assert lines[2].endswith(",,,false")  # infeasible row: empty resolutions

    def test_all_infeasible_exits_three(self, tmp_path, capsys):
        out = tmp_path / "res.csv"
        code = main(["resolution", "--pretrain", "4096", "--targets", "32768",
                     "--chunks", "1024", "--out", str(out)])
        assert code == 3
        assert "infeasible" in capsys.readouterr().err
        assert out.exists()  # records still written


class TestVerifyCommand:
    def test_default_suites_pass(self, capsys):
        assert main(["verify", "--trials", "20"]) == 0
        text = capsys.readouterr().out
        assert "angles:" in text and "FAIL" not in text

    def test_flipped_perp_is_caught(self, capsys, monkeypatch):
        original = rope3d.encoding.perp

        def flipped(h):
            return -original(h)

        monkeypatch.setattr(rope3d.encoding, "perp", flipped)
        assert main(["verify", "--trials", "20"]) == 3
        text = capsys.readouterr().out
        assert "FAIL encoding.form_equivalence" in text
        assert "seed" in text

    def test_single_trial_still_runs_everything(self, capsys):
        assert main(["verify", "--trials", "1"]) == 0
        text = capsys.readouterr().out
        assert "decay: 4/4 passed" in text

    def test_trials_must_be_positive(self):
        assert main(["verify", "--trials", "0"]) == 1


class TestAttnDemoCommand:
    def test_single_token(self, capsys):
        assert main(["attn-demo", "--length", "1", "--d", "4"]) == 0
        assert "output norms" in capsys.readouterr().out

    def test_grad_check_passes(self, capsys):
        assert main(["attn-demo", "--length", "8", "--chunk", "3", "--d", "4",
                     "--grad-check"]) == 0
        assert "gradient error" in capsys.readouterr().out

    def test_zero_length_usage_error(self):
        assert main(["attn-demo", "--length", "0"]) == 1

    def test_unknown_flag_usage_error(self):
        assert main(["attn-demo", "--length", "2", "--bogus"]) == 1


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["decay", "--d", "32", "--max-rel", "64"],
            ["decay", "--d", "32", "--chunk", "16", "--chunk-deltas", "3"],
            ["relpos", "--length", "9", "--chunk", "4"],
            ["resolution", "--pretrain", "4096", "--targets", "8192,12288",
             "--chunks", "512,2048", "--format", "json"],
        ],
    )
    def test_outputs_are_byte_identical(self, tmp_path, argv):
        first = tmp_path / "first.out"
        second = tmp_path / "second.out"
        assert main(argv + ["--out", str(first)]) == 0
        assert main(argv + ["--out", str(second)]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_demo_prints_are_stable(self, capsys):
        assert main(["attn-demo", "--length", "4", "--chunk", "2", "--d", "4",
                     "--seed", "3"]) == 0
        first = capsys.readouterr().out
        assert main(["attn-demo", "--length", "4", "--chunk", "2", "--d", "4",
                     "--seed", "3"]) == 0
        assert capsys.readouterr().out == first


def test_stdout_default(capsys):
    assert main(["decay", "--d", "4", "--max-rel", "1"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("rel,bound\n0,1.500000\n")


def test_version_flag():
    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
