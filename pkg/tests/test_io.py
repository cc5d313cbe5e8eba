"""Artifact I/O: exact roundtrips and line-numbered format errors."""

import json

import numpy as np
import pytest

from groupflow import exp_curve, make_group
from groupflow.distributions import parse_spec, sample
from groupflow.io import (
    CsvFormatError,
    read_config_file,
    read_loss_csv,
    read_report_json,
    read_trajectories_csv,
    trajectory_header,
    write_config_file,
    write_loss_csv,
    write_report_json,
    write_trajectories_csv,
)


def _make_trajectory(group, n=4, steps=5, seed=3):
    rng = np.random.default_rng(seed)
    spec = parse_spec("gaussian" if group.name != "se2xr2" else "gaussian+gaussian", group)
    g0 = sample(spec, group, n, rng)
    g1 = sample(spec, group, n, rng)
    times = np.linspace(0.0, 1.0, steps + 1)
    return times, [exp_curve(group, g0, g1, t) for t in times]


class TestLossCsv:
    def test_roundtrip_is_exact(self, tmp_path, rng):
        losses = rng.uniform(0, 1, 17)
        path = tmp_path / "loss.csv"
        write_loss_csv(path, losses)
        assert np.array_equal(read_loss_csv(path), losses)

    def test_header_line(self, tmp_path, rng):
        path = tmp_path / "loss.csv"
        write_loss_csv(path, rng.uniform(0, 1, 3))
        assert path.read_text().splitlines()[0] == "step,loss"

    def test_bad_header_reports_line_one(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("iteration,loss\n0,0.5\n")
        with pytest.raises(CsvFormatError, match=r":1:") as err:
            read_loss_csv(path)
        assert err.value.line_no == 1

    def test_non_sequential_step_reports_line(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("step,loss\n0,0.5\n2,0.4\n")
        with pytest.raises(CsvFormatError, match=r":3:"):
            read_loss_csv(path)

    def test_unparseable_value_reports_line(self, tmp_path):
        path = tmp_path / "loss.csv"
        path.write_text("step,loss\n0,0.5\n1,oops\n")
        with pytest.raises(CsvFormatError, match=r":3:"):
            read_loss_csv(path)


class TestTrajectoriesCsv:
    def test_header_matches_coord_names(self):
        group = make_group("se2")
        assert trajectory_header(group) == "sample_id,step,t,x,y,theta"
        product = make_group("se2xr2")
        assert trajectory_header(product) == (
            "sample_id,step,t,g0_x,g0_y,g0_theta,g1_x0,g1_x1"
        )

    @pytest.mark.parametrize("gid", ["r2", "se2", "so3", "se2xr2"])
    def test_roundtrip_is_exact(self, tmp_path, gid):
        group = make_group(gid)
        times, trajectory = _make_trajectory(group)
        path = tmp_path / "traj.csv"
        write_trajectories_csv(path, group, times, trajectory)
        ids, times_back, coords = read_trajectories_csv(path, group)
        assert np.array_equal(ids, np.arange(4))
        assert np.array_equal(times_back, times)
        want = np.stack([group.to_coords(g) for g in trajectory])
        assert np.array_equal(coords, want)

    def test_rows_grouped_by_sample_then_step(self, tmp_path):
        group = make_group("r2")
        times, trajectory = _make_trajectory(group, n=3, steps=2)
        path = tmp_path / "traj.csv"
        write_trajectories_csv(path, group, times, trajectory)
        rows = path.read_text().splitlines()[1:]
        lead = [tuple(int(v) for v in r.split(",")[:2]) for r in rows]
        assert lead == [
            (0, 0), (0, 1), (0, 2),
            (1, 0), (1, 1), (1, 2),
            (2, 0), (2, 1), (2, 2),
        ]

    def _write_and_edit(self, tmp_path, edit):
        group = make_group("r2")
        times, trajectory = _make_trajectory(group, n=2, steps=2)
        path = tmp_path / "traj.csv"
        write_trajectories_csv(path, group, times, trajectory)
        lines = path.read_text().splitlines()
        edit(lines)
        path.write_text("\n".join(lines) + "\n")
        return path, group

    def test_wrong_header(self, tmp_path):
        def edit(lines):
            lines[0] = "sample,step,t,x0,x1"

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":1:"):
            read_trajectories_csv(path, group)

    def test_wrong_column_count(self, tmp_path):
        def edit(lines):
            lines[4] = lines[4] + ",9.0"

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":5:"):
            read_trajectories_csv(path, group)

    def test_non_numeric_value(self, tmp_path):
        def edit(lines):
            parts = lines[2].split(",")
            parts[3] = "NaN?"
            lines[2] = ",".join(parts)

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":3:"):
            read_trajectories_csv(path, group)

    def test_non_finite_value(self, tmp_path):
        def edit(lines):
            parts = lines[3].split(",")
            parts[3] = "inf"
            lines[3] = ",".join(parts)

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":4:"):
            read_trajectories_csv(path, group)

    def test_time_outside_unit_interval(self, tmp_path):
        def edit(lines):
            parts = lines[2].split(",")
            parts[2] = "1.5"
            lines[2] = ",".join(parts)

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":3:"):
            read_trajectories_csv(path, group)

    def test_step_must_start_at_zero(self, tmp_path):
        def edit(lines):
            del lines[1]

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":2:"):
            read_trajectories_csv(path, group)

    def test_step_sequence_break(self, tmp_path):
        def edit(lines):
            del lines[2]

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError, match=r":3:"):
            read_trajectories_csv(path, group)

    def test_samples_must_share_times(self, tmp_path):
        def edit(lines):
            parts = lines[5].split(",")
            parts[2] = "0.4999"
            lines[5] = ",".join(parts)

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError):
            read_trajectories_csv(path, group)

    def test_truncated_final_sample(self, tmp_path):
        def edit(lines):
            del lines[6]

        path, group = self._write_and_edit(tmp_path, edit)
        with pytest.raises(CsvFormatError):
            read_trajectories_csv(path, group)

    def test_error_carries_path_and_line(self, tmp_path):
        path = tmp_path / "traj.csv"
        path.write_text("bogus\n")
        group = make_group("r2")
        with pytest.raises(CsvFormatError) as err:
            read_trajectories_csv(path, group)
        assert str(path) in str(err.value)
        assert err.value.line_no == 1


class TestReportJson:
    def test_roundtrip(self, tmp_path):
        report = {"mmd": 0.125, "group": "se2", "nested": {"a": [1, 2.5]}}
        path = tmp_path / "report.json"
        write_report_json(path, report)
        assert read_report_json(path) == report

    def test_keys_sorted_and_indented(self, tmp_path):
        path = tmp_path / "report.json"
        write_report_json(path, {"b": 1, "a": 2})
        text = path.read_text()
        assert text.index('"a"') < text.index('"b"')
        assert text.endswith("\n")
        assert json.loads(text) == {"a": 2, "b": 1}


class TestConfigFile:
    def test_roundtrip_values_as_strings(self, tmp_path):
        values = {"steps": 100, "lr": 0.001, "group": "se2", "skip": None}
        path = tmp_path / "config.txt"
        write_config_file(path, values)
        back = read_config_file(path)
        assert back == {"steps": "100", "lr": "0.001", "group": "se2"}

    def test_float_formatting_is_repr(self, tmp_path):
        path = tmp_path / "config.txt"
        write_config_file(path, {"lr": 1e-3, "epsilon": 0.1 + 0.2})
        back = read_config_file(path)
        assert float(back["lr"]) == 1e-3
        assert float(back["epsilon"]) == 0.1 + 0.2

    def test_comments_and_blank_lines_skipped(self, tmp_path):
        path = tmp_path / "config.txt"
        path.write_text("# a comment\n\nsteps = 10\n  lr=0.5\n")
        assert read_config_file(path) == {"steps": "10", "lr": "0.5"}

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "config.txt"
        path.write_text("steps=10\nsteps=20\n")
        with pytest.raises(ValueError, match="duplicate"):
            read_config_file(path)

    def test_missing_equals_rejected(self, tmp_path):
        path = tmp_path / "config.txt"
        path.write_text("steps 10\n")
        with pytest.raises(ValueError):
            read_config_file(path)

    def test_keys_written_sorted(self, tmp_path):
        path = tmp_path / "config.txt"
        write_config_file(path, {"zeta": 1, "alpha": 2})
        lines = path.read_text().splitlines()
        assert lines == ["alpha=2", "zeta=1"]
