"""Artifact readers and writers: loss logs, trajectory CSVs, reports, configs.

All floats are serialized with repr, which is the shortest string that
parses back to the identical double, so every artifact round-trips exactly
and identical runs produce byte-identical files.

Trajectory CSV schema (consumed by the viz frontend):
    sample_id,step,t,<coord columns per group>
Rows are grouped by sample_id with steps ascending; each sample has
steps + 1 rows covering t = 0 to t = 1.
"""

from __future__ import annotations

import json

import numpy as np

from .core import Array, Group


class CsvFormatError(ValueError):
    """Malformed artifact CSV; message carries file and line number."""

    def __init__(self, path, line_no: int, message: str):
        super().__init__(f"{path}:{line_no}: {message}")
        self.path = str(path)
        self.line_no = line_no


def _fmt(x: float) -> str:
    return repr(float(x))


def write_loss_csv(path, losses: Array) -> None:
    with open(path, "w") as fh:
        fh.write("step,loss\n")
        for step, loss in enumerate(np.asarray(losses, dtype=float)):
            fh.write(f"{step},{_fmt(loss)}\n")


def read_loss_csv(path) -> Array:
    losses = []
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != "step,loss":
            raise CsvFormatError(path, 1, f"expected header 'step,loss', got '{header}'")
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise CsvFormatError(path, line_no, f"expected 2 columns, got {len(parts)}")
            try:
                step = int(parts[0])
                loss = float(parts[1])
            except ValueError:
                raise CsvFormatError(path, line_no, f"bad numeric value in '{line}'") from None
            if step != len(losses):
                raise CsvFormatError(path, line_no, f"expected step {len(losses)}, got {step}")
            losses.append(loss)
    return np.asarray(losses)


def trajectory_header(group: Group) -> str:
    return ",".join(("sample_id", "step", "t", *group.coord_names))


def write_trajectories_csv(path, group: Group, times: Array, trajectory: list) -> None:
    """Write an integration result; trajectory is a list of element batches."""
    times = np.asarray(times, dtype=float)
    if len(trajectory) != times.shape[0]:
        raise ValueError("trajectory length does not match times")
    coords = np.stack([group.to_coords(g) for g in trajectory], axis=0)
    if coords.ndim != 3:
        raise ValueError("trajectory batches must have a single batch axis")
    n_steps, n_samples, _ = coords.shape
    with open(path, "w") as fh:
        fh.write(trajectory_header(group) + "\n")
        for i in range(n_samples):
            for k in range(n_steps):
                row = coords[k, i]
                fh.write(
                    f"{i},{k},{_fmt(times[k])},"
                    + ",".join(_fmt(v) for v in row)
                    + "\n"
                )


def read_trajectories_csv(path, group: Group) -> tuple[Array, Array, Array]:
    """Read a trajectory CSV back; returns (sample_ids, times, coords).

    Shapes: sample_ids (n,), times (steps+1,), coords (steps+1, n, n_coords).
    Validates the header, column counts, numeric fields, t in [0, 1], and
    that every sample covers the same ascending step sequence; any violation
    raises CsvFormatError with the offending line number.
    """
    expected_header = trajectory_header(group)
    rows: dict[int, list[tuple[int, float, list[float]]]] = {}
    n_cols = 3 + group.n_coords
    with open(path) as fh:
        header = fh.readline().rstrip("\n")
        if header != expected_header:
            raise CsvFormatError(
                path, 1, f"expected header '{expected_header}', got '{header}'"
            )
        for line_no, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != n_cols:
                raise CsvFormatError(
                    path, line_no, f"expected {n_cols} columns, got {len(parts)}"
                )
            try:
                sample_id = int(parts[0])
                step = int(parts[1])
                t = float(parts[2])
                values = [float(v) for v in parts[3:]]
            except ValueError:
                raise CsvFormatError(path, line_no, f"bad numeric value in '{line}'") from None
            if not np.isfinite(t) or not all(np.isfinite(values)):
                raise CsvFormatError(path, line_no, "non-finite value")
            if not 0.0 <= t <= 1.0:
                raise CsvFormatError(path, line_no, f"t = {t} outside [0, 1]")
            entries = rows.setdefault(sample_id, [])
            if entries and step != entries[-1][0] + 1:
                raise CsvFormatError(
                    path, line_no, f"step {step} does not follow step {entries[-1][0]}"
                )
            if not entries and step != 0:
                raise CsvFormatError(path, line_no, f"sample {sample_id} must start at step 0")
            entries.append((step, t, values))
    if not rows:
        raise CsvFormatError(path, 2, "no data rows")
    sample_ids = sorted(rows)
    lengths = {len(rows[i]) for i in sample_ids}
    if len(lengths) != 1:
        raise CsvFormatError(path, 2, "samples have differing step counts")
    first = sample_ids[0]
    times = np.array([t for _, t, _ in rows[first]])
    coords = np.empty((len(times), len(sample_ids), group.n_coords))
    for j, sid in enumerate(sample_ids):
        for k, (_, t, values) in enumerate(rows[sid]):
            if t != times[k]:
                raise CsvFormatError(path, 2, f"sample {sid} disagrees on t at step {k}")
            coords[k, j] = values
    return np.asarray(sample_ids), times, coords


def write_report_json(path, report: dict) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_report_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def write_config_file(path, values: dict) -> None:
    """Resolved-run config as flat key=value lines, keys sorted."""
    with open(path, "w") as fh:
        for key in sorted(values):
            value = values[key]
            if value is None:
                continue
            if isinstance(value, float):
                value = _fmt(value)
            fh.write(f"{key}={value}\n")


def read_config_file(path) -> dict[str, str]:
    """Flat key=value parser; blank lines and # comments allowed."""
    values: dict[str, str] = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise CsvFormatError(path, line_no, f"expected key=value, got '{line}'")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not key:
                raise CsvFormatError(path, line_no, "empty key")
            if key in values:
                raise CsvFormatError(path, line_no, f"duplicate key '{key}'")
            values[key] = value
    return values
