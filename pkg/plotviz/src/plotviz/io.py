"""CSV loading against the terrasim file schemas.

plotviz consumes the simulator only through its documented CSV layouts:
trajectory files (one row per output sample, 24 named columns) and
estimate-trace files (t, w_hat, P_w, per-channel d_hat_*/innov_*, flag).
Columns are matched by name from the header line, never by position.
"""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

TRAJECTORY_COLUMNS = (
    "t", "X", "Y", "psi", "xdot", "ydot", "psidot",
    "z", "theta", "zdot", "thetadot",
    "Nf", "Nr", "Flf", "Fcf", "Flr", "Fcr", "hf_f", "hf_r",
    "ax", "ay", "az", "wy", "wz",
)

ESTIMATE_FIXED_COLUMNS = ("t", "w_hat", "P_w")


class SchemaError(Exception):
    """Input file does not match the expected column layout."""


def _read_named_csv(path) -> dict[str, np.ndarray]:
    path = Path(path)
    if not path.exists():
        raise SchemaError(f"input file not found: {path}")
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        rows = list(reader)
    if not rows:
        raise SchemaError(f"{path}: header only, no data rows")
    try:
        data = np.array(rows, dtype=float)
    except ValueError as exc:
        raise SchemaError(f"{path}: non-numeric data ({exc})") from None
    if data.shape[1] != len(header):
        raise SchemaError(
            f"{path}: row width {data.shape[1]} does not match header "
            f"width {len(header)}")
    return {name: data[:, i] for i, name in enumerate(header)}


def _require(columns: dict, names, path) -> None:
    missing = [n for n in names if n not in columns]
    if missing:
        raise SchemaError(
            f"{path}: missing required column(s) {', '.join(missing)}; "
            f"found {', '.join(columns)}")


def load_trajectory(path) -> dict[str, np.ndarray]:
    """Load a trajectory CSV, requiring the full 24-column layout."""
    columns = _read_named_csv(path)
    _require(columns, TRAJECTORY_COLUMNS, path)
    return columns


def load_estimate(path) -> dict[str, np.ndarray]:
    """Load an estimate-trace CSV.

    The channel set varies with the vehicle model, so only the fixed
    columns are required; d_hat_*/innov_* pairs are validated for
    consistency with each other.
    """
    columns = _read_named_csv(path)
    _require(columns, ESTIMATE_FIXED_COLUMNS, path)
    d_hat = {c[len("d_hat_"):] for c in columns if c.startswith("d_hat_")}
    innov = {c[len("innov_"):] for c in columns if c.startswith("innov_")}
    if d_hat != innov:
        raise SchemaError(
            f"{path}: mismatched channel columns (d_hat: {sorted(d_hat)}, "
            f"innov: {sorted(innov)})")
    if not d_hat:
        raise SchemaError(f"{path}: no d_hat_*/innov_* channel columns")
    return columns


def estimate_channels(columns: dict) -> list[str]:
    """Channel names of an estimate trace, in file order."""
    return [c[len("d_hat_"):] for c in columns if c.startswith("d_hat_")]
