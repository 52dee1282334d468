"""Delimited trajectory table output and the sidecar solve report.

One row per grid point with 18 comma-separated columns; input columns are
blank on the final row (inputs live on stage intervals). Numbers use 9
significant digits, so identical trajectories serialize to identical bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .dynamics import NU, NX, Grid
from .errors import ParameterError
from .qp import SolveReport, Trajectory

COLUMNS = [
    "index",
    "t",
    "x",
    "y",
    "z",
    "yaw_q",
    "yaw_g",
    "pitch_g",
    "vx",
    "vy",
    "vz",
    "yawrate_q",
    "fx",
    "fy",
    "fz",
    "torque_z",
    "rate_yaw_g",
    "rate_pitch_g",
]


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def write_trajectory(
    traj: Trajectory,
    report: SolveReport | None,
    path: str | Path,
    metrics: dict | None = None,
) -> Path:
    """Write the trajectory table to `path` and a JSON report sidecar next to it."""
    path = Path(path)
    lines = [",".join(COLUMNS)]
    n = traj.grid.n_stages
    for i in range(n + 1):
        t = i * traj.grid.dt
        fields = [str(i), _fmt(t)] + [_fmt(v) for v in traj.states[i]]
        if i < n:
            fields += [_fmt(v) for v in traj.inputs[i]]
        else:
            fields += [""] * NU
        lines.append(",".join(fields))
    path.write_text("\n".join(lines) + "\n")

    sidecar = {}
    if report is not None:
        sidecar["solve"] = {
            "objective": report.objective,
            "kkt_residuals": report.kkt_residuals,
            "iterations": report.iterations,
            "wall_time": report.wall_time,
            "status": report.status,
        }
    if metrics is not None:
        sidecar["metrics"] = metrics
    if sidecar:
        report_path(path).write_text(json.dumps(sidecar, indent=2) + "\n")
    return path


def report_path(traj_path: str | Path) -> Path:
    traj_path = Path(traj_path)
    return traj_path.with_name(traj_path.stem + ".report.json")


def read_trajectory(path: str | Path) -> Trajectory:
    """Read a trajectory table back; the grid dt is inferred from the t column."""
    text = Path(path).read_text().strip().splitlines()
    if not text or text[0].split(",") != COLUMNS:
        raise ParameterError(f"{path}: missing or unexpected header row")
    rows = [line.split(",") for line in text[1:]]
    if len(rows) < 2:
        raise ParameterError(f"{path}: need at least two grid points")
    for i, row in enumerate(rows):
        if len(row) != len(COLUMNS):
            raise ParameterError(f"{path}: row {i} has {len(row)} columns, expected {len(COLUMNS)}")
    times = np.array([float(r[1]) for r in rows])
    dt = float(times[1] - times[0])
    states = np.array([[float(v) for v in r[2 : 2 + NX]] for r in rows])
    inputs = np.array([[float(v) for v in r[2 + NX :]] for r in rows[:-1]])
    if inputs.size == 0:
        inputs = inputs.reshape(0, NU)
    grid = Grid(dt=dt, n_stages=len(rows) - 1)
    return Trajectory(grid=grid, states=states, inputs=inputs)
