"""Smoothness and fit metrics, plus the look-at interpolation baseline.

Normalized jerk is the time-integrated magnitude of the third finite
difference of position (or of the camera yaw/pitch pair for angular jerk)
divided by the horizon length. The look-at baseline derives per-stage camera
angles from a straight-line interpolation of look-at points, which is the
construction known to cause unwanted tilt between keyframes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import dynamics as dyn
from .dynamics import Grid
from .errors import ParameterError, SingularBearingError
from .qp import KeyframeList, Trajectory, unwrap_keyframe_yaws


@dataclass
class MetricReport:
    normalized_jerk: float  # m/s^3
    normalized_angular_jerk: float  # deg/s^3
    keyframe_position_errors: np.ndarray  # m, per keyframe
    keyframe_yaw_errors: np.ndarray  # rad
    keyframe_pitch_errors: np.ndarray  # rad
    max_interkeyframe_pitch_excursion: float  # rad outside the keyframe pitch envelope

    def as_dict(self) -> dict:
        return {
            "normalized_jerk": self.normalized_jerk,
            "normalized_angular_jerk": self.normalized_angular_jerk,
            "keyframe_position_errors": list(self.keyframe_position_errors),
            "keyframe_yaw_errors": list(self.keyframe_yaw_errors),
            "keyframe_pitch_errors": list(self.keyframe_pitch_errors),
            "max_interkeyframe_pitch_excursion": self.max_interkeyframe_pitch_excursion,
        }


@dataclass(frozen=True)
class LookAtKeyframe:
    position: np.ndarray  # 3-vector the camera should aim at
    time: float

    def __post_init__(self):
        object.__setattr__(self, "position", dyn._frozen_array(self.position, (3,)))


def _normalized_jerk_of(series: np.ndarray, dt: float, horizon: float) -> float:
    # series: (N+1, d); accumulate ||third difference|| / dt^3 * dt, divide by t_f
    if series.shape[0] < 4:
        raise ParameterError("normalized jerk needs at least 3 stages (4 grid points)")
    d3 = series[3:] - 3 * series[2:-1] + 3 * series[1:-2] - series[:-3]
    jerk_mags = np.linalg.norm(np.atleast_2d(d3.T).T, axis=1) / dt**3
    return float(jerk_mags.sum() * dt / horizon)


def normalized_jerk(traj: Trajectory) -> float:
    """Accumulated position jerk magnitude per unit of horizon, m/s^3."""
    return _normalized_jerk_of(traj.positions, traj.grid.dt, traj.grid.horizon)


def normalized_angular_jerk(traj: Trajectory) -> float:
    """Same metric on (camera yaw, camera pitch), reported in deg/s^3."""
    angles = np.column_stack([traj.camera_yaw, traj.camera_pitch])
    return float(
        np.degrees(_normalized_jerk_of(angles, traj.grid.dt, traj.grid.horizon))
    )


def pitch_envelope_excursion(
    traj: Trajectory, keyframes: KeyframeList
) -> float:
    """How far camera pitch leaves the [min, max] envelope of the keyframe
    pitches anywhere between the first and last keyframe stage."""
    eta = dyn.keyframe_index_map(keyframes.times, traj.grid.dt)
    lo, hi = float(keyframes.pitches.min()), float(keyframes.pitches.max())
    pitch = traj.camera_pitch[eta[0] : eta[-1] + 1]
    over = np.maximum(pitch - hi, 0.0)
    under = np.maximum(lo - pitch, 0.0)
    return float(np.maximum(over, under).max())


def keyframe_fit(traj: Trajectory, keyframes: KeyframeList) -> MetricReport:
    """Per-keyframe tracking errors plus the smoothness metrics."""
    eta = dyn.keyframe_index_map(keyframes.times, traj.grid.dt)
    yaws = unwrap_keyframe_yaws(keyframes.yaws)
    pos_err = np.array(
        [
            np.linalg.norm(traj.positions[idx] - k)
            for idx, k in zip(eta, keyframes.positions)
        ]
    )
    yaw_err = np.abs(traj.camera_yaw[eta] - yaws)
    pitch_err = np.abs(traj.camera_pitch[eta] - keyframes.pitches)
    return MetricReport(
        normalized_jerk=normalized_jerk(traj),
        normalized_angular_jerk=normalized_angular_jerk(traj),
        keyframe_position_errors=pos_err,
        keyframe_yaw_errors=yaw_err,
        keyframe_pitch_errors=pitch_err,
        max_interkeyframe_pitch_excursion=pitch_envelope_excursion(traj, keyframes),
    )


def lookat_baseline_orientation(
    camera_positions: np.ndarray,
    lookat_keyframes: list[LookAtKeyframe],
    grid: Grid,
    eps: float = 1e-9,
) -> np.ndarray:
    """Per-stage (yaw, pitch) from straight-line look-at interpolation.

    The look-at point moves on the segment between consecutive look-at
    keyframes (constant before the first and after the last); yaw is the
    unwrapped atan2 bearing, pitch the elevation of the camera-to-target ray.
    """
    camera_positions = np.asarray(camera_positions, dtype=float)
    if len(lookat_keyframes) < 1:
        raise ParameterError("need at least one look-at keyframe")
    times = np.array([k.time for k in lookat_keyframes])
    if np.any(np.diff(times) <= 0):
        raise ParameterError("look-at keyframe times must be strictly increasing")
    points = np.array([k.position for k in lookat_keyframes])
    stage_times = grid.times
    targets = np.column_stack(
        [np.interp(stage_times, times, points[:, d]) for d in range(3)]
    )
    rays = targets - camera_positions
    dists = np.linalg.norm(rays, axis=1)
    for i, d in enumerate(dists):
        if d < eps:
            raise SingularBearingError(i)
    yaw = np.unwrap(np.arctan2(rays[:, 1], rays[:, 0]))
    pitch = np.arctan2(rays[:, 2], np.hypot(rays[:, 0], rays[:, 1]))
    return np.column_stack([yaw, pitch])


@dataclass
class ComparisonReport:
    report_a: MetricReport
    report_b: MetricReport
    deltas: dict  # b minus a, scalar fields only

    def as_dict(self) -> dict:
        return {
            "a": self.report_a.as_dict(),
            "b": self.report_b.as_dict(),
            "deltas": self.deltas,
        }


def compare(traj_a: Trajectory, traj_b: Trajectory, keyframes: KeyframeList) -> ComparisonReport:
    """Side-by-side metric reports with deltas (B minus A)."""
    ra = keyframe_fit(traj_a, keyframes)
    rb = keyframe_fit(traj_b, keyframes)
    deltas = {
        "normalized_jerk": rb.normalized_jerk - ra.normalized_jerk,
        "normalized_angular_jerk": rb.normalized_angular_jerk - ra.normalized_angular_jerk,
        "max_position_error": float(
            rb.keyframe_position_errors.max() - ra.keyframe_position_errors.max()
        ),
        "max_interkeyframe_pitch_excursion": (
            rb.max_interkeyframe_pitch_excursion - ra.max_interkeyframe_pitch_excursion
        ),
    }
    return ComparisonReport(ra, rb, deltas)
