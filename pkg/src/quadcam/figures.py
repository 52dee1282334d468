"""Matplotlib figure rendering for the CLI report path.

Figures are written next to the delimited trajectory output: a path overview
(top view + altitude), camera angle traces, and input traces. The comparison
figure overlays two trajectories. Rendering is file-only (Agg backend).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .qp import KeyframeList, Trajectory


def _keyframe_scatter(ax, keyframes: KeyframeList, dims):
    ax.scatter(
        keyframes.positions[:, dims[0]],
        keyframes.positions[:, dims[1]],
        marker="x",
        color="tab:red",
        zorder=3,
        label="keyframes",
    )


def save_trajectory_figures(
    traj: Trajectory,
    keyframes: KeyframeList | None,
    out_dir: str | Path,
    stem: str,
) -> list[Path]:
    """Render path, camera-angle and input figures; returns written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    t = traj.grid.times
    written = []

    fig, (ax_xy, ax_z) = plt.subplots(1, 2, figsize=(10, 4))
    ax_xy.plot(traj.positions[:, 0], traj.positions[:, 1], label="path")
    if keyframes is not None:
        _keyframe_scatter(ax_xy, keyframes, (0, 1))
    ax_xy.set_xlabel("x [m]")
    ax_xy.set_ylabel("y [m]")
    ax_xy.set_title("top view")
    ax_xy.axis("equal")
    ax_xy.legend()
    ax_z.plot(t, traj.positions[:, 2])
    if keyframes is not None:
        ax_z.scatter(keyframes.times, keyframes.positions[:, 2], marker="x", color="tab:red")
    ax_z.set_xlabel("t [s]")
    ax_z.set_ylabel("z [m]")
    ax_z.set_title("altitude")
    fig.tight_layout()
    path = out_dir / f"{stem}_path.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, (ax_yaw, ax_pitch) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    ax_yaw.plot(t, np.degrees(traj.camera_yaw), label="camera yaw")
    ax_yaw.plot(t, np.degrees(traj.states[:, 3]), "--", label="body yaw")
    ax_yaw.plot(t, np.degrees(traj.states[:, 4]), ":", label="gimbal yaw")
    ax_yaw.set_ylabel("yaw [deg]")
    ax_yaw.legend()
    ax_pitch.plot(t, np.degrees(traj.camera_pitch), color="tab:green")
    ax_pitch.set_ylabel("pitch [deg]")
    ax_pitch.set_xlabel("t [s]")
    fig.tight_layout()
    path = out_dir / f"{stem}_angles.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, (ax_f, ax_r) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
    tu = t[:-1]
    for k, lbl in enumerate(["Fx", "Fy", "Fz"]):
        ax_f.plot(tu, traj.inputs[:, k], label=lbl)
    ax_f.plot(tu, traj.inputs[:, 3], "--", label="torque_z")
    ax_f.set_ylabel("force [N] / torque [Nm]")
    ax_f.legend(ncol=4)
    ax_r.plot(tu, traj.inputs[:, 4], label="gimbal yaw rate")
    ax_r.plot(tu, traj.inputs[:, 5], label="gimbal pitch rate")
    ax_r.set_ylabel("rate [rad/s]")
    ax_r.set_xlabel("t [s]")
    ax_r.legend()
    fig.tight_layout()
    path = out_dir / f"{stem}_inputs.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    return written


def save_comparison_figure(
    traj_a: Trajectory,
    traj_b: Trajectory,
    labels: tuple[str, str],
    out_dir: str | Path,
    stem: str,
) -> Path:
    """Overlay two trajectories: top view, altitude and camera yaw."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, axes = plt.subplots(1, 3, figsize=(14, 4))
    for traj, label, style in ((traj_a, labels[0], "-"), (traj_b, labels[1], "--")):
        t = traj.grid.times
        axes[0].plot(traj.positions[:, 0], traj.positions[:, 1], style, label=label)
        axes[1].plot(t, traj.positions[:, 2], style, label=label)
        axes[2].plot(t, np.degrees(traj.camera_yaw), style, label=label)
    axes[0].set_title("top view")
    axes[0].set_xlabel("x [m]")
    axes[0].set_ylabel("y [m]")
    axes[0].axis("equal")
    axes[1].set_title("altitude")
    axes[1].set_xlabel("t [s]")
    axes[1].set_ylabel("z [m]")
    axes[2].set_title("camera yaw")
    axes[2].set_xlabel("t [s]")
    axes[2].set_ylabel("yaw [deg]")
    for ax in axes:
        ax.legend()
    fig.tight_layout()
    path = out_dir / f"{stem}_compare.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
