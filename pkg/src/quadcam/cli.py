"""Command-line surface: plan, time-opt, metrics, compare, baseline-lookat.

Exit codes: 0 success, 1 validation error, 2 solver failure. All diagnostics
go to stderr; result files (delimited tables, JSON reports, figures) land in
--out-dir (default: current directory).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import metrics as met
from . import timeopt
from .errors import (
    InfeasibleError,
    KeyframeCollisionError,
    ParameterError,
    QuadcamError,
    SceneParseError,
    SceneValidationError,
    ShapeError,
    SingularBearingError,
    SolverError,
)
from .qp import Weights, plan_trajectory
from .scene import SceneSpec, parse_scene
from .trajfile import read_trajectory, write_trajectory

VALIDATION_ERRORS = (
    SceneParseError,
    SceneValidationError,
    ParameterError,
    KeyframeCollisionError,
    ShapeError,
    SingularBearingError,
)
SOLVER_ERRORS = (SolverError, InfeasibleError)


def _load_scene(path: str, args) -> SceneSpec:
    scene = parse_scene(Path(path).read_text())
    if args.dt is not None or _has_weight_overrides(args):
        w = scene.weights
        weights = Weights(
            lam_k=args.lambda_k if args.lambda_k is not None else w.lam_k,
            lam_o=args.lambda_o if args.lambda_o is not None else w.lam_o,
            lam_d=args.lambda_d if args.lambda_d is not None else w.lam_d,
            lam_dg=args.lambda_dg if args.lambda_dg is not None else w.lam_dg,
        )
        scene = SceneSpec(
            quadrotor=scene.quadrotor,
            gimbal=scene.gimbal,
            dt=args.dt if args.dt is not None else scene.dt,
            weights=weights,
            keyframes=scene.keyframes,
            lookat_keyframes=scene.lookat_keyframes,
            time_opt=scene.time_opt,
        )
    return scene


def _has_weight_overrides(args) -> bool:
    return any(
        getattr(args, name) is not None
        for name in ("lambda_k", "lambda_o", "lambda_d", "lambda_dg")
    )


def _plan(scene: SceneSpec):
    return plan_trajectory(
        scene.keyframes, scene.quadrotor, scene.gimbal, scene.weights, dt=scene.dt
    )


def _print_metrics(label: str, report: met.MetricReport, out=None):
    out = out if out is not None else sys.stdout  # bind at call time, not import
    print(f"{label}:", file=out)
    print(f"  normalized jerk          {report.normalized_jerk:.6g} m/s^3", file=out)
    print(f"  normalized angular jerk  {report.normalized_angular_jerk:.6g} deg/s^3", file=out)
    print(
        f"  max keyframe pos error   {report.keyframe_position_errors.max():.6g} m",
        file=out,
    )
    print(f"  max keyframe yaw error   {report.keyframe_yaw_errors.max():.6g} rad", file=out)
    print(f"  max keyframe pitch error {report.keyframe_pitch_errors.max():.6g} rad", file=out)
    print(
        f"  pitch envelope excursion {report.max_interkeyframe_pitch_excursion:.6g} rad",
        file=out,
    )


def cmd_plan(args) -> int:
    scene = _load_scene(args.scene, args)
    traj, report = _plan(scene)
    fit = met.keyframe_fit(traj, scene.keyframes)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.scene).stem
    traj_path = out_dir / f"{stem}_trajectory.csv"
    write_trajectory(traj, report, traj_path, metrics=fit.as_dict())
    print(f"wrote {traj_path}")
    if not args.no_figures:
        from .figures import save_trajectory_figures

        for p in save_trajectory_figures(traj, scene.keyframes, out_dir, stem):
            print(f"wrote {p}")
    _print_metrics("plan", fit)
    print(f"solve: status={report.status} iterations={report.iterations} "
          f"objective={report.objective:.6g} wall_time={report.wall_time:.3f}s")
    return 0


def cmd_time_opt(args) -> int:
    scene = _load_scene(args.scene, args)
    config = scene.time_opt or timeopt.TimeOptConfig()
    overrides = {}
    if args.mode is not None:
        overrides["mode"] = args.mode.replace("-", "_")
    if args.w is not None:
        overrides["w"] = args.w
    if args.h is not None:
        overrides["h"] = args.h
    if args.max_iters is not None:
        overrides["max_iters"] = args.max_iters
    if overrides:
        config = timeopt.TimeOptConfig(
            w=overrides.get("w", config.w if config.mode == "free_end" else 1.0),
            h=overrides.get("h", config.h),
            mode=overrides.get("mode", config.mode),
            max_iters=overrides.get("max_iters", config.max_iters),
            rel_tol=config.rel_tol,
            min_gap=config.min_gap,
        )
    context = timeopt.PlanningContext(
        keyframes=scene.keyframes,
        quad=scene.quadrotor,
        gimbal=scene.gimbal,
        weights=scene.weights,
        dt=scene.dt,
    )
    traj_fixed, report_fixed = _plan(scene)
    optimized, trace = timeopt.optimize_times(scene.keyframes, config, context)
    traj_opt, report_opt = plan_trajectory(
        optimized, scene.quadrotor, scene.gimbal, scene.weights, dt=scene.dt
    )

    fit_fixed = met.keyframe_fit(traj_fixed, scene.keyframes)
    fit_opt = met.keyframe_fit(traj_opt, optimized)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.scene).stem
    p_fixed = out_dir / f"{stem}_fixed_trajectory.csv"
    p_opt = out_dir / f"{stem}_timeopt_trajectory.csv"
    write_trajectory(traj_fixed, report_fixed, p_fixed, metrics=fit_fixed.as_dict())
    write_trajectory(traj_opt, report_opt, p_opt, metrics=fit_opt.as_dict())

    comparison = {
        "initial_times": [float(t) for t in scene.keyframes.times],
        "optimized_times": [float(t) for t in optimized.times],
        "fixed": fit_fixed.as_dict(),
        "time_optimized": fit_opt.as_dict(),
        "deltas": {
            "normalized_jerk": fit_opt.normalized_jerk - fit_fixed.normalized_jerk,
            "normalized_angular_jerk": (
                fit_opt.normalized_angular_jerk - fit_fixed.normalized_angular_jerk
            ),
        },
        "trace": {
            "scores": trace.scores,
            "gradient_norms": trace.gradient_norms,
            "no_progress": trace.no_progress,
        },
    }
    cmp_path = out_dir / f"{stem}_timeopt_comparison.json"
    cmp_path.write_text(json.dumps(comparison, indent=2) + "\n")
    for p in (p_fixed, p_opt, cmp_path):
        print(f"wrote {p}")
    if not args.no_figures:
        from .figures import save_comparison_figure

        p = save_comparison_figure(
            traj_fixed, traj_opt, ("fixed timing", "time-optimized"), out_dir, stem
        )
        print(f"wrote {p}")
    _print_metrics("fixed timing", fit_fixed)
    _print_metrics("time-optimized", fit_opt)
    print(f"optimized times: {[round(float(t), 6) for t in optimized.times]}")
    return 0


def cmd_metrics(args) -> int:
    scene = _load_scene(args.scene, args)
    traj = read_trajectory(args.trajectory)
    fit = met.keyframe_fit(traj, scene.keyframes)
    _print_metrics(Path(args.trajectory).name, fit)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{Path(args.trajectory).stem}_metrics.json"
    json_path.write_text(json.dumps(fit.as_dict(), indent=2) + "\n")
    print(f"wrote {json_path}")
    return 0


def cmd_compare(args) -> int:
    scene = _load_scene(args.scene, args)
    traj_a = read_trajectory(args.trajectory_a)
    traj_b = read_trajectory(args.trajectory_b)
    comparison = met.compare(traj_a, traj_b, scene.keyframes)
    _print_metrics(f"A: {Path(args.trajectory_a).name}", comparison.report_a)
    _print_metrics(f"B: {Path(args.trajectory_b).name}", comparison.report_b)
    print("deltas (B - A):")
    for key, val in comparison.deltas.items():
        print(f"  {key:32s} {val:+.6g}")
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / "comparison.json"
    json_path.write_text(json.dumps(comparison.as_dict(), indent=2) + "\n")
    print(f"wrote {json_path}")
    if not args.no_figures:
        from .figures import save_comparison_figure

        p = save_comparison_figure(traj_a, traj_b, ("A", "B"), out_dir, "comparison")
        print(f"wrote {p}")
    return 0


def cmd_baseline_lookat(args) -> int:
    scene = _load_scene(args.scene, args)
    if scene.lookat_keyframes is None:
        raise SceneValidationError("lookat_keyframes", "required for baseline-lookat")
    traj, _ = _plan(scene)
    angles = met.lookat_baseline_orientation(
        traj.positions, list(scene.lookat_keyframes), traj.grid
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = Path(args.scene).stem
    path = out_dir / f"{stem}_lookat_baseline.csv"
    lines = ["index,t,yaw,pitch"]
    for i, (yaw, pitch) in enumerate(angles):
        lines.append(f"{i},{i * traj.grid.dt:.9g},{yaw:.9g},{pitch:.9g}")
    path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")
    print(
        f"baseline pitch range: [{np.degrees(angles[:, 1].min()):.2f}, "
        f"{np.degrees(angles[:, 1].max()):.2f}] deg over {angles.shape[0]} stages"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadcam",
        description="Quadrotor camera trajectory planner (sparse QP + keyframe time optimization)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, scene=True):
        if scene:
            p.add_argument("scene", help="scene YAML file")
        p.add_argument("--out-dir", default=".", help="output directory")
        p.add_argument("--dt", type=float, default=None, help="override grid step [s]")
        p.add_argument("--lambda-k", type=float, default=None, help="keyframe weight override")
        p.add_argument("--lambda-o", type=float, default=None, help="orientation weight override")
        p.add_argument(
            "--lambda-d", type=float, nargs=3, default=None, help="position derivative weights"
        )
        p.add_argument(
            "--lambda-dg", type=float, nargs=3, default=None, help="angle derivative weights"
        )
        p.add_argument("--no-figures", action="store_true", help="skip figure rendering")

    p = sub.add_parser("plan", help="plan a trajectory for a scene")
    add_common(p)
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("time-opt", help="optimize keyframe times and compare")
    add_common(p)
    p.add_argument("--mode", choices=["free-end", "fixed-end"], default=None)
    p.add_argument("--w", type=float, default=None, help="per-step horizon weight")
    p.add_argument("--h", type=float, default=None, help="finite-difference step [s]")
    p.add_argument("--max-iters", type=int, default=None)
    p.set_defaults(func=cmd_time_opt)

    p = sub.add_parser("metrics", help="metrics for a trajectory file")
    add_common(p)
    p.add_argument("trajectory", help="trajectory CSV file")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("compare", help="compare two trajectory files")
    add_common(p)
    p.add_argument("trajectory_a")
    p.add_argument("trajectory_b")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("baseline-lookat", help="look-at interpolation baseline angles")
    add_common(p)
    p.set_defaults(func=cmd_baseline_lookat)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SOLVER_ERRORS as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2
    except QuadcamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
