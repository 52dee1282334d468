"""Scene file parsing, validation and serialization.

Scenes are YAML documents with a strict schema: unknown keys are rejected and
every invariant violation is reported with the offending field path. Omitted
sections fall back to the documented defaults (small camera drone, downward
gimbal, jerk-only smoothing weights, dt = 0.1 s).

Schema (all angles in radians):

    dt: 0.1
    quadrotor: {mass, inertia_z, gravity: [3], u_min: [4], u_max: [4]}
    gimbal: {yaw_range: [2], pitch_range: [2], rate_min: [2], rate_max: [2]}
    weights: {keyframe, orientation, derivative: [3], angular_derivative: [3]}
    keyframes:
      - {position: [x, y, z], yaw: 0.0, pitch: -0.5, time: 0.0}
    lookat_keyframes:           # optional
      - {position: [x, y, z], time: 0.0}
    time_opt:                   # optional
      {mode: fixed_end|free_end, w, h, max_iters, rel_tol, min_gap}
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import yaml

from .dynamics import (
    GimbalParams,
    QuadrotorParams,
    default_gimbal,
    default_quadrotor,
)
from .errors import ParameterError, SceneParseError, SceneValidationError
from .metrics import LookAtKeyframe
from .qp import KeyframeList, Weights
from .timeopt import TimeOptConfig


@dataclass(frozen=True)
class SceneSpec:
    quadrotor: QuadrotorParams
    gimbal: GimbalParams
    dt: float
    weights: Weights
    keyframes: KeyframeList
    lookat_keyframes: tuple[LookAtKeyframe, ...] | None = None
    time_opt: TimeOptConfig | None = None


def _reject_unknown(mapping: dict, allowed: set[str], path: str):
    for key in mapping:
        if key not in allowed:
            raise SceneValidationError(f"{path}.{key}" if path else str(key), "unknown field")


def _require(mapping: dict, key: str, path: str):
    if key not in mapping:
        raise SceneValidationError(f"{path}.{key}" if path else key, "missing required field")
    return mapping[key]


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SceneValidationError(path, f"expected a number, got {value!r}")
    return float(value)


def _vector(value, length: int, path: str) -> list[float]:
    if not isinstance(value, list) or len(value) != length:
        raise SceneValidationError(path, f"expected a list of {length} numbers")
    return [_number(v, f"{path}[{i}]") for i, v in enumerate(value)]


def _mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise SceneValidationError(path, "expected a mapping")
    return value


def _parse_quadrotor(doc, path: str) -> QuadrotorParams:
    doc = _mapping(doc, path)
    _reject_unknown(doc, {"mass", "inertia_z", "gravity", "u_min", "u_max"}, path)
    base = default_quadrotor()
    try:
        return QuadrotorParams(
            mass=_number(doc.get("mass", base.mass), f"{path}.mass"),
            inertia_z=_number(doc.get("inertia_z", base.inertia_z), f"{path}.inertia_z"),
            gravity=_vector(doc.get("gravity", list(base.gravity)), 3, f"{path}.gravity"),
            u_min=_vector(doc.get("u_min", list(base.u_min)), 4, f"{path}.u_min"),
            u_max=_vector(doc.get("u_max", list(base.u_max)), 4, f"{path}.u_max"),
        )
    except ParameterError as exc:
        raise SceneValidationError(path, str(exc)) from exc


def _parse_gimbal(doc, path: str) -> GimbalParams:
    doc = _mapping(doc, path)
    _reject_unknown(doc, {"yaw_range", "pitch_range", "rate_min", "rate_max"}, path)
    base = default_gimbal()
    try:
        return GimbalParams(
            yaw_range=tuple(_vector(doc.get("yaw_range", list(base.yaw_range)), 2, f"{path}.yaw_range")),
            pitch_range=tuple(
                _vector(doc.get("pitch_range", list(base.pitch_range)), 2, f"{path}.pitch_range")
            ),
            rate_min=_vector(doc.get("rate_min", list(base.rate_min)), 2, f"{path}.rate_min"),
            rate_max=_vector(doc.get("rate_max", list(base.rate_max)), 2, f"{path}.rate_max"),
        )
    except ParameterError as exc:
        raise SceneValidationError(path, str(exc)) from exc


def _parse_weights(doc, path: str) -> Weights:
    doc = _mapping(doc, path)
    _reject_unknown(doc, {"keyframe", "orientation", "derivative", "angular_derivative"}, path)
    base = Weights()
    try:
        return Weights(
            lam_k=_number(doc.get("keyframe", base.lam_k), f"{path}.keyframe"),
            lam_o=_number(doc.get("orientation", base.lam_o), f"{path}.orientation"),
            lam_d=_vector(doc.get("derivative", list(base.lam_d)), 3, f"{path}.derivative"),
            lam_dg=_vector(
                doc.get("angular_derivative", list(base.lam_dg)), 3, f"{path}.angular_derivative"
            ),
        )
    except ParameterError as exc:
        raise SceneValidationError(path, str(exc)) from exc


def _parse_keyframes(doc, gimbal: GimbalParams, dt: float, path: str) -> KeyframeList:
    if not isinstance(doc, list) or not doc:
        raise SceneValidationError(path, "expected a non-empty list of keyframes")
    positions, yaws, pitches, times = [], [], [], []
    for j, item in enumerate(doc):
        p = f"{path}[{j}]"
        item = _mapping(item, p)
        _reject_unknown(item, {"position", "yaw", "pitch", "time"}, p)
        positions.append(_vector(_require(item, "position", p), 3, f"{p}.position"))
        yaws.append(_number(item.get("yaw", 0.0), f"{p}.yaw"))
        pitches.append(_number(item.get("pitch", 0.0), f"{p}.pitch"))
        times.append(_number(_require(item, "time", p), f"{p}.time"))
    if times[0] != 0.0:
        raise SceneValidationError(f"{path}[0].time", "first keyframe time must be 0")
    for j in range(1, len(times)):
        if times[j] <= times[j - 1]:
            raise SceneValidationError(
                f"{path}[{j}].time", f"times must be strictly increasing (got {times[j]})"
            )
    lo, hi = gimbal.pitch_range
    for j, pitch in enumerate(pitches):
        if not lo <= pitch <= hi:
            raise SceneValidationError(
                f"{path}[{j}].pitch", f"outside gimbal pitch range [{lo}, {hi}]"
            )
    kf = KeyframeList(positions, yaws, pitches, times)
    # surface time collisions at parse time rather than deep in assembly
    from .dynamics import keyframe_index_map
    from .errors import KeyframeCollisionError

    try:
        keyframe_index_map(kf.times, dt)
    except KeyframeCollisionError as exc:
        raise SceneValidationError(
            f"{path}[{exc.index_b}].time",
            f"collides with keyframes[{exc.index_a}] at grid index {exc.grid_index} (dt={dt})",
        ) from exc
    return kf


def _parse_lookat(doc, path: str) -> tuple[LookAtKeyframe, ...]:
    if not isinstance(doc, list) or not doc:
        raise SceneValidationError(path, "expected a non-empty list of look-at keyframes")
    out = []
    prev_t = None
    for j, item in enumerate(doc):
        p = f"{path}[{j}]"
        item = _mapping(item, p)
        _reject_unknown(item, {"position", "time"}, p)
        t = _number(_require(item, "time", p), f"{p}.time")
        if prev_t is not None and t <= prev_t:
            raise SceneValidationError(f"{p}.time", "times must be strictly increasing")
        prev_t = t
        out.append(LookAtKeyframe(_vector(_require(item, "position", p), 3, f"{p}.position"), t))
    return tuple(out)


def _parse_time_opt(doc, path: str) -> TimeOptConfig:
    doc = _mapping(doc, path)
    _reject_unknown(doc, {"mode", "w", "h", "max_iters", "rel_tol", "min_gap"}, path)
    base = TimeOptConfig()
    mode = doc.get("mode", base.mode)
    if mode not in ("fixed_end", "free_end"):
        raise SceneValidationError(f"{path}.mode", f"must be fixed_end or free_end, got {mode!r}")
    max_iters = doc.get("max_iters", base.max_iters)
    if isinstance(max_iters, bool) or not isinstance(max_iters, int):
        raise SceneValidationError(f"{path}.max_iters", "expected an integer")
    try:
        return TimeOptConfig(
            w=_number(doc.get("w", 1.0), f"{path}.w"),
            h=_number(doc["h"], f"{path}.h") if "h" in doc else None,
            mode=mode,
            max_iters=max_iters,
            rel_tol=_number(doc.get("rel_tol", base.rel_tol), f"{path}.rel_tol"),
            min_gap=_number(doc["min_gap"], f"{path}.min_gap") if "min_gap" in doc else None,
        )
    except ParameterError as exc:
        raise SceneValidationError(path, str(exc)) from exc


def parse_scene(text: str) -> SceneSpec:
    """Parse and fully validate a YAML scene document."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        if mark is not None:
            raise SceneParseError(str(getattr(exc, "problem", exc)), mark.line + 1, mark.column + 1)
        raise SceneParseError(str(exc))
    if not isinstance(doc, dict):
        raise SceneValidationError("<root>", "scene document must be a mapping")
    _reject_unknown(
        doc,
        {"dt", "quadrotor", "gimbal", "weights", "keyframes", "lookat_keyframes", "time_opt"},
        "",
    )
    dt = _number(doc.get("dt", 0.1), "dt")
    if dt <= 0:
        raise SceneValidationError("dt", f"must be > 0, got {dt}")
    quad = _parse_quadrotor(doc.get("quadrotor", {}), "quadrotor")
    gimbal = _parse_gimbal(doc.get("gimbal", {}), "gimbal")
    weights = _parse_weights(doc.get("weights", {}), "weights")
    keyframes = _parse_keyframes(_require(doc, "keyframes", ""), gimbal, dt, "keyframes")
    lookat = _parse_lookat(doc["lookat_keyframes"], "lookat_keyframes") if "lookat_keyframes" in doc else None
    time_opt = _parse_time_opt(doc["time_opt"], "time_opt") if "time_opt" in doc else None
    return SceneSpec(
        quadrotor=quad,
        gimbal=gimbal,
        dt=dt,
        weights=weights,
        keyframes=keyframes,
        lookat_keyframes=lookat,
        time_opt=time_opt,
    )


def serialize_scene(scene: SceneSpec) -> str:
    """Inverse of parse_scene; parse(serialize(s)) == s field for field."""
    doc: dict = {
        "dt": scene.dt,
        "quadrotor": {
            "mass": scene.quadrotor.mass,
            "inertia_z": scene.quadrotor.inertia_z,
            "gravity": [float(v) for v in scene.quadrotor.gravity],
            "u_min": [float(v) for v in scene.quadrotor.u_min],
            "u_max": [float(v) for v in scene.quadrotor.u_max],
        },
        "gimbal": {
            "yaw_range": [float(v) for v in scene.gimbal.yaw_range],
            "pitch_range": [float(v) for v in scene.gimbal.pitch_range],
            "rate_min": [float(v) for v in scene.gimbal.rate_min],
            "rate_max": [float(v) for v in scene.gimbal.rate_max],
        },
        "weights": {
            "keyframe": scene.weights.lam_k,
            "orientation": scene.weights.lam_o,
            "derivative": [float(v) for v in scene.weights.lam_d],
            "angular_derivative": [float(v) for v in scene.weights.lam_dg],
        },
        "keyframes": [
            {
                "position": [float(v) for v in pos],
                "yaw": float(yaw),
                "pitch": float(pitch),
                "time": float(t),
            }
            for pos, yaw, pitch, t in zip(
                scene.keyframes.positions,
                scene.keyframes.yaws,
                scene.keyframes.pitches,
                scene.keyframes.times,
            )
        ],
    }
    if scene.lookat_keyframes is not None:
        doc["lookat_keyframes"] = [
            {"position": [float(v) for v in k.position], "time": float(k.time)}
            for k in scene.lookat_keyframes
        ]
    if scene.time_opt is not None:
        c = scene.time_opt
        entry = {"mode": c.mode, "w": c.w, "max_iters": c.max_iters, "rel_tol": c.rel_tol}
        if c.h is not None:
            entry["h"] = c.h
        if c.min_gap is not None:
            entry["min_gap"] = c.min_gap
        doc["time_opt"] = entry
    return yaml.safe_dump(doc, sort_keys=False)
