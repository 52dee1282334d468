"""Keyframe time optimization by gradient descent on the QP optimum.

Minimizes score(t) = f(t) + N*w over the free keyframe times, where f(t) is
the optimal objective of the trajectory QP re-solved for the candidate times
and N = round(t_M / dt) is the implied number of grid steps. The per-step
weight w guards against degenerate, arbitrarily long trajectories. In
fixed_end mode the last time is held fixed and w is zero, so the score is
f(t) alone.

The objective is piecewise constant below one grid step (keyframe times are
snapped to grid indices), so gradients use finite differences with step
h >= dt, and the line search accepts any strict decrease.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import GimbalParams, QuadrotorParams
from .errors import ParameterError
from .qp import KeyframeList, SolverSettings, Weights, plan_trajectory

FREE_END = "free_end"
FIXED_END = "fixed_end"


@dataclass(frozen=True)
class TimeOptConfig:
    w: float = 1.0
    h: float | None = None  # finite-difference step; defaults to grid dt
    mode: str = FIXED_END
    max_iters: int = 50
    rel_tol: float = 1e-4
    min_gap: float | None = None  # defaults to grid dt

    def __post_init__(self):
        if self.mode not in (FREE_END, FIXED_END):
            raise ParameterError(f"mode must be '{FREE_END}' or '{FIXED_END}', got {self.mode!r}")
        if self.mode == FIXED_END:
            object.__setattr__(self, "w", 0.0)
        elif self.w <= 0:
            raise ParameterError("free_end mode requires w > 0 (degenerate-solution guard)")
        if self.max_iters < 1:
            raise ParameterError("max_iters must be >= 1")


@dataclass
class TimeOptTrace:
    times: list = field(default_factory=list)
    scores: list = field(default_factory=list)
    step_lengths: list = field(default_factory=list)
    gradient_norms: list = field(default_factory=list)
    no_progress: bool = False

    def record(self, t: np.ndarray, score: float, step: float, gnorm: float):
        self.times.append(np.array(t))
        self.scores.append(float(score))
        self.step_lengths.append(float(step))
        self.gradient_norms.append(float(gnorm))


@dataclass(frozen=True)
class PlanningContext:
    """Everything needed to re-solve the trajectory QP for candidate times."""

    keyframes: KeyframeList
    quad: QuadrotorParams
    gimbal: GimbalParams
    weights: Weights
    dt: float
    settings: SolverSettings = field(default_factory=SolverSettings)


def round_to_grid(times: np.ndarray, dt: float) -> np.ndarray:
    out = np.round(np.asarray(times, dtype=float) / dt) * dt
    out[0] = 0.0
    return out


def objective_f(times, context: PlanningContext) -> float:
    """Optimal QP objective for the given keyframe times (f(t) alone, no N*w)."""
    kf = context.keyframes.with_times(times)
    _, report = plan_trajectory(
        kf,
        context.quad,
        context.gimbal,
        context.weights,
        dt=context.dt,
        settings=context.settings,
    )
    return report.objective


def step_count(times, dt: float) -> int:
    return max(1, int(np.floor(float(times[-1]) / dt + 0.5)))


def _score(times, context: PlanningContext, w: float, cache: dict) -> float:
    key = tuple(np.round(np.asarray(times) / context.dt).astype(int))
    if key not in cache:
        cache[key] = objective_f(times, context) + step_count(times, context.dt) * w
    return cache[key]


def _free_indices(m: int, mode: str) -> list[int]:
    last = m if mode == FREE_END else m - 1
    return list(range(1, last))


def numerical_gradient(
    times,
    h: float,
    context: PlanningContext,
    mode: str = FIXED_END,
    w: float = 0.0,
    min_gap: float | None = None,
    cache: dict | None = None,
) -> np.ndarray:
    """Forward-difference gradient of the score over the free keyframe times.

    A perturbation that would break the ordering constraint (closer than
    min_gap to the next time) is reflected to a backward difference; if both
    directions are blocked the component is zero.
    """
    times = round_to_grid(np.asarray(times, dtype=float), context.dt)
    if h < context.dt:
        raise ParameterError(f"finite-difference step h={h} must be >= dt={context.dt}")
    min_gap = context.dt if min_gap is None else min_gap
    cache = {} if cache is None else cache
    free = _free_indices(times.size, mode)
    base = _score(times, context, w, cache)
    grad = np.zeros(times.size)
    for i in free:
        upper = times[i + 1] - min_gap if i + 1 < times.size else np.inf
        if times[i] + h <= upper + 1e-12:
            tp = times.copy()
            tp[i] += h
            grad[i] = (_score(tp, context, w, cache) - base) / h
        elif times[i] - h >= times[i - 1] + min_gap - 1e-12:
            tm = times.copy()
            tm[i] -= h
            grad[i] = (base - _score(tm, context, w, cache)) / h
        # else: pinched between neighbours, leave the component at zero
    return grad


def _project(times: np.ndarray, free: list[int], min_gap: float, dt: float) -> np.ndarray:
    """Clamp free times left-to-right into [prev + min_gap, next - min_gap],
    snap to the grid, and restore strict ordering after rounding."""
    t = times.copy()
    gap_steps = max(1, int(np.ceil(min_gap / dt - 1e-9)))
    for i in free:
        lo = t[i - 1] + min_gap
        hi = t[i + 1] - min_gap if i + 1 < t.size else np.inf
        t[i] = np.clip(t[i], lo, max(lo, hi))
    t = round_to_grid(t, dt)
    for i in range(1, t.size):
        if t[i] < t[i - 1] + min_gap - 1e-9:
            t[i] = t[i - 1] + gap_steps * dt
    return t


def optimize_times(
    keyframes: KeyframeList,
    config: TimeOptConfig,
    context: PlanningContext,
) -> tuple[KeyframeList, TimeOptTrace]:
    """Backtracking gradient descent on score(t) subject to strict time ordering."""
    dt = context.dt
    h = dt if config.h is None else config.h
    min_gap = dt if config.min_gap is None else config.min_gap
    if h < dt:
        raise ParameterError(f"h={h} must be >= dt={dt}")
    if min_gap < dt:
        raise ParameterError(f"min_gap={min_gap} must be >= dt={dt}")
    trace = TimeOptTrace()
    cache: dict = {}
    times = round_to_grid(keyframes.times, dt)
    free = _free_indices(times.size, config.mode)
    score = _score(times, context, config.w, cache)
    trace.record(times, score, 0.0, np.nan)

    if not free:
        trace.no_progress = True
        return keyframes.with_times(times), trace

    for it in range(config.max_iters):
        grad = numerical_gradient(
            times, h, context, config.mode, config.w, min_gap, cache
        )
        gnorm = float(np.linalg.norm(grad))
        if gnorm < 1e-6:
            break
        direction = -grad / gnorm
        # initial step moves the steepest coordinate a few grid cells
        step = 8 * dt / np.abs(direction[free]).max()
        accepted = False
        for _ in range(21):
            candidate = _project(times + step * direction, free, min_gap, dt)
            if not np.array_equal(candidate, times):
                cand_score = _score(candidate, context, config.w, cache)
                if cand_score < score:
                    accepted = True
                    break
            step *= 0.5
        if not accepted:
            if it == 0:
                trace.no_progress = True
            break
        improvement = score - cand_score
        times, score = candidate, cand_score
        trace.record(times, score, step, gnorm)
        if improvement < config.rel_tol * max(1.0, abs(score)):
            break

    return keyframes.with_times(times), trace
