"""Quadrotor camera trajectory planning: sparse QP keyframe planning with
gimbal orientation tracking, plus keyframe time optimization for globally
smooth camera motion."""

from .dynamics import (
    DiscreteModel,
    GimbalParams,
    Grid,
    QuadrotorParams,
    build_discrete_model,
    default_gimbal,
    default_quadrotor,
    keyframe_index_map,
    propagate,
)
from .metrics import (
    LookAtKeyframe,
    MetricReport,
    compare,
    keyframe_fit,
    lookat_baseline_orientation,
    normalized_angular_jerk,
    normalized_jerk,
)
from .qp import (
    KeyframeList,
    QpProblem,
    SolveReport,
    SolverSettings,
    Trajectory,
    Weights,
    assemble_qp,
    plan_trajectory,
    solve_qp,
)
from .scene import SceneSpec, parse_scene, serialize_scene
from .timeopt import (
    PlanningContext,
    TimeOptConfig,
    TimeOptTrace,
    numerical_gradient,
    objective_f,
    optimize_times,
)
from .trajfile import read_trajectory, write_trajectory

__version__ = "0.1.0"
