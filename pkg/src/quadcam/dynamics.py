"""Linear quadrotor + gimbal model and its exact zero-order-hold discretization.

State layout (10):  [rx, ry, rz, yaw_q, yaw_g, pitch_g, vx, vy, vz, yawrate_q]
Input layout (6):   [Fx, Fy, Fz, torque_z, rate_yaw_g, rate_pitch_g]

The body is a rigid double integrator in position and yaw (pitch/roll fixed);
the gimbal axes are single integrators driven by rate inputs. Body and gimbal
dynamics are decoupled; they only interact through the orientation cost.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import KeyframeCollisionError, ParameterError, ShapeError

NX = 10
NU = 6

# state indices
POS = slice(0, 3)
YAW_Q = 3
YAW_G = 4
PITCH_G = 5
VEL = slice(6, 9)
YAWRATE_Q = 9
ANGLE_IDX = (YAW_Q, YAW_G, PITCH_G)  # entries carrying smoothed angles

# input indices
FORCE = slice(0, 3)
TORQUE_Z = 3
RATE_G = slice(4, 6)


def _frozen_array(value, shape) -> np.ndarray:
    arr = np.array(value, dtype=float).reshape(shape)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class QuadrotorParams:
    """Rigid-body parameters and input (force/torque) box bounds."""

    mass: float
    inertia_z: float
    gravity: np.ndarray
    u_min: np.ndarray  # [Fx, Fy, Fz, torque_z] lower bounds
    u_max: np.ndarray

    def __post_init__(self):
        if self.mass <= 0:
            raise ParameterError(f"mass must be > 0, got {self.mass}")
        if self.inertia_z <= 0:
            raise ParameterError(f"inertia_z must be > 0, got {self.inertia_z}")
        object.__setattr__(self, "gravity", _frozen_array(self.gravity, (3,)))
        object.__setattr__(self, "u_min", _frozen_array(self.u_min, (4,)))
        object.__setattr__(self, "u_max", _frozen_array(self.u_max, (4,)))
        if not np.all(self.u_min < self.u_max):
            raise ParameterError("u_min must be componentwise below u_max")
        hover = self.hover_input()
        if not (np.all(self.u_min < hover) and np.all(hover < self.u_max)):
            raise ParameterError(
                "hover input (force = -mass*gravity, zero torque) must lie "
                "strictly inside [u_min, u_max]"
            )

    def hover_input(self) -> np.ndarray:
        """Force/torque that exactly cancels gravity."""
        return np.concatenate([-self.mass * self.gravity, [0.0]])


@dataclass(frozen=True)
class GimbalParams:
    """Gimbal angle ranges and rate bounds (yaw, pitch)."""

    yaw_range: tuple[float, float]
    pitch_range: tuple[float, float]
    rate_min: np.ndarray
    rate_max: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "yaw_range", (float(self.yaw_range[0]), float(self.yaw_range[1])))
        object.__setattr__(
            self, "pitch_range", (float(self.pitch_range[0]), float(self.pitch_range[1]))
        )
        object.__setattr__(self, "rate_min", _frozen_array(self.rate_min, (2,)))
        object.__setattr__(self, "rate_max", _frozen_array(self.rate_max, (2,)))
        for name, (lo, hi) in (("yaw_range", self.yaw_range), ("pitch_range", self.pitch_range)):
            if not lo < hi:
                raise ParameterError(f"{name} must be a non-empty interval, got [{lo}, {hi}]")
        if not (np.all(self.rate_min < 0) and np.all(self.rate_max > 0)):
            raise ParameterError("gimbal rate bounds must straddle zero (rate_min < 0 < rate_max)")

    @property
    def angle_min(self) -> np.ndarray:
        return np.array([self.yaw_range[0], self.pitch_range[0]])

    @property
    def angle_max(self) -> np.ndarray:
        return np.array([self.yaw_range[1], self.pitch_range[1]])


def default_quadrotor() -> QuadrotorParams:
    """Small camera-drone defaults (hover thrust well inside the force box)."""
    return QuadrotorParams(
        mass=0.5,
        inertia_z=0.005,
        gravity=[0.0, 0.0, -9.81],
        u_min=[-2.0, -2.0, 0.0, -0.1],
        u_max=[2.0, 2.0, 9.8, 0.1],
    )


def default_gimbal() -> GimbalParams:
    """Downward-facing 2-axis camera gimbal convention."""
    return GimbalParams(
        yaw_range=(-np.pi, np.pi),
        pitch_range=(-np.pi / 2, 0.0),
        rate_min=[-np.pi, -np.pi],
        rate_max=[np.pi, np.pi],
    )


@dataclass(frozen=True)
class DiscreteModel:
    """Exact ZOH discretization x_{i+1} = A_d x_i + B_d u_i + c_d."""

    A_d: np.ndarray
    B_d: np.ndarray
    c_d: np.ndarray
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "A_d", _frozen_array(self.A_d, (NX, NX)))
        object.__setattr__(self, "B_d", _frozen_array(self.B_d, (NX, NU)))
        object.__setattr__(self, "c_d", _frozen_array(self.c_d, (NX,)))
        if self.dt <= 0:
            raise ParameterError(f"dt must be > 0, got {self.dt}")

    def step(self, x: np.ndarray, u: np.ndarray) -> np.ndarray:
        return self.A_d @ x + self.B_d @ u + self.c_d


@dataclass(frozen=True)
class Grid:
    """Uniform time grid: states at 0..n_stages, inputs at 0..n_stages-1."""

    dt: float
    n_stages: int

    def __post_init__(self):
        if self.dt <= 0:
            raise ParameterError(f"grid dt must be > 0, got {self.dt}")
        if self.n_stages < 1:
            raise ParameterError(f"grid needs at least 1 stage, got {self.n_stages}")

    @property
    def horizon(self) -> float:
        return self.n_stages * self.dt

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_stages + 1) * self.dt


def build_discrete_model(
    quad: QuadrotorParams, gimbal: GimbalParams, dt: float
) -> DiscreteModel:
    """Closed-form ZOH discretization of the continuous rigid-body + gimbal model.

    Position/yaw blocks are double integrators (acceleration = F/m + g,
    yaw acceleration = torque/I); gimbal angles are single integrators on
    their rate inputs. Exact for inputs held constant over one step.
    """
    if dt <= 0:
        raise ParameterError(f"dt must be > 0, got {dt}")
    m, iz = quad.mass, quad.inertia_z

    A = np.eye(NX)
    A[POS, VEL] = dt * np.eye(3)
    A[YAW_Q, YAWRATE_Q] = dt

    B = np.zeros((NX, NU))
    B[POS, FORCE] = (dt * dt / (2 * m)) * np.eye(3)
    B[VEL, FORCE] = (dt / m) * np.eye(3)
    B[YAW_Q, TORQUE_Z] = dt * dt / (2 * iz)
    B[YAWRATE_Q, TORQUE_Z] = dt / iz
    B[YAW_G, 4] = dt
    B[PITCH_G, 5] = dt

    c = np.zeros(NX)
    c[POS] = (dt * dt / 2) * quad.gravity
    c[VEL] = dt * quad.gravity

    return DiscreteModel(A_d=A, B_d=B, c_d=c, dt=dt)


def propagate(model: DiscreteModel, x0: np.ndarray, inputs: np.ndarray) -> np.ndarray:
    """Roll the recurrence forward; returns all N+1 states as rows."""
    x0 = np.asarray(x0, dtype=float)
    inputs = np.asarray(inputs, dtype=float)
    if x0.shape != (NX,):
        raise ShapeError(f"initial state must have shape ({NX},), got {x0.shape}")
    if inputs.ndim != 2 or inputs.shape[1] != NU:
        raise ShapeError(f"inputs must have shape (N, {NU}), got {inputs.shape}")
    n = inputs.shape[0]
    states = np.empty((n + 1, NX))
    states[0] = x0
    for i in range(n):
        states[i + 1] = model.step(states[i], inputs[i])
    return states


def keyframe_index_map(times, grid_dt: float) -> list[int]:
    """Map keyframe times to grid indices by round-half-up; reject collisions."""
    times = np.asarray(times, dtype=float)
    if times.size == 0:
        raise ParameterError("need at least one keyframe time")
    if times[0] != 0.0:
        raise ParameterError(f"first keyframe time must be 0, got {times[0]}")
    if np.any(np.diff(times) <= 0):
        raise ParameterError("keyframe times must be strictly increasing")
    indices = [int(np.floor(t / grid_dt + 0.5)) for t in times]
    for j in range(1, len(indices)):
        if indices[j] <= indices[j - 1]:
            raise KeyframeCollisionError(j - 1, j, indices[j])
    return indices
