"""Sparse QP assembly and direct solve for keyframe trajectory planning.

Decision vector layout: X = [x_0, ..., x_N, u_0, ..., u_{N-1}] with the
state/input orderings of :mod:`quadcam.dynamics`. The objective is a sum of
squares (keyframe position tracking, finite-difference derivative penalties,
camera orientation tracking), the equalities are the dynamics recurrence plus
the pinned initial state, and the inequalities are input and gimbal-angle box
bounds. Keyframes are soft; only x_0 is a hard constraint.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import dynamics as dyn
from .dynamics import (
    NU,
    NX,
    PITCH_G,
    POS,
    YAW_G,
    YAW_Q,
    DiscreteModel,
    GimbalParams,
    Grid,
    QuadrotorParams,
)
from .errors import InfeasibleError, ParameterError, ShapeError, SolverError


@dataclass(frozen=True)
class KeyframeList:
    """Timed camera keyframes: positions, desired camera yaw/pitch, times."""

    positions: np.ndarray  # (M, 3)
    yaws: np.ndarray  # (M,)
    pitches: np.ndarray  # (M,)
    times: np.ndarray  # (M,)

    def __post_init__(self):
        m = np.atleast_2d(np.asarray(self.positions, dtype=float)).shape[0]
        object.__setattr__(self, "positions", dyn._frozen_array(self.positions, (m, 3)))
        object.__setattr__(self, "yaws", dyn._frozen_array(self.yaws, (m,)))
        object.__setattr__(self, "pitches", dyn._frozen_array(self.pitches, (m,)))
        object.__setattr__(self, "times", dyn._frozen_array(self.times, (m,)))
        if m < 1:
            raise ParameterError("need at least one keyframe")
        if self.times[0] != 0.0:
            raise ParameterError(f"first keyframe time must be 0, got {self.times[0]}")
        if np.any(np.diff(self.times) <= 0):
            raise ParameterError("keyframe times must be strictly increasing")

    @property
    def count(self) -> int:
        return self.times.shape[0]

    def check_pitch_range(self, gimbal: GimbalParams) -> None:
        lo, hi = gimbal.pitch_range
        for j, p in enumerate(self.pitches):
            if not lo <= p <= hi:
                raise ParameterError(
                    f"keyframe {j} desired pitch {p} outside gimbal range [{lo}, {hi}]"
                )

    def with_times(self, times) -> "KeyframeList":
        return KeyframeList(self.positions, self.yaws, self.pitches, times)


@dataclass(frozen=True)
class Weights:
    """Cost weights: keyframe tracking, orientation tracking, and derivative
    penalties of orders 1..3 for position (lam_d) and angles (lam_dg)."""

    lam_k: float = 1e4
    lam_o: float = 1e4
    lam_d: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    lam_dg: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))

    def __post_init__(self):
        object.__setattr__(self, "lam_d", dyn._frozen_array(self.lam_d, (3,)))
        object.__setattr__(self, "lam_dg", dyn._frozen_array(self.lam_dg, (3,)))
        if self.lam_k < 0 or self.lam_o < 0 or np.any(self.lam_d < 0) or np.any(self.lam_dg < 0):
            raise ParameterError("weights must be non-negative")
        if not np.any(self.lam_d > 0):
            raise ParameterError("at least one position-derivative weight must be positive")
        if not np.any(self.lam_dg > 0):
            raise ParameterError("at least one angle-derivative weight must be positive")


@dataclass(frozen=True)
class QuadCost:
    """Quadratic cost 0.5 x'Hx + f'x + const with sparse H."""

    H: sp.csc_matrix
    f: np.ndarray
    const: float = 0.0

    def value(self, x: np.ndarray) -> float:
        return 0.5 * float(x @ (self.H @ x)) + float(self.f @ x) + self.const

    def __add__(self, other: "QuadCost") -> "QuadCost":
        return QuadCost(
            (self.H + other.H).tocsc(), self.f + other.f, self.const + other.const
        )


@dataclass(frozen=True)
class QpProblem:
    """Assembled sparse QP with the stacked state/input variable layout.

    `reg` weights a small input-smoothness term added to H for the solve
    only. Without any input cost the optimum is non-unique: trading a t^2
    yaw sweep between body and gimbal is exactly free (zero jerk on both,
    same summed camera yaw), and so is superposing a discrete position
    parabola carried by a sawtooth force pattern (zero third difference,
    with the ZOH velocity state oscillating around the position slope).
    A quadratic bump in a gimbal angle is flat too: it has zero jerk, it
    vanishes at the keyframes, and the gimbal rate is an input with no
    initial pin. A constant-force position drift past the final keyframe is
    a third. All of these need inputs that either vary rapidly or stray
    from the hover profile u_hover = (0, 0, m*g, 0, 0, 0), so the solver
    minimizes reg * (||u_{k+1} - u_k||^2 + ||u - u_hover||^2) alongside the
    true cost. Exact hover is left completely unbiased, and the reported
    objective excludes the term.
    """

    H: sp.csc_matrix
    f: np.ndarray
    const: float
    A_eq: sp.csc_matrix
    b_eq: np.ndarray
    A_ineq: sp.csc_matrix
    b_ineq: np.ndarray
    grid: Grid
    reg: float = 0.0
    hover_force: float = 0.0

    @property
    def n_vars(self) -> int:
        return n_vars(self.grid.n_stages)

    @property
    def H_solver(self) -> sp.csc_matrix:
        """The (strictly convex) quadratic term the solver actually minimizes."""
        if self.reg == 0.0:
            return self.H
        n = self.grid.n_stages
        n_var = self.H.shape[0]
        offset = NX * (n + 1)
        rows, cols, vals = [], [], []
        for i in range(n - 1):
            for j in range(NU):
                r = i * NU + j
                rows += [r, r]
                cols += [offset + i * NU + j, offset + (i + 1) * NU + j]
                vals += [-1.0, 1.0]
        D = sp.csc_matrix((vals, (rows, cols)), shape=((n - 1) * NU, n_var))
        diag = np.zeros(n_var)
        diag[offset:] = 1.0
        P = sp.diags(diag)
        return (self.H + 2.0 * self.reg * (D.T @ D + P)).tocsc()

    @property
    def f_solver(self) -> np.ndarray:
        """Linear term seen by the solver: centers the input-magnitude
        regularizer on the hover profile rather than zero."""
        if self.reg == 0.0:
            return self.f
        f = self.f.copy()
        n = self.grid.n_stages
        offset = NX * (n + 1)
        fz_cols = offset + np.arange(n) * NU + 2
        f[fz_cols] -= 2.0 * self.reg * self.hover_force
        return f

    def objective(self, x: np.ndarray) -> float:
        return 0.5 * float(x @ (self.H @ x)) + float(self.f @ x) + self.const


@dataclass(frozen=True)
class Trajectory:
    """Solved trajectory: (N+1, 10) states and (N, 6) inputs on a uniform grid."""

    grid: Grid
    states: np.ndarray
    inputs: np.ndarray

    def __post_init__(self):
        n = self.grid.n_stages
        states = np.asarray(self.states, dtype=float)
        inputs = np.asarray(self.inputs, dtype=float)
        if states.shape != (n + 1, NX):
            raise ShapeError(f"states must have shape ({n + 1}, {NX}), got {states.shape}")
        if inputs.shape != (n, NU):
            raise ShapeError(f"inputs must have shape ({n}, {NU}), got {inputs.shape}")
        object.__setattr__(self, "states", dyn._frozen_array(states, (n + 1, NX)))
        object.__setattr__(self, "inputs", dyn._frozen_array(inputs, (n, NU)))

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, POS]

    @property
    def camera_yaw(self) -> np.ndarray:
        """Summed body + gimbal yaw, i.e. the yaw the camera actually points at."""
        return self.states[:, YAW_Q] + self.states[:, YAW_G]

    @property
    def camera_pitch(self) -> np.ndarray:
        return self.states[:, PITCH_G]

    def dynamics_residual(self, model: DiscreteModel) -> float:
        pred = self.states[:-1] @ model.A_d.T + self.inputs @ model.B_d.T + model.c_d
        return float(np.abs(self.states[1:] - pred).max())


@dataclass
class SolveReport:
    objective: float
    kkt_residuals: dict
    iterations: int
    wall_time: float
    status: str  # optimal | max_iter | infeasible


@dataclass(frozen=True)
class SolverSettings:
    abstol: float = 1e-9
    reltol: float = 1e-9
    feastol: float = 1e-9
    max_iters: int = 2000
    kkt_tol: float = 1e-6  # accepted stationarity/complementarity residual
    polish: bool = True  # active-set KKT refinement of the interior-point iterate


# ---------------------------------------------------------------------------
# variable layout helpers


def n_vars(n_stages: int) -> int:
    return NX * (n_stages + 1) + NU * n_stages


def x_index(i: int, entry: int = 0) -> int:
    """Flat index of state entry `entry` at stage i."""
    return NX * i + entry


def u_index(n_stages: int, i: int, entry: int = 0) -> int:
    """Flat index of input entry `entry` at stage i."""
    return NX * (n_stages + 1) + NU * i + entry


def unwrap_keyframe_yaws(yaws) -> np.ndarray:
    """Shift each desired yaw by 2*pi multiples to lie within pi of its predecessor."""
    yaws = np.asarray(yaws, dtype=float)
    out = yaws.copy()
    for j in range(1, out.size):
        d = out[j] - out[j - 1]
        out[j] -= 2 * np.pi * np.round(d / (2 * np.pi))
    return out


def finite_difference_stencil(order: int, dt: float) -> np.ndarray:
    """Backward finite-difference coefficients of `order`, newest sample first,
    scaled by 1/dt^order."""
    from math import comb

    return np.array([(-1) ** k * comb(order, k) for k in range(order + 1)]) / dt**order


# ---------------------------------------------------------------------------
# cost builders


def build_keyframe_cost(keyframes: KeyframeList, grid: Grid, lam_k: float) -> QuadCost:
    """lam_k * sum_j ||r_eta(j) - k_j||^2 over position entries at keyframe stages."""
    eta = dyn.keyframe_index_map(keyframes.times, grid.dt)
    n = n_vars(grid.n_stages)
    diag_idx, diag_val = [], []
    f = np.zeros(n)
    const = 0.0
    for idx, pos in zip(eta, keyframes.positions):
        if idx > grid.n_stages:
            raise ParameterError(f"keyframe index {idx} beyond grid ({grid.n_stages} stages)")
        for d in range(3):
            j = x_index(idx, d)
            diag_idx.append(j)
            diag_val.append(2.0 * lam_k)
            f[j] += -2.0 * lam_k * pos[d]
        const += lam_k * float(pos @ pos)
    H = sp.coo_matrix((diag_val, (diag_idx, diag_idx)), shape=(n, n)).tocsc()
    return QuadCost(H, f, const)


def build_derivative_cost(grid: Grid, lam_d, lam_dg) -> QuadCost:
    """Finite-difference smoothness penalties.

    For each order q with a positive weight, sums ||D^q stencil||^2 from
    stage q to N (no phantom pre-horizon states), applied to the position
    entries with weight lam_d[q-1] and to body yaw / gimbal yaw / gimbal
    pitch with weight lam_dg[q-1].
    """
    lam_d = np.asarray(lam_d, dtype=float)
    lam_dg = np.asarray(lam_dg, dtype=float)
    n_stages = grid.n_stages
    n = n_vars(n_stages)
    rows, cols, vals = [], [], []
    row = 0
    for q in range(1, 4):
        weights = [(lam_d[q - 1], (0, 1, 2)), (lam_dg[q - 1], dyn.ANGLE_IDX)]
        if all(w == 0.0 for w, _ in weights):
            continue
        if q > n_stages:
            raise ParameterError(f"derivative order {q} needs at least {q} stages, grid has {n_stages}")
        stencil = finite_difference_stencil(q, grid.dt)
        for w, entries in weights:
            if w == 0.0:
                continue
            sw = np.sqrt(w)
            for i in range(q, n_stages + 1):
                for d in entries:
                    for k, coeff in enumerate(stencil):
                        rows.append(row)
                        cols.append(x_index(i - k, d))
                        vals.append(sw * coeff)
                    row += 1
    S = sp.coo_matrix((vals, (rows, cols)), shape=(row, n)).tocsr()
    H = (2.0 * (S.T @ S)).tocsc()
    return QuadCost(H, np.zeros(n))


def build_orientation_cost(keyframes: KeyframeList, grid: Grid, lam_o: float) -> QuadCost:
    """lam_o * sum_j [ ((yaw_g + yaw_q) - yaw_j)^2 + (pitch_g - pitch_j)^2 ].

    Camera yaw couples body and gimbal yaw by summation; pitch tracks the
    gimbal alone. Desired yaws are unwrapped against their predecessors so a
    wrapped request never forces a full-circle sweep.
    """
    eta = dyn.keyframe_index_map(keyframes.times, grid.dt)
    yaws = unwrap_keyframe_yaws(keyframes.yaws)
    n = n_vars(grid.n_stages)
    rows, cols, vals = [], [], []
    f = np.zeros(n)
    const = 0.0
    row = 0
    sw = np.sqrt(lam_o)
    # residual rows: sqrt(lam_o) * (yaw_q + yaw_g - yaw_j), sqrt(lam_o) * (pitch_g - pitch_j)
    targets = []
    for idx, psi, phi in zip(eta, yaws, keyframes.pitches):
        rows += [row, row]
        cols += [x_index(idx, YAW_Q), x_index(idx, YAW_G)]
        vals += [sw, sw]
        targets.append(sw * psi)
        row += 1
        rows.append(row)
        cols.append(x_index(idx, PITCH_G))
        vals.append(sw)
        targets.append(sw * phi)
        row += 1
    S = sp.coo_matrix((vals, (rows, cols)), shape=(row, n)).tocsr()
    t = np.array(targets)
    H = (2.0 * (S.T @ S)).tocsc()
    f = -2.0 * (S.T @ t)
    const = float(t @ t)
    return QuadCost(H, f, const)


# ---------------------------------------------------------------------------
# assembly


def default_initial_state(keyframes: KeyframeList, gimbal: GimbalParams) -> np.ndarray:
    """Rest at the first keyframe: its position, zero velocities, body yaw at
    the desired yaw, gimbal yaw zero, gimbal pitch at the desired pitch
    (clamped into range)."""
    x0 = np.zeros(NX)
    x0[POS] = keyframes.positions[0]
    x0[YAW_Q] = keyframes.yaws[0]
    x0[YAW_G] = 0.0
    x0[PITCH_G] = float(np.clip(keyframes.pitches[0], *gimbal.pitch_range))
    return x0


def assemble_qp(
    keyframes: KeyframeList,
    model: DiscreteModel,
    grid: Grid,
    weights: Weights,
    initial_state: np.ndarray,
    quad: QuadrotorParams,
    gimbal: GimbalParams,
    reg: float = 1e-4,
) -> QpProblem:
    """Build the full sparse QP: summed costs, dynamics + pinning equalities,
    input and gimbal-angle box inequalities."""
    initial_state = np.asarray(initial_state, dtype=float)
    if initial_state.shape != (NX,):
        raise ShapeError(f"initial state must have shape ({NX},), got {initial_state.shape}")
    glo, ghi = gimbal.angle_min, gimbal.angle_max
    for k, (lo, hi) in enumerate(zip(glo, ghi)):
        v = initial_state[YAW_G + k]
        if not lo <= v <= hi:
            raise InfeasibleError(
                f"initial gimbal angle {v} outside range [{lo}, {hi}] (axis {k})"
            )

    cost = (
        build_keyframe_cost(keyframes, grid, weights.lam_k)
        + build_derivative_cost(grid, weights.lam_d, weights.lam_dg)
        + build_orientation_cost(keyframes, grid, weights.lam_o)
    )

    n_stages = grid.n_stages
    n = n_vars(n_stages)

    # equalities: x_0 = initial_state; x_{i+1} - A x_i - B u_i = c
    rows, cols, vals = [], [], []
    b_eq = np.zeros(NX * (n_stages + 1))
    for k in range(NX):
        rows.append(k)
        cols.append(x_index(0, k))
        vals.append(1.0)
    b_eq[:NX] = initial_state
    A, B, c = model.A_d, model.B_d, model.c_d
    for i in range(n_stages):
        r0 = NX * (i + 1)
        for k in range(NX):
            rows.append(r0 + k)
            cols.append(x_index(i + 1, k))
            vals.append(1.0)
        for k in range(NX):
            for j in range(NX):
                if A[k, j] != 0.0:
                    rows.append(r0 + k)
                    cols.append(x_index(i, j))
                    vals.append(-A[k, j])
            for j in range(NU):
                if B[k, j] != 0.0:
                    rows.append(r0 + k)
                    cols.append(u_index(n_stages, i, j))
                    vals.append(-B[k, j])
        b_eq[r0 : r0 + NX] = c
    A_eq = sp.coo_matrix((vals, (rows, cols)), shape=(b_eq.size, n)).tocsc()

    # inequalities: input boxes per input stage, gimbal angle boxes per state stage
    u_lo = np.concatenate([quad.u_min, gimbal.rate_min])
    u_hi = np.concatenate([quad.u_max, gimbal.rate_max])
    rows, cols, vals, b = [], [], [], []
    row = 0

    def add_box(col: int, lo: float, hi: float):
        nonlocal row
        rows.append(row)
        cols.append(col)
        vals.append(1.0)
        b.append(hi)
        row += 1
        rows.append(row)
        cols.append(col)
        vals.append(-1.0)
        b.append(-lo)
        row += 1

    for i in range(n_stages):
        for k in range(NU):
            add_box(u_index(n_stages, i, k), u_lo[k], u_hi[k])
    for i in range(n_stages + 1):
        for k in range(2):
            add_box(x_index(i, YAW_G + k), glo[k], ghi[k])
    A_ineq = sp.coo_matrix((vals, (rows, cols)), shape=(row, n)).tocsc()

    return QpProblem(
        H=cost.H,
        f=cost.f,
        const=cost.const,
        A_eq=A_eq,
        b_eq=b_eq,
        A_ineq=A_ineq,
        b_ineq=np.array(b),
        grid=grid,
        reg=reg,
        hover_force=float(quad.hover_input()[2]),
    )


# ---------------------------------------------------------------------------
# solve


def _to_cvxopt_sparse(M: sp.spmatrix):
    from cvxopt import spmatrix

    coo = M.tocoo()
    return spmatrix(
        coo.data, coo.row.astype(int), coo.col.astype(int), size=coo.shape
    )


def _polish(problem: QpProblem, x: np.ndarray, z: np.ndarray):
    """Refine an interior-point iterate by one sparse KKT solve with the
    detected active inequalities held as equalities.

    Interior-point methods leave O(sqrt(gap)) error along weakly-curved
    directions (e.g. the body/gimbal yaw split); the KKT solve removes it.
    Returns None when the guess is rejected (wrong active set or singular
    system), in which case the unpolished iterate stands.
    """
    import scipy.sparse.linalg as spla

    H = problem.H_solver
    slack = problem.b_ineq - problem.A_ineq @ x
    active = np.where(z > np.maximum(slack, 1e-9))[0]
    n = H.shape[0]
    n_eq = problem.A_eq.shape[0]
    blocks = [problem.A_eq] if n_eq else []
    rhs_c = [problem.b_eq] if n_eq else []
    if active.size:
        blocks.append(problem.A_ineq[active])
        rhs_c.append(problem.b_ineq[active])
    if blocks:
        A = sp.vstack(blocks).tocsc()
        m = A.shape[0]
        kkt = sp.bmat([[H, A.T], [A, None]], format="csc")
        rhs = np.concatenate([-problem.f_solver] + rhs_c)
    else:
        kkt = H.tocsc()
        rhs = -problem.f_solver
        m = 0
    # Equilibrate: the raw KKT mixes jerk-penalty rows (~1/dt^6) with the
    # tiny input regularization, so an unscaled LU loses the weakly-curved
    # directions to roundoff. Symmetric diagonal scaling plus iterative
    # refinement keeps the residual floor well below the smallest curvature.
    row_max = np.maximum(np.abs(kkt).max(axis=1).toarray().ravel(), 1e-12)
    d = 1.0 / np.sqrt(row_max)
    D = sp.diags(d)
    kkt_s = (D @ kkt @ D).tocsc()
    rhs_s = d * rhs
    try:
        lu = spla.splu(kkt_s)
        sol_s = lu.solve(rhs_s)
        for _ in range(5):
            sol_s = sol_s + lu.solve(rhs_s - kkt_s @ sol_s)
    except RuntimeError:
        return None
    sol = d * sol_s
    if not np.all(np.isfinite(sol)):
        return None
    x_new = sol[:n]
    mult = sol[n:]
    # reject if the guessed active set was wrong
    if problem.A_ineq.shape[0]:
        if (problem.A_ineq @ x_new - problem.b_ineq).max() > 1e-9:
            return None
    z_new = np.zeros(problem.A_ineq.shape[0])
    if active.size:
        z_act = mult[n_eq:]
        if z_act.min() < -1e-9:
            return None
        z_new[active] = np.maximum(z_act, 0.0)
    y_new = mult[:n_eq]
    return x_new, y_new, z_new


def solve_qp(
    problem: QpProblem, settings: SolverSettings | None = None
) -> tuple[np.ndarray, SolveReport]:
    """Direct sparse interior-point solve (cvxopt) with KKT residual reporting."""
    from cvxopt import matrix, solvers

    settings = settings or SolverSettings()
    opts = {
        "show_progress": False,
        "abstol": settings.abstol,
        "reltol": settings.reltol,
        "feastol": settings.feastol,
        "maxiters": settings.max_iters,
    }
    has_ineq = problem.A_ineq.shape[0] > 0
    has_eq = problem.A_eq.shape[0] > 0
    t0 = time.perf_counter()
    try:
        sol = solvers.qp(
            _to_cvxopt_sparse(problem.H_solver),
            matrix(problem.f_solver),
            _to_cvxopt_sparse(problem.A_ineq) if has_ineq else None,
            matrix(problem.b_ineq) if has_ineq else None,
            _to_cvxopt_sparse(problem.A_eq) if has_eq else None,
            matrix(problem.b_eq) if has_eq else None,
            options=opts,
        )
    except (ValueError, ArithmeticError) as exc:
        raise SolverError(f"QP solve failed: {exc}") from exc

    x = np.asarray(sol["x"]).ravel()
    y = np.asarray(sol["y"]).ravel() if has_eq else np.zeros(0)
    z = np.asarray(sol["z"]).ravel() if has_ineq else np.zeros(0)

    if settings.polish and sol["status"] == "optimal":
        polished = _polish(problem, x, z)
        if polished is not None:
            x, y, z = polished
    wall = time.perf_counter() - t0

    slack = problem.b_ineq - problem.A_ineq @ x
    residuals = {
        "primal_eq": float(np.abs(problem.A_eq @ x - problem.b_eq).max()) if has_eq else 0.0,
        "primal_ineq": float(max(0.0, -slack.min())) if has_ineq else 0.0,
        "stationarity": float(
            np.abs(
                problem.H_solver @ x + problem.f_solver + problem.A_eq.T @ y + problem.A_ineq.T @ z
            ).max()
        ),
        "complementarity": float(np.abs(z * slack).max()) if has_ineq else 0.0,
    }

    if sol["status"] == "optimal":
        status = "optimal"
    elif residuals["primal_ineq"] > 1e-6 or residuals["primal_eq"] > 1e-4:
        status = "infeasible"
    else:
        status = "max_iter"

    report = SolveReport(
        objective=problem.objective(x),
        kkt_residuals=residuals,
        iterations=int(sol["iterations"]),
        wall_time=wall,
        status=status,
    )
    return x, report


def extract_trajectory(x: np.ndarray, grid: Grid) -> Trajectory:
    n_stages = grid.n_stages
    states = x[: NX * (n_stages + 1)].reshape(n_stages + 1, NX)
    inputs = x[NX * (n_stages + 1) :].reshape(n_stages, NU)
    return Trajectory(grid=grid, states=states, inputs=inputs)


def make_grid(end_time: float, dt: float, min_stages: int = 1) -> Grid:
    """Grid covering [0, end_time] with a floor on the stage count."""
    return Grid(dt=dt, n_stages=max(min_stages, int(np.floor(end_time / dt + 0.5))))


def _max_penalized_order(weights: Weights) -> int:
    orders = [q for q in range(1, 4) if weights.lam_d[q - 1] > 0 or weights.lam_dg[q - 1] > 0]
    return max(orders)


def plan_trajectory(
    keyframes: KeyframeList,
    quad: QuadrotorParams,
    gimbal: GimbalParams,
    weights: Weights | None = None,
    dt: float = 0.1,
    initial_state: np.ndarray | None = None,
    settings: SolverSettings | None = None,
) -> tuple[Trajectory, SolveReport]:
    """End-to-end single direct solve: grid, model, assembly, solve, extraction."""
    weights = weights or Weights()
    keyframes.check_pitch_range(gimbal)
    grid = make_grid(float(keyframes.times[-1]), dt, min_stages=_max_penalized_order(weights))
    model = dyn.build_discrete_model(quad, gimbal, dt)
    if initial_state is None:
        initial_state = default_initial_state(keyframes, gimbal)
    problem = assemble_qp(keyframes, model, grid, weights, initial_state, quad, gimbal)
    x, report = solve_qp(problem, settings)
    if report.status == "infeasible":
        raise InfeasibleError(
            f"solver reported infeasible (max violation {report.kkt_residuals['primal_ineq']:.3e})"
        )
    return extract_trajectory(x, grid), report
