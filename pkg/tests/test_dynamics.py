import numpy as np
import pytest

from quadcam.dynamics import (
    NU,
    NX,
    GimbalParams,
    QuadrotorParams,
    build_discrete_model,
    default_gimbal,
    default_quadrotor,
    keyframe_index_map,
    propagate,
)
from quadcam.errors import KeyframeCollisionError, ParameterError, ShapeError

from oracles import zoh_expm


@pytest.fixture
def quad():
    return default_quadrotor()


@pytest.fixture
def gimbal():
    return default_gimbal()


class TestParams:
    def test_rejects_nonpositive_mass(self, quad):
        with pytest.raises(ParameterError):
            QuadrotorParams(0.0, quad.inertia_z, quad.gravity, quad.u_min, quad.u_max)

    def test_rejects_nonpositive_inertia(self, quad):
        with pytest.raises(ParameterError):
            QuadrotorParams(quad.mass, -1.0, quad.gravity, quad.u_min, quad.u_max)

    def test_rejects_inverted_bounds(self, quad):
        with pytest.raises(ParameterError):
            QuadrotorParams(quad.mass, quad.inertia_z, quad.gravity, quad.u_max, quad.u_min)

    def test_rejects_infeasible_hover(self, quad):
        # hover thrust for 2 kg exceeds the z-force ceiling of 9.8 N
        with pytest.raises(ParameterError):
            QuadrotorParams(2.0, quad.inertia_z, quad.gravity, quad.u_min, quad.u_max)

    def test_gimbal_rejects_empty_range(self):
        with pytest.raises(ParameterError):
            GimbalParams((1.0, 1.0), (-1.0, 0.0), [-1, -1], [1, 1])

    def test_gimbal_rate_bounds_must_straddle_zero(self):
        with pytest.raises(ParameterError):
            GimbalParams((-1.0, 1.0), (-1.0, 0.0), [0.1, -1], [1, 1])


class TestDiscretization:
    def test_dt_to_zero_limit(self, quad, gimbal):
        model = build_discrete_model(quad, gimbal, 1e-12)
        assert np.allclose(model.A_d, np.eye(NX), atol=2e-12)
        assert np.abs(model.B_d).max() < 1e-8
        assert np.abs(model.c_d).max() < 1e-8

    def test_free_fall_one_step(self, quad, gimbal):
        model = build_discrete_model(quad, gimbal, 0.1)
        x0 = np.zeros(NX)
        x1 = model.step(x0, np.zeros(NU))
        assert x1[2] == pytest.approx(-0.04905, abs=1e-12)
        assert x1[8] == pytest.approx(-0.981, abs=1e-12)

    def test_matches_matrix_exponential_oracle(self, gimbal):
        rng = np.random.default_rng(7)
        for _ in range(20):
            mass = rng.uniform(0.2, 3.0)
            inertia = rng.uniform(1e-3, 0.1)
            gravity = rng.normal(0, 5, 3)
            dt = rng.uniform(0.01, 0.5)
            quad = QuadrotorParams(
                mass, inertia, gravity, -np.full(4, 100.0) + mass * gravity.min(),
                np.full(4, 100.0) + mass * gravity.max(),
            )
            model = build_discrete_model(quad, gimbal, dt)
            A_ref, B_ref, c_ref = zoh_expm(mass, inertia, gravity, dt)
            assert np.abs(model.A_d - A_ref).max() < 1e-10
            assert np.abs(model.B_d - B_ref).max() < 1e-10
            assert np.abs(model.c_d - c_ref).max() < 1e-10

    def test_rejects_nonpositive_dt(self, quad, gimbal):
        with pytest.raises(ParameterError):
            build_discrete_model(quad, gimbal, 0.0)

    def test_gimbal_block_decoupled(self, quad, gimbal):
        model = build_discrete_model(quad, gimbal, 0.25)
        # gimbal angle rows: identity on the angle, dt on the rate input, nothing else
        for k, angle_idx in enumerate((4, 5)):
            row = model.A_d[angle_idx]
            expected = np.zeros(NX)
            expected[angle_idx] = 1.0
            assert np.array_equal(row, expected)
            brow = model.B_d[angle_idx]
            assert brow[4 + k] == 0.25
            assert np.count_nonzero(brow) == 1
            assert model.c_d[angle_idx] == 0.0

    def test_zero_velocity_zero_gravity_position_frozen(self, gimbal):
        quad = QuadrotorParams(1.0, 0.01, [0, 0, 0], [-1, -1, -1, -1], [1, 1, 1, 1])
        model = build_discrete_model(quad, gimbal, 0.3)
        x = np.zeros(NX)
        x[0:3] = [1.0, 2.0, 3.0]
        x[6:9] = [0.5, -0.5, 0.25]
        x1 = model.step(x, np.zeros(NU))
        assert np.allclose(x1[0:3], x[0:3] + 0.3 * x[6:9])


class TestPropagate:
    def test_hover_equilibrium(self, quad, gimbal):
        model = build_discrete_model(quad, gimbal, 0.1)
        x0 = np.zeros(NX)
        x0[0:3] = [1, 2, 3]
        hover = np.concatenate([quad.hover_input(), [0.0, 0.0]])
        states = propagate(model, x0, np.tile(hover, (20, 1)))
        assert np.allclose(states, x0, atol=1e-12)

    def test_uniform_acceleration(self, quad, gimbal):
        dt = 0.05
        model = build_discrete_model(quad, gimbal, dt)
        a = np.array([0.5, -0.25, 1.0])
        u = np.zeros(NU)
        u[0:3] = quad.mass * (a - quad.gravity)
        states = propagate(model, np.zeros(NX), np.tile(u, (40, 1)))
        t = np.arange(41) * dt
        expected = 0.5 * np.outer(t**2, a)
        assert np.allclose(states[:, 0:3], expected, atol=1e-10)

    def test_matches_step_by_step_recurrence(self, quad, gimbal):
        rng = np.random.default_rng(3)
        model = build_discrete_model(quad, gimbal, 0.1)
        x0 = rng.normal(size=NX)
        inputs = rng.normal(size=(5, NU))
        states = propagate(model, x0, inputs)
        x = x0
        for i in range(5):
            x = model.A_d @ x + model.B_d @ inputs[i] + model.c_d
            assert np.allclose(states[i + 1], x, atol=0, rtol=0)

    def test_linear_affine_in_initial_state(self, quad, gimbal):
        rng = np.random.default_rng(11)
        model = build_discrete_model(quad, gimbal, 0.1)
        x0 = rng.normal(size=NX)
        delta = rng.normal(size=NX)
        inputs = rng.normal(size=(8, NU))
        diff = propagate(model, x0 + delta, inputs) - propagate(model, x0, inputs)
        d = delta
        for i in range(8):
            assert np.allclose(diff[i], d, atol=1e-12)
            d = model.A_d @ d

    def test_shape_errors(self, quad, gimbal):
        model = build_discrete_model(quad, gimbal, 0.1)
        with pytest.raises(ShapeError):
            propagate(model, np.zeros(4), np.zeros((3, NU)))
        with pytest.raises(ShapeError):
            propagate(model, np.zeros(NX), np.zeros((3, 2)))


class TestKeyframeIndexMap:
    def test_exact_multiples(self):
        assert keyframe_index_map([0, 1.0, 2.5], 0.1) == [0, 10, 25]

    def test_collision(self):
        with pytest.raises(KeyframeCollisionError) as exc:
            keyframe_index_map([0, 0.04], 0.1)
        assert exc.value.grid_index == 0

    def test_rounding(self):
        assert keyframe_index_map([0, 0.26, 0.44], 0.1) == [0, 3, 4]

    def test_round_half_up(self):
        assert keyframe_index_map([0, 0.25], 0.1) == [0, 3]

    def test_requires_zero_start(self):
        with pytest.raises(ParameterError):
            keyframe_index_map([0.5, 1.0], 0.1)
