"""Independent reference implementations used to check the main code paths.

Everything here is deliberately brute-force and kept independent of the
package internals it verifies: matrix-exponential discretization, dense
KKT / active-set QP solves, and direct cost summations.
"""

import numpy as np
import scipy.linalg

NX, NU = 10, 6


def zoh_expm(mass, inertia_z, gravity, dt):
    """ZOH discretization via the augmented matrix exponential."""
    Ac = np.zeros((NX, NX))
    Ac[0:3, 6:9] = np.eye(3)  # r' = v
    Ac[3, 9] = 1.0  # yaw' = yawrate
    Bc = np.zeros((NX, NU))
    Bc[6:9, 0:3] = np.eye(3) / mass  # v' = F/m + g
    Bc[9, 3] = 1.0 / inertia_z  # yawrate' = M/I
    Bc[4, 4] = 1.0  # gimbal yaw' = rate input
    Bc[5, 5] = 1.0
    c0 = np.zeros(NX)
    c0[6:9] = gravity
    aug = np.zeros((NX + NU + 1, NX + NU + 1))
    aug[:NX, :NX] = Ac
    aug[:NX, NX : NX + NU] = Bc
    aug[:NX, -1] = c0
    E = scipy.linalg.expm(aug * dt)
    return E[:NX, :NX], E[:NX, NX : NX + NU], E[:NX, -1]


def dense_kkt_solve(H, f, A_eq, b_eq):
    """Equality-constrained minimizer via one dense KKT solve."""
    H = np.asarray(H.todense()) if hasattr(H, "todense") else np.asarray(H)
    A = np.asarray(A_eq.todense()) if hasattr(A_eq, "todense") else np.asarray(A_eq)
    n, m = H.shape[0], A.shape[0]
    kkt = np.block([[H, A.T], [A, np.zeros((m, m))]])
    rhs = np.concatenate([-np.asarray(f), np.asarray(b_eq)])
    sol = np.linalg.solve(kkt, rhs)
    return sol[:n], sol[n:]


def dense_active_set_solve(H, f, A_eq, b_eq, A_ineq, b_ineq, max_iter=500, tol=1e-10):
    """Dense reference QP solve: primal active-set over the inequality rows.

    Iterates equality-constrained KKT solves, adding the most violated
    inequality and dropping active rows with negative multipliers.
    """
    G = np.asarray(A_ineq.todense()) if hasattr(A_ineq, "todense") else np.asarray(A_ineq)
    h = np.asarray(b_ineq)
    active: list[int] = []
    for _ in range(max_iter):
        if active:
            A_full = np.vstack(
                [np.asarray(A_eq.todense()) if hasattr(A_eq, "todense") else np.asarray(A_eq), G[active]]
            )
            b_full = np.concatenate([np.asarray(b_eq), h[active]])
        else:
            A_full, b_full = A_eq, b_eq
        x, mult = dense_kkt_solve(H, f, A_full, b_full)
        n_eq = len(np.asarray(b_eq))
        ineq_mult = mult[n_eq:]
        # drop the active row with the most negative multiplier
        if len(active) and ineq_mult.min() < -tol:
            active.pop(int(np.argmin(ineq_mult)))
            continue
        violation = G @ x - h
        worst = int(np.argmax(violation))
        if violation[worst] <= tol:
            return x
        active.append(worst)
    raise RuntimeError("active-set oracle did not converge")


def keyframe_cost_direct(states, eta, positions, lam_k):
    return lam_k * sum(
        np.sum((states[idx, 0:3] - k) ** 2) for idx, k in zip(eta, positions)
    )


def derivative_cost_direct(states, dt, lam_d, lam_dg):
    """Direct finite-difference summation over orders 1..3."""
    from math import comb

    total = 0.0
    n = states.shape[0] - 1
    for q in range(1, 4):
        coeffs = np.array([(-1) ** k * comb(q, k) for k in range(q + 1)]) / dt**q
        for i in range(q, n + 1):
            window = states[[i - k for k in range(q + 1)]]
            diff = coeffs @ window
            total += lam_d[q - 1] * np.sum(diff[0:3] ** 2)
            total += lam_dg[q - 1] * np.sum(diff[[3, 4, 5]] ** 2)
    return total


def orientation_cost_direct(states, eta, yaws, pitches, lam_o):
    total = 0.0
    for idx, psi, phi in zip(eta, yaws, pitches):
        total += lam_o * ((states[idx, 4] + states[idx, 3]) - psi) ** 2
        total += lam_o * (states[idx, 5] - phi) ** 2
    return total


def normalized_jerk_direct(positions, dt):
    """Brute-force per-step third differences, summed and normalized."""
    n = positions.shape[0] - 1
    total = 0.0
    for i in range(3, n + 1):
        d3 = positions[i] - 3 * positions[i - 1] + 3 * positions[i - 2] - positions[i - 3]
        total += np.linalg.norm(d3) / dt**3 * dt
    return total / (n * dt)
