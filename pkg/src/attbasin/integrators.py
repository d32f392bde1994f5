"""Structure-preserving discrete flow maps for both pendulum models.

The S^2 update keeps |q| = 1 exactly (square-root form with an in-plane
increment); the SO(3) update works on (R, Pi = J Omega) and advances the
attitude by a relative rotation solved from an implicit matrix equation.
Forward and backward steps solve the same discrete equations, so the two
maps are exact inverses up to the Newton tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import geom
from .errors import NewtonDiverged, StepTooLarge
from .geom import TangentStateS2, TangentStateSO3
from .models import S2Params, SO3Params, so3_reduced_moment


@dataclass
class StepSpec:
    """Time step, direction, and Newton-solve settings."""

    h: float = 0.002
    direction: str = "backward"
    newton_tol: float = 1e-14
    newton_max_iters: int = 50

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError("h must be positive")
        if self.direction not in ("forward", "backward"):
            raise ValueError("direction must be 'forward' or 'backward'")
        if self.newton_tol < 1e-15:
            raise ValueError("newton_tol must be at least 1e-15")

    def check_s2(self, p: S2Params):
        if self.h * p.komega >= 2.0:
            raise ValueError("require h * k_omega < 2 for the velocity solve")

    def check_so3(self, p: SO3Params):
        if self.h * p.kOmega / 2.0 >= p.j_diag.min():
            raise ValueError("require h * k_Omega / 2 < min J_i")


class MomentumState:
    """Attitude plus body angular momentum Pi = J Omega."""

    __slots__ = ("R", "Pi")

    def __init__(self, R, Pi, check=True):
        if check:
            R = geom.normalize_rotation(R)
        self.R = np.asarray(R, dtype=float)
        self.Pi = np.asarray(Pi, dtype=float)

    def to_tangent(self, p: SO3Params):
        return TangentStateSO3(self.R, self.Pi / p.j_diag, check=False)

    @classmethod
    def from_tangent(cls, s: TangentStateSO3, p: SO3Params):
        return cls(s.R, p.j_diag * s.Omega, check=False)


@dataclass
class Trajectory:
    """Timestamped states produced by flow(); times are |elapsed| >= 0."""

    times: np.ndarray
    states: list
    direction: str


# S^2 steps ------------------------------------------------------------------
#
# Discrete equations, with m = M / (m l^2) = -kw w - kq q_d x q:
#   q_{k+1} = b x q_k + sqrt(1 - |b|^2) q_k,   b = h w_k + (h^2/2) m_k
#   w_{k+1} = w_k + (h/2)(m_k + m_{k+1})
# The backward form uses a = h w_{k+1} - (h^2/2) m_{k+1}, which equals b
# identically on solutions, so the two maps invert each other exactly.


def _s2_moment(q, w, p):
    return -p.komega * w - p.kq * np.cross(p.qd, q)


def _s2_backward_arrays(q1, w1, h, p):
    a = h * w1 - 0.5 * h * h * _s2_moment(q1, w1, p)
    # a is tangent at q_{k+1}, so |a x q| = |a|; using the cross product's
    # norm under the square root pins |q| against roundoff drift
    u = np.cross(a, q1)
    n2 = 1.0 - float(np.dot(u, u))
    if n2 <= 0.0:
        raise StepTooLarge(f"|h w - (h^2/2) m| = {np.linalg.norm(a):.3f} >= 1")
    q0 = -u + np.sqrt(n2) * q1
    # one Newton step of normalization: kills the ulp-level random walk of
    # the summation roundoff without touching the discrete equations
    q0 = q0 * (1.5 - 0.5 * float(np.dot(q0, q0)))
    hw2 = 0.5 * h * p.komega
    w0 = ((1.0 + hw2) * w1 + 0.5 * h * p.kq * np.cross(p.qd, q0 + q1)) / (1.0 - hw2)
    return q0, w0


def _s2_forward_arrays(q0, w0, h, p):
    b = h * w0 + 0.5 * h * h * _s2_moment(q0, w0, p)
    u = np.cross(b, q0)
    n2 = 1.0 - float(np.dot(u, u))
    if n2 <= 0.0:
        raise StepTooLarge(f"|h w + (h^2/2) m| = {np.linalg.norm(b):.3f} >= 1")
    q1 = u + np.sqrt(n2) * q0
    q1 = q1 * (1.5 - 0.5 * float(np.dot(q1, q1)))
    hw2 = 0.5 * h * p.komega
    w1 = ((1.0 - hw2) * w0 - 0.5 * h * p.kq * np.cross(p.qd, q0 + q1)) / (1.0 + hw2)
    return q1, w1


def s2_step_backward(s_next: TangentStateS2, spec: StepSpec, p: S2Params):
    """One backward step: maps (q_{k+1}, w_{k+1}) to (q_k, w_k)."""
    spec.check_s2(p)
    q0, w0 = _s2_backward_arrays(s_next.q, s_next.omega, spec.h, p)
    return TangentStateS2(q0, w0, check=False)


def s2_step_forward(s: TangentStateS2, spec: StepSpec, p: S2Params):
    """One forward step; exact inverse of s2_step_backward."""
    spec.check_s2(p)
    q1, w1 = _s2_forward_arrays(s.q, s.omega, spec.h, p)
    return TangentStateS2(q1, w1, check=False)


# SO(3) steps ----------------------------------------------------------------
#
# Discrete equations on (R, Pi), with M the reduced closed-loop moment and
# J_d = tr[J]/2 I - J:
#   h (Pi_k + (h/2) M_k)^  = F_k J_d - J_d F_k^T
#   R_{k+1} = R_k F_k
#   Pi_{k+1} = F_k^T (Pi_k + (h/2) M_k) + (h/2) M_{k+1}
# Backward form: solve h (Pi_{k+1} - (h/2) M_{k+1})^ = J_d F_k - F_k^T J_d,
# then R_k = R_{k+1} F_k^T and the mirrored momentum update.


def _jd_diag(p: SO3Params):
    j = p.j_diag
    return 0.5 * j.sum() - j


def _rodrigues_with_jr(f):
    """exp_rot(f) and the right Jacobian J_r (d exp(f)/df trivialization)."""
    theta2 = float(np.dot(f, f))
    fh = geom.hat(f)
    fh2 = fh @ fh
    if theta2 < 1e-16:
        e = np.eye(3) + fh + 0.5 * fh2
        jr = np.eye(3) - 0.5 * fh + fh2 / 6.0
        return e, jr
    theta = np.sqrt(theta2)
    s, c = np.sin(theta), np.cos(theta)
    e = np.eye(3) + (s / theta) * fh + ((1.0 - c) / theta2) * fh2
    jr = (np.eye(3) - ((1.0 - c) / theta2) * fh
          + ((theta - s) / (theta2 * theta)) * fh2)
    return e, jr


def so3_solve_relative_rotation(a, jd, newton_tol=1e-14, newton_max_iters=50,
                                f0=None):
    """Solve (J_d F - F^T J_d)^vee = a for the rotation F = exp_rot(f).

    Newton iteration on f in R^3 with the analytic Rodrigues Jacobian.
    Leading order gives J f = a, so the default initial guess is J^-1 a
    with J recovered from the diagonal of J_d.
    """
    a = np.asarray(a, dtype=float)
    jd = np.asarray(jd, dtype=float)
    jd_diag = np.diag(jd)
    j_diag = jd_diag.sum() - jd_diag  # J = tr[J_d] I - J_d
    f = np.array(f0, dtype=float) if f0 is not None else a / j_diag
    scale = max(np.linalg.norm(a), 1.0)
    for _ in range(newton_max_iters):
        e, jr = _rodrigues_with_jr(f)
        m = jd @ e
        g = np.array([m[2, 1] - m[1, 2], m[0, 2] - m[2, 0], m[1, 0] - m[0, 1]]) - a
        if np.linalg.norm(g) <= newton_tol * scale:
            return geom.normalize_rotation(e)
        jac = np.empty((3, 3))
        for i in range(3):
            w = geom.hat(jr[:, i])
            d = jd @ e @ w + w @ e.T @ jd
            jac[:, i] = (d[2, 1], d[0, 2], d[1, 0])
        try:
            f = f - np.linalg.solve(jac, g)
        except np.linalg.LinAlgError as exc:
            raise NewtonDiverged(f"singular Newton Jacobian: {exc}") from exc
    raise NewtonDiverged(
        f"no convergence after {newton_max_iters} iterations, "
        f"residual {np.linalg.norm(g):.3e}")


def _so3_backward_arrays(R1, Pi1, h, p, jd, newton_tol, newton_max_iters):
    j = p.j_diag
    m1 = so3_reduced_moment(R1, Pi1 / j, p)
    rhs = Pi1 - 0.5 * h * m1
    f = so3_solve_relative_rotation(h * rhs, jd, newton_tol, newton_max_iters)
    R0 = R1 @ f.T
    e_r0 = geom.attitude_error_vector(R0, p.Rd, p.G)
    denom = 1.0 - 0.5 * h * p.kOmega / j
    Pi0 = (f @ rhs + 0.5 * h * p.kR * e_r0) / denom
    return R0, Pi0


def _so3_forward_arrays(R0, Pi0, h, p, jd, newton_tol, newton_max_iters):
    j = p.j_diag
    m0 = so3_reduced_moment(R0, Pi0 / j, p)
    rhs = Pi0 + 0.5 * h * m0
    # F J_d - J_d F^T = hat(h rhs)  <=>  J_d K - K^T J_d = hat(-h rhs), F = K^T
    k = so3_solve_relative_rotation(-h * rhs, jd, newton_tol, newton_max_iters)
    f = k.T
    R1 = R0 @ f
    e_r1 = geom.attitude_error_vector(R1, p.Rd, p.G)
    denom = 1.0 + 0.5 * h * p.kOmega / j
    Pi1 = (f.T @ rhs - 0.5 * h * p.kR * e_r1) / denom
    return R1, Pi1


def so3_step_backward(s_next: MomentumState, spec: StepSpec, p: SO3Params):
    """One backward step on (R, Pi)."""
    spec.check_so3(p)
    R0, Pi0 = _so3_backward_arrays(s_next.R, s_next.Pi, spec.h, p, _jd_diag_mat(p),
                                   spec.newton_tol, spec.newton_max_iters)
    return MomentumState(R0, Pi0, check=False)


def so3_step_forward(s: MomentumState, spec: StepSpec, p: SO3Params):
    """One forward step on (R, Pi); exact inverse of so3_step_backward."""
    spec.check_so3(p)
    R1, Pi1 = _so3_forward_arrays(s.R, s.Pi, spec.h, p, _jd_diag_mat(p),
                                  spec.newton_tol, spec.newton_max_iters)
    return MomentumState(R1, Pi1, check=False)


def _jd_diag_mat(p: SO3Params):
    return np.diag(_jd_diag(p))


# Whole-trajectory flows -------------------------------------------------------


def _num_steps(T, h):
    n = T / h
    if abs(n - round(n)) > 1e-9:
        raise ValueError(f"duration {T} is not an integer multiple of h = {h}")
    return int(round(n))


def flow(state, T, spec: StepSpec, p, stride=1):
    """Apply N = T/h steps of the selected direction, recording every
    `stride`-th state (the initial and final states are always stored).

    Accepts TangentStateS2 with S2Params, or TangentStateSO3 /
    MomentumState with SO3Params. Step failures propagate with the
    failing step index attached.
    """
    n = _num_steps(T, spec.h)
    if isinstance(p, S2Params):
        return _flow_s2(state, n, spec, p, stride)
    if isinstance(p, SO3Params):
        return _flow_so3(state, n, spec, p, stride)
    raise TypeError(f"unsupported parameter type {type(p)!r}")


def _flow_s2(state: TangentStateS2, n, spec, p, stride):
    spec.check_s2(p)
    step = _s2_backward_arrays if spec.direction == "backward" else _s2_forward_arrays
    q, w = state.q.copy(), state.omega.copy()
    times = [0.0]
    states = [TangentStateS2(q, w, check=False)]
    for k in range(n):
        try:
            q, w = step(q, w, spec.h, p)
        except StepTooLarge as exc:
            raise StepTooLarge(f"step {k + 1}: {exc}") from exc
        if (k + 1) % stride == 0 or k + 1 == n:
            times.append((k + 1) * spec.h)
            states.append(TangentStateS2(q, w, check=False))
    return Trajectory(times=np.array(times), states=states,
                      direction=spec.direction)


def _flow_so3(state, n, spec, p, stride):
    spec.check_so3(p)
    as_tangent = isinstance(state, TangentStateSO3)
    if as_tangent:
        state = MomentumState.from_tangent(state, p)
    jd = _jd_diag_mat(p)
    step = (_so3_backward_arrays if spec.direction == "backward"
            else _so3_forward_arrays)
    R, Pi = state.R.copy(), state.Pi.copy()

    def record(R, Pi):
        s = MomentumState(R, Pi, check=False)
        return s.to_tangent(p) if as_tangent else s

    times = [0.0]
    states = [record(R, Pi)]
    for k in range(n):
        try:
            R, Pi = step(R, Pi, spec.h, p, jd, spec.newton_tol,
                         spec.newton_max_iters)
        except NewtonDiverged as exc:
            raise NewtonDiverged(f"step {k + 1}: {exc}") from exc
        if (k + 1) % stride == 0 or k + 1 == n:
            times.append((k + 1) * spec.h)
            states.append(record(R, Pi))
    return Trajectory(times=np.array(times), states=states,
                      direction=spec.direction)
