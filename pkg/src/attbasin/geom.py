"""Primitives on the rotation group SO(3) and the two-sphere S^2.

Conventions: vectors are numpy arrays of shape (3,), rotations are 3x3
matrices acting on column vectors. Rotation defects are measured in the
Frobenius norm.
"""

from __future__ import annotations

import numpy as np

from .errors import BadGains, NotSkew

# Validation tolerances. Constructors re-normalize when the defect is
# within 10x the tolerance and reject otherwise.
UNIT_TOL = 1e-12
ROT_TOL = 1e-10
TANGENT_TOL = 1e-10
SKEW_TOL = 1e-9

E1 = np.array([1.0, 0.0, 0.0])
E2 = np.array([0.0, 1.0, 0.0])
E3 = np.array([0.0, 0.0, 1.0])


def hat(v):
    """Map a 3-vector to the skew matrix with hat(v) @ y == cross(v, y)."""
    v = np.asarray(v, dtype=float)
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


def vee(m):
    """Inverse of hat(). Raises NotSkew if m is not skew within SKEW_TOL."""
    m = np.asarray(m, dtype=float)
    if np.linalg.norm(m + m.T) > SKEW_TOL:
        raise NotSkew(f"matrix is not skew-symmetric: |m + m^T| = "
                      f"{np.linalg.norm(m + m.T):.3e}")
    return np.array([m[2, 1], m[0, 2], m[1, 0]])


def exp_rot(v):
    """Rodrigues formula: rotation by angle |v| about axis v/|v|.

    A series branch below |v| = 1e-8 avoids sin(t)/t cancellation.
    """
    v = np.asarray(v, dtype=float)
    theta = np.linalg.norm(v)
    vh = hat(v)
    if theta < 1e-8:
        a = 1.0 - theta**2 / 6.0
        b = 0.5 - theta**2 / 24.0
    else:
        a = np.sin(theta) / theta
        b = (1.0 - np.cos(theta)) / theta**2
    return np.eye(3) + a * vh + b * (vh @ vh)


def tangent_project(q, v):
    """Orthogonal projection of v onto the plane normal to the unit vector q.

    Equals -hat(q)^2 applied to v.
    """
    q = np.asarray(q, dtype=float)
    v = np.asarray(v, dtype=float)
    return v - np.dot(q, v) * q


def psi_s2(q, qd):
    """Projected distance 1 - q . q_d between two directions; range [0, 2].

    Evaluated as 0.5 |q - q_d|^2 (identical on unit vectors), which is
    free of cancellation near q = q_d.
    """
    q = np.asarray(q, dtype=float)
    qd = np.asarray(qd, dtype=float)
    d = q - qd
    return 0.5 * float(np.dot(d, d))


def _check_weights(g):
    g = np.asarray(g, dtype=float)
    if g.shape != (3, 3) or np.any(np.abs(g - np.diag(np.diag(g))) > 0.0) \
            or np.any(np.diag(g) <= 0.0):
        raise BadGains("weight matrix must be diagonal with positive entries")
    return g


def psi_so3(r, rd, g):
    """Attitude error 0.5 * tr[(I - R_d^T R) G]; zero iff r == rd.

    Evaluated columnwise as 0.25 * sum_i g_i |rd_i - r_i|^2 (identical for
    rotations, since 1 - rd_i . r_i = 0.5 |rd_i - r_i|^2 on unit columns),
    which is free of cancellation near r == rd.
    """
    g = _check_weights(g)
    r = np.asarray(r, dtype=float)
    rd = np.asarray(rd, dtype=float)
    d = rd - r
    return 0.25 * float(np.sum(np.diag(g) * np.sum(d * d, axis=0)))


def attitude_error_vector(r, rd, g):
    """Attitude error vector 0.5 * vee(G R_d^T R - R^T R_d G)."""
    g = _check_weights(g)
    r = np.asarray(r, dtype=float)
    rd = np.asarray(rd, dtype=float)
    m = g @ rd.T @ r - r.T @ rd @ g
    return 0.5 * np.array([m[2, 1], m[0, 2], m[1, 0]])


def normalize_unit(q, tol=UNIT_TOL):
    """Validate a unit vector, re-normalizing defects within 10x tol."""
    q = np.asarray(q, dtype=float)
    if q.shape != (3,) or not np.all(np.isfinite(q)):
        raise ValueError("unit vector must be a finite 3-vector")
    defect = abs(np.linalg.norm(q) - 1.0)
    if defect > 10.0 * tol:
        raise ValueError(f"not a unit vector: | |q| - 1 | = {defect:.3e}")
    return q / np.linalg.norm(q)


def normalize_rotation(r, tol=ROT_TOL):
    """Validate a rotation matrix, re-orthonormalizing within 10x tol."""
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3) or not np.all(np.isfinite(r)):
        raise ValueError("rotation must be a finite 3x3 matrix")
    defect = np.linalg.norm(r.T @ r - np.eye(3))
    if defect > 10.0 * tol or abs(np.linalg.det(r) - 1.0) > 10.0 * tol:
        raise ValueError(f"not a rotation matrix: |R^T R - I| = {defect:.3e}, "
                         f"det = {np.linalg.det(r):.12f}")
    if defect > tol:
        u, _, vt = np.linalg.svd(r)
        r = u @ vt
    return r


class TangentStateS2:
    """A point (q, omega) of the tangent bundle of S^2, with q . omega = 0."""

    __slots__ = ("q", "omega")

    def __init__(self, q, omega, check=True):
        if check:
            q = normalize_unit(q)
            omega = np.asarray(omega, dtype=float)
            if not np.all(np.isfinite(omega)):
                raise ValueError("omega must be finite")
            if abs(np.dot(q, omega)) > 10.0 * TANGENT_TOL:
                raise ValueError(
                    f"omega not tangent at q: q.omega = {np.dot(q, omega):.3e}")
            omega = tangent_project(q, omega)
        else:
            q = np.asarray(q, dtype=float)
            omega = np.asarray(omega, dtype=float)
        self.q = q
        self.omega = omega

    def __repr__(self):
        return f"TangentStateS2(q={self.q.tolist()}, omega={self.omega.tolist()})"


class TangentStateSO3:
    """A point (R, Omega) of the tangent bundle of SO(3)."""

    __slots__ = ("R", "Omega")

    def __init__(self, R, Omega, check=True):
        if check:
            R = normalize_rotation(R)
            Omega = np.asarray(Omega, dtype=float)
            if not np.all(np.isfinite(Omega)):
                raise ValueError("Omega must be finite")
        else:
            R = np.asarray(R, dtype=float)
            Omega = np.asarray(Omega, dtype=float)
        self.R = R
        self.Omega = Omega

    def __repr__(self):
        return f"TangentStateSO3(R={self.R.tolist()}, Omega={self.Omega.tolist()})"


def dist_ts2(a, b):
    """Distance sqrt(Psi(q1, q2)) + |w1 - w2| on the tangent bundle of S^2."""
    return np.sqrt(psi_s2(a.q, b.q)) + float(np.linalg.norm(a.omega - b.omega))


def dist_tso3(a, b, g):
    """Distance sqrt(Psi(R1, R2; G)) + |W1 - W2| on the tangent bundle of SO(3)."""
    return np.sqrt(psi_so3(a.R, b.R, g)) + float(np.linalg.norm(a.Omega - b.Omega))
