"""Coordinate-free linearized dynamics about arbitrary states.

The linearized state is x = [xi; dw] in R^6, where xi generates the
configuration variation (q -> exp(eps hat(xi)) q on S^2,
R -> R exp(eps hat(eta)) on SO(3)) and dw perturbs the angular velocity.
For S^2 the admissible variations form the null space of a 2x6 constraint
matrix C, which is flow-invariant.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import geom
from .geom import TangentStateS2, TangentStateSO3
from .models import S2Params, SO3Params


@dataclass
class LinearizedSystem:
    """6x6 system matrix A, optional 2x6 constraint C, and the base state."""

    A: np.ndarray
    C: Optional[np.ndarray]
    base: object


def c_matrix_s2(s: TangentStateS2):
    """Constraint rows [q^T, 0] and [-w^T hat(q), q^T]; C x = 0 on T S^2."""
    c = np.zeros((2, 6))
    c[0, :3] = s.q
    c[1, :3] = -s.omega @ geom.hat(s.q)
    c[1, 3:] = s.q
    return c


def a_matrix_s2(s: TangentStateS2, p: S2Params):
    """Linearized closed loop on S^2.

    Blocks: [[q q^T hat(w), I - q q^T], [kq hat(q_d) hat(q), -kw I]].
    """
    q = s.q
    a = np.zeros((6, 6))
    a[:3, :3] = np.outer(q, q) @ geom.hat(s.omega)
    a[:3, 3:] = np.eye(3) - np.outer(q, q)
    a[3:, :3] = p.kq * geom.hat(p.qd) @ geom.hat(q)
    a[3:, 3:] = -p.komega * np.eye(3)
    return LinearizedSystem(A=a, C=c_matrix_s2(s), base=s)


def h_matrix_so3(R, p: SO3Params):
    """H = tr[R^T R_d G] I - R^T R_d G, the attitude-error Hessian block."""
    m = R.T @ p.Rd @ p.G
    return np.trace(m) * np.eye(3) - m


def a_matrix_so3(s: TangentStateSO3, p: SO3Params):
    """Linearized closed loop on SO(3).

    Blocks: [[-hat(W), I],
             [-kR/2 J^-1 H, J^-1 (hat(JW) - hat(W) J - kW I)]].
    """
    j = p.j_diag
    j_inv = 1.0 / j
    w = s.Omega
    a = np.zeros((6, 6))
    a[:3, :3] = -geom.hat(w)
    a[:3, 3:] = np.eye(3)
    a[3:, :3] = -0.5 * p.kR * j_inv[:, None] * h_matrix_so3(s.R, p)
    a[3:, 3:] = j_inv[:, None] * (geom.hat(j * w) - geom.hat(w) @ p.J
                                  - p.kOmega * np.eye(3))
    return LinearizedSystem(A=a, C=None, base=s)
