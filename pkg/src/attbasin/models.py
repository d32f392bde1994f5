"""Closed-loop pendulum models on S^2 and SO(3).

Both controllers cancel gravity exactly, so the closed-loop fields depend
only on the gains (and, for the 3D pendulum, the inertia and attitude
weights). Mass/length/gravity defaults affect only the reported control
moment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geom
from .geom import TangentStateS2, TangentStateSO3


def _e3():
    return np.array([0.0, 0.0, 1.0])


@dataclass
class S2Params:
    """Spherical-pendulum parameters and controller gains."""

    m: float = 1.0          # kg
    l: float = 1.0          # m
    g: float = 9.81         # m/s^2
    kq: float = 1.0
    komega: float = 1.0
    qd: np.ndarray = field(default_factory=_e3)

    def __post_init__(self):
        for name in ("m", "l", "g", "kq", "komega"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"{name} must be positive")
        self.qd = geom.normalize_unit(self.qd)


@dataclass
class SO3Params:
    """3D-pendulum parameters and controller gains.

    J and G are stored as 3x3 diagonal matrices.
    """

    J: np.ndarray = field(default_factory=lambda: np.diag([3.0, 2.0, 1.0]))
    rho: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 0.5]))
    m: float = 1.0
    g: float = 9.81
    G: np.ndarray = field(default_factory=lambda: np.diag([0.9, 1.0, 1.1]))
    kR: float = 1.0
    kOmega: float = 1.0
    Rd: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        self.J = np.asarray(self.J, dtype=float)
        self.G = np.asarray(self.G, dtype=float)
        for name in ("J", "G"):
            mat = getattr(self, name)
            if mat.shape != (3, 3) or np.any(mat != np.diag(np.diag(mat))) \
                    or np.any(np.diag(mat) <= 0.0):
                raise ValueError(f"{name} must be diagonal with positive entries")
        if self.kR <= 0.0 or self.kOmega <= 0.0:
            raise ValueError("gains must be positive")
        self.rho = np.asarray(self.rho, dtype=float)
        self.Rd = geom.normalize_rotation(self.Rd)

    @property
    def j_diag(self):
        return np.diag(self.J)


def s2_control_moment(s: TangentStateS2, p: S2Params):
    """Control moment u (N m) of the stabilizing PD law on S^2."""
    ml2 = p.m * p.l**2
    return ml2 * (-p.komega * s.omega - p.kq * np.cross(p.qd, s.q)
                  - (p.g / p.l) * np.cross(s.q, geom.E3))


def s2_vector_field(s: TangentStateS2, p: S2Params):
    """Closed-loop field: returns (dq/dt, domega/dt)."""
    domega = -p.komega * s.omega - p.kq * np.cross(p.qd, s.q)
    dq = np.cross(s.omega, s.q)
    return dq, domega


def so3_control_moment(s: TangentStateSO3, p: SO3Params):
    """Control moment u (N m) of the stabilizing PD law on SO(3)."""
    e_r = geom.attitude_error_vector(s.R, p.Rd, p.G)
    gravity = p.m * p.g * np.cross(p.rho, s.R.T @ geom.E3)
    return -p.kR * e_r - p.kOmega * s.Omega - gravity


def so3_reduced_moment(R, Omega, p: SO3Params):
    """Closed-loop moment u + m g rho x R^T e3 = -kR e_R - kOmega Omega.

    Gravity cancels analytically, so the reduced form is used everywhere
    the closed loop is integrated.
    """
    e_r = geom.attitude_error_vector(R, p.Rd, p.G)
    return -p.kR * e_r - p.kOmega * Omega


def so3_vector_field(s: TangentStateSO3, p: SO3Params):
    """Closed-loop field: returns (Omega as attitude generator, dOmega/dt)."""
    j = p.j_diag
    moment = so3_reduced_moment(s.R, s.Omega, p)
    domega = (moment - np.cross(s.Omega, j * s.Omega)) / j
    return s.Omega.copy(), domega


def lyapunov_s2(s: TangentStateS2, p: S2Params):
    """V = 0.5 w.w + kq Psi(q, q_d); zero only at the desired equilibrium."""
    return 0.5 * float(np.dot(s.omega, s.omega)) + p.kq * geom.psi_s2(s.q, p.qd)


def lyapunov_so3(s: TangentStateSO3, p: SO3Params):
    """V = 0.5 W.JW + kR Psi(R, R_d); zero only at the desired equilibrium."""
    return (0.5 * float(np.dot(s.Omega, p.j_diag * s.Omega))
            + p.kR * geom.psi_so3(s.R, p.Rd, p.G))


def equilibria(model, p):
    """All equilibrium states of the closed loop.

    S^2: the desired direction and its antipode. SO(3): the desired
    attitude and its 180-degree rotations about each body axis.
    """
    zero = np.zeros(3)
    if model == "s2":
        return [TangentStateS2(p.qd, zero), TangentStateS2(-p.qd, zero)]
    if model == "so3":
        states = [TangentStateSO3(p.Rd, zero)]
        for i in range(3):
            axis = np.zeros(3)
            axis[i] = np.pi
            states.append(TangentStateSO3(p.Rd @ geom.exp_rot(axis), zero))
        return states
    raise ValueError(f"unknown model {model!r}")


# Flat key=value configuration files ----------------------------------------

_S2_KEYS = {"m", "l", "g", "kq", "komega", "qd"}
_SO3_KEYS = {"m", "g", "kR", "kOmega", "J1", "J2", "J3", "G1", "G2", "G3",
             "rho", "Rd"}


def parse_config(text):
    """Parse a flat key=value config; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _vec3(text):
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"expected three comma-separated floats, got {text!r}")
    return np.array(parts)


def params_from_config(cfg, model=None):
    """Build S2Params or SO3Params from a parsed config dict.

    The model is taken from cfg['model'] unless given explicitly.
    """
    model = model or cfg.get("model")
    if model == "s2":
        kwargs = {}
        for key in ("m", "l", "g", "kq", "komega"):
            if key in cfg:
                kwargs[key] = float(cfg[key])
        if "qd" in cfg:
            kwargs["qd"] = geom.normalize_unit(
                _vec3(cfg["qd"]) / np.linalg.norm(_vec3(cfg["qd"])))
        return S2Params(**kwargs)
    if model == "so3":
        kwargs = {}
        for key in ("m", "g", "kR", "kOmega"):
            if key in cfg:
                kwargs[key] = float(cfg[key])
        if all(f"J{i}" in cfg for i in (1, 2, 3)):
            kwargs["J"] = np.diag([float(cfg[f"J{i}"]) for i in (1, 2, 3)])
        if all(f"G{i}" in cfg for i in (1, 2, 3)):
            kwargs["G"] = np.diag([float(cfg[f"G{i}"]) for i in (1, 2, 3)])
        if "rho" in cfg:
            kwargs["rho"] = _vec3(cfg["rho"])
        if "Rd" in cfg:
            kwargs["Rd"] = geom.exp_rot(_vec3(cfg["Rd"]))  # axis-angle
        return SO3Params(**kwargs)
    raise ValueError(f"unknown or missing model {model!r}")
