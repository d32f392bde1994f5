"""Globalization of stable manifolds by backward-time integration.

A delta-ball of seed states is placed in the stable eigenspace of a
saddle equilibrium, each seed is integrated backward with the
structure-preserving steps, and the resulting trajectory bundle is
sliced, validated, and exported.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import geom, integrators, linearization, spectral
from .errors import (AttbasinError, BadRadius, EmptySubspace, TimeNotStored)
from .geom import TangentStateS2, TangentStateSO3
from .models import S2Params, SO3Params, equilibria
from .integrators import StepSpec

SEED_DISTANCE_RTOL = 1e-3


@dataclass
class SeedBall:
    """Seeds at distance delta from a saddle, in its stable eigenspace."""

    model: str               # "s2" | "so3"
    equilibrium: object      # TangentStateS2 | TangentStateSO3
    delta: float
    seeds: list
    coords: list             # theta (S^2) or unit alpha-direction (SO(3))


@dataclass
class ManifoldBundle:
    """Backward trajectories from a seed ball on a shared time grid."""

    model: str
    equilibrium: object
    delta: float
    h: float
    stride: int
    times: np.ndarray                   # stored grid, ascending from 0
    trajectories: list                  # per seed: list of states
    failures: dict = field(default_factory=dict)   # seed -> (step, message)
    metadata: dict = field(default_factory=dict)

    @property
    def n_seeds(self):
        return len(self.trajectories)


@dataclass
class SliceStats:
    """States and the maximum angular speed at one stored time."""

    t: float
    states: dict             # seed index -> state
    max_speed: float


def _speed(state):
    w = state.omega if isinstance(state, TangentStateS2) else state.Omega
    return float(np.linalg.norm(w))


# Seed construction -----------------------------------------------------------


def _orthonormal_complement(q):
    """Deterministic orthonormal pair spanning the plane normal to q."""
    pick = np.array([0.0, 0.0, 1.0]) if abs(q[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    b1 = np.cross(pick, q)
    b1 /= np.linalg.norm(b1)
    return b1, np.cross(q, b1)


def build_seed_ball_s2(p: S2Params, delta: float, n: int) -> SeedBall:
    """Seeds on the circle of radius delta in the inverted saddle's
    stable eigenspace, at uniformly spaced angles theta_j = 2 pi j / n.

    Configuration: q = exp_rot(a1 b1 + a2 b2) (-q_d) with (b1, b2) an
    orthonormal frame normal to q_d; velocity: the stable eigenvalue
    times the tangent projection of a1 b1 + a2 b2.
    """
    if not 0.0 < delta <= 0.1:
        raise BadRadius(f"delta must lie in (0, 0.1], got {delta}")
    if n < 4:
        raise ValueError("need at least 4 seeds")
    lam = 0.5 * (-p.komega - np.sqrt(p.komega**2 + 4.0 * p.kq))
    kappa = delta / (1.0 / np.sqrt(2.0) + abs(lam))
    if abs(p.qd[2]) > 0.999999:
        b1, b2 = np.array([1.0, 0.0, 0.0]), np.array([0.0, np.sign(p.qd[2]), 0.0])
    else:
        b1, b2 = _orthonormal_complement(p.qd)
    eq = TangentStateS2(-p.qd, np.zeros(3))
    seeds, coords = [], []
    for j in range(n):
        theta = 2.0 * np.pi * j / n
        alpha = kappa * (np.cos(theta) * b1 + np.sin(theta) * b2)
        q = geom.exp_rot(alpha) @ (-p.qd)
        omega = lam * geom.tangent_project(q, alpha)
        seed = TangentStateS2(q, omega)
        d = geom.dist_ts2(seed, eq)
        if abs(d - delta) > SEED_DISTANCE_RTOL * delta:
            raise BadRadius(f"seed {j} landed at distance {d:.3e}, not {delta:.3e}")
        seeds.append(seed)
        coords.append(theta)
    return SeedBall(model="s2", equilibrium=eq, delta=delta, seeds=seeds,
                    coords=coords)


def _stable_modes_so3(eq_state: TangentStateSO3, p: SO3Params):
    """(axis index, eigenvalue) per stable mode at a decoupled equilibrium."""
    lin = linearization.a_matrix_so3(eq_state, p)
    e = spectral.eigen_decompose(lin.A)
    basis = spectral.stable_subspace(e)
    modes = []
    for k in range(basis.dim):
        lam = basis.eigenvalues[k]
        if abs(lam.imag) > 1e-12:
            raise EmptySubspace("stable modes are not real at this equilibrium")
        v = basis.vectors[:, k]
        axis = int(np.argmax(np.abs(v[:3])))
        modes.append((axis, float(lam.real)))
    return modes


def _sphere_points(d, n):
    """n deterministic, roughly uniform points on the unit sphere S^{d-1}."""
    if d == 2:
        theta = 2.0 * np.pi * np.arange(n) / n
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if d == 3:
        # spherical Fibonacci lattice
        golden = (1.0 + np.sqrt(5.0)) / 2.0
        i = np.arange(n) + 0.5
        z = 1.0 - 2.0 * i / n
        r = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        phi = 2.0 * np.pi * i / golden
        return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    # d >= 4: low-discrepancy points mapped through the Gaussian quantile
    from scipy.stats import norm, qmc
    sampler = qmc.Halton(d=d, scramble=False)
    sampler.fast_forward(1)  # skip the origin
    pts = norm.ppf(sampler.random(n))
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def _so3_seed_state(eq_r, modes, alpha, p):
    r_vec = np.zeros(3)
    omega = np.zeros(3)
    for (axis, lam), a in zip(modes, alpha):
        r_vec[axis] += a
        omega[axis] += lam * a
    return TangentStateSO3(eq_r @ geom.exp_rot(r_vec), omega, check=False)


def build_seed_ball_so3(equilibrium_index: int, p: SO3Params, delta: float,
                        n: int) -> SeedBall:
    """Seeds at distance delta from the saddle R_d exp(pi e_i).

    Directions are sampled deterministically on the unit sphere of the
    stable coefficient space (dimension 3, 4, 5 for i = 1, 2, 3) and
    scaled by bisection until the tangent-bundle distance equals delta.
    """
    if equilibrium_index not in (1, 2, 3):
        raise ValueError("equilibrium index must be 1, 2, or 3")
    if not 0.0 < delta <= 0.1:
        raise BadRadius(f"delta must lie in (0, 0.1], got {delta}")
    eq = equilibria("so3", p)[equilibrium_index]
    modes = _stable_modes_so3(eq, p)
    d = len(modes)
    if n < 2 * d:
        raise ValueError(f"need at least {2 * d} seeds for a {d}-dim eigenspace")
    dirs = _sphere_points(d, n)
    seeds, coords = [], []
    for u in dirs:
        scale = _bisect_scale(
            lambda s: geom.dist_tso3(_so3_seed_state(eq.R, modes, s * u, p),
                                     eq, p.G),
            delta)
        st = _so3_seed_state(eq.R, modes, scale * u, p)
        seeds.append(TangentStateSO3(st.R, st.Omega))
        coords.append(u.copy())
    return SeedBall(model="so3", equilibrium=eq, delta=delta, seeds=seeds,
                    coords=coords)


def _bisect_scale(dist_of_scale, delta, max_iters=60):
    """Scale factor s with dist(s) = delta, to within 1e-3 * delta."""
    hi = delta
    for _ in range(40):
        if dist_of_scale(hi) >= delta:
            break
        hi *= 2.0
    else:
        raise BadRadius("could not bracket the seed distance")
    lo = 0.0
    for _ in range(max_iters):
        mid = 0.5 * (lo + hi)
        d = dist_of_scale(mid)
        if abs(d - delta) <= SEED_DISTANCE_RTOL * delta:
            return mid
        if d < delta:
            lo = mid
        else:
            hi = mid
    raise BadRadius("seed-distance bisection did not converge")


# Globalization ----------------------------------------------------------------


def _integrate_seed(args):
    seed_idx, seed, model, n, spec, p, stride = args
    spec = StepSpec(h=spec.h, direction="backward", newton_tol=spec.newton_tol,
                    newton_max_iters=spec.newton_max_iters)
    if model == "s2":
        q, w = seed.q.copy(), seed.omega.copy()
        states = [TangentStateS2(q, w, check=False)]
        failure = None
        for k in range(n):
            try:
                q, w = integrators._s2_backward_arrays(q, w, spec.h, p)
            except AttbasinError as exc:
                failure = (k + 1, str(exc))
                break
            if (k + 1) % stride == 0 or k + 1 == n:
                states.append(TangentStateS2(q, w, check=False))
        return seed_idx, states, failure
    ms = integrators.MomentumState.from_tangent(seed, p)
    jd = integrators._jd_diag_mat(p)
    R, Pi = ms.R, ms.Pi
    states = [seed]
    failure = None
    for k in range(n):
        try:
            R, Pi = integrators._so3_backward_arrays(
                R, Pi, spec.h, p, jd, spec.newton_tol, spec.newton_max_iters)
        except AttbasinError as exc:
            failure = (k + 1, str(exc))
            break
        if (k + 1) % stride == 0 or k + 1 == n:
            states.append(TangentStateSO3(R, Pi / p.j_diag, check=False))
    return seed_idx, states, failure


def globalize(ball: SeedBall, T: float, spec: StepSpec, p, stride=1,
              workers=1) -> ManifoldBundle:
    """Integrate every seed backward for duration T (= N h).

    Per-seed step failures are recorded in bundle.failures and the seed's
    trajectory is truncated; results are merged in seed order regardless
    of worker count.
    """
    n = integrators._num_steps(T, spec.h)
    times = [0.0] + [(k + 1) * spec.h for k in range(n)
                     if (k + 1) % stride == 0 or k + 1 == n]
    jobs = [(i, seed, ball.model, n, spec, p, stride)
            for i, seed in enumerate(ball.seeds)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = sorted(pool.map(_integrate_seed, jobs))
    else:
        results = [_integrate_seed(job) for job in jobs]
    trajectories = [states for _, states, _ in results]
    failures = {i: fail for i, _, fail in results if fail is not None}
    meta = {"n_seeds": len(ball.seeds)}
    if isinstance(p, S2Params):
        meta.update(kq=p.kq, komega=p.komega)
    else:
        meta.update(kR=p.kR, kOmega=p.kOmega, J=p.j_diag.tolist(),
                    G=np.diag(p.G).tolist())
    return ManifoldBundle(model=ball.model, equilibrium=ball.equilibrium,
                          delta=ball.delta, h=spec.h, stride=stride,
                          times=np.array(times), trajectories=trajectories,
                          failures=failures, metadata=meta)


def _time_index(bundle: ManifoldBundle, t: float):
    idx = np.flatnonzero(np.abs(bundle.times - t) <= 1e-9)
    if len(idx) == 0:
        raise TimeNotStored(f"t = {t} not on the stored grid")
    return int(idx[0])


def slice_stats(bundle: ManifoldBundle, t: float) -> SliceStats:
    """Per-seed states and maximum angular speed at a stored time.

    Seeds whose backward run failed before t are excluded.
    """
    idx = _time_index(bundle, t)
    states = {}
    for i, traj in enumerate(bundle.trajectories):
        if idx < len(traj):
            states[i] = traj[idx]
    if not states:
        raise TimeNotStored(f"no seed reached t = {t}")
    max_speed = max(_speed(s) for s in states.values())
    return SliceStats(t=t, states=states, max_speed=max_speed)


def validate_forward(bundle: ManifoldBundle, seed_index: int, t: float,
                     spec: StepSpec, p) -> float:
    """Forward-integrate the backward state at t for duration t and return
    its distance to the equilibrium (should be ~delta by inverse-pair
    exactness)."""
    idx = _time_index(bundle, t)
    traj = bundle.trajectories[seed_index]
    if idx >= len(traj):
        raise TimeNotStored(f"seed {seed_index} failed before t = {t}")
    fwd = StepSpec(h=spec.h, direction="forward", newton_tol=spec.newton_tol,
                   newton_max_iters=spec.newton_max_iters)
    out = integrators.flow(traj[idx], t, fwd, p, stride=max(1, int(round(t / spec.h))))
    final = out.states[-1]
    if bundle.model == "s2":
        return geom.dist_ts2(final, bundle.equilibrium)
    return geom.dist_tso3(final, bundle.equilibrium, p.G)


# Export / import ---------------------------------------------------------------

CSV_COLUMNS_S2 = ["seed", "t", "q1", "q2", "q3", "w1", "w2", "w3", "speed"]
CSV_COLUMNS_SO3 = ["seed", "t", "R11", "R12", "R13", "R21", "R22", "R23",
                   "R31", "R32", "R33", "w1", "w2", "w3", "speed"]


def _records(bundle: ManifoldBundle):
    for i, traj in enumerate(bundle.trajectories):
        for k, state in enumerate(traj):
            t = float(bundle.times[k])
            if bundle.model == "s2":
                yield i, t, state.q, state.omega
            else:
                yield i, t, state.R, state.Omega


def export_bundle(bundle: ManifoldBundle, path, fmt="jsonl"):
    """Write one record per (seed, stored time), seed-major.

    Floats use shortest round-trip decimals, so re-import is bit-exact.
    """
    if fmt == "jsonl":
        with open(path, "w") as fh:
            for i, t, cfg, w in _records(bundle):
                rec = {"seed": i, "t": t}
                if bundle.model == "s2":
                    rec["q"] = cfg.tolist()
                else:
                    rec["R"] = cfg.reshape(-1).tolist()
                rec["omega"] = w.tolist()
                rec["speed"] = float(np.linalg.norm(w))
                fh.write(json.dumps(rec) + "\n")
    elif fmt == "csv":
        cols = CSV_COLUMNS_S2 if bundle.model == "s2" else CSV_COLUMNS_SO3
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(cols)
            for i, t, cfg, w in _records(bundle):
                row = [i, repr(t)]
                row += [repr(x) for x in cfg.reshape(-1)]
                row += [repr(x) for x in w]
                row.append(repr(float(np.linalg.norm(w))))
                writer.writerow(row)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def load_bundle(path) -> ManifoldBundle:
    """Re-import a JSONL bundle written by export_bundle.

    Only the trajectory data is recoverable from the file; gains and the
    equilibrium are not stored and stay unset.
    """
    per_seed = {}
    model = None
    with open(path) as fh:
        for line in fh:
            rec = json.loads(line)
            model = "s2" if "q" in rec else "so3"
            if model == "s2":
                state = TangentStateS2(np.array(rec["q"]),
                                       np.array(rec["omega"]), check=False)
            else:
                state = TangentStateSO3(np.array(rec["R"]).reshape(3, 3),
                                        np.array(rec["omega"]), check=False)
            per_seed.setdefault(rec["seed"], []).append((rec["t"], state))
    if model is None:
        raise ValueError(f"{path}: empty bundle")
    trajectories = []
    times = None
    for seed in sorted(per_seed):
        entries = per_seed[seed]
        trajectories.append([s for _, s in entries])
        seed_times = np.array([t for t, _ in entries])
        if times is None or len(seed_times) > len(times):
            times = seed_times
    h = float(times[1] - times[0]) if len(times) > 1 else 0.0
    return ManifoldBundle(model=model, equilibrium=None, delta=float("nan"),
                          h=h, stride=1, times=times, trajectories=trajectories)
