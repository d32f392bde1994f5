"""Sphere figures from trajectory bundles.

One sphere per figure. For S^2 bundles each seed's direction path is a
curve on the sphere; for SO(3) bundles the three columns of R (the body
axes resolved in the inertial frame) each trace a curve. Curves are
colored by angular speed against a shared [0, max] scale, with the
maximum taken over the rendered time window so the colorbar matches the
bundle's slice statistics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import LineCollection
from mpl_toolkits.mplot3d.art3d import Line3DCollection

from .io import Bundle, load_bundle

MAX_POINTS_PER_CURVE = 5000


@dataclass
class RenderSpec:
    """What to draw: bundle file, time cutoff, output image, camera."""

    bundle: str
    out: str
    t: Optional[float] = None          # render up to this time (default: all)
    view: Tuple[float, float] = (22.0, -58.0)   # elevation, azimuth (deg)
    dpi: int = 150

    def load(self) -> Bundle:
        return load_bundle(self.bundle)


def _window(bundle, seed, cutoff):
    mask = (bundle.times[seed] <= cutoff + 1e-9 if cutoff is not None
            else np.ones(len(bundle.times[seed]), dtype=bool))
    return bundle.configs[seed][mask], bundle.speeds[seed][mask]


def _decimate(points, speeds):
    n = len(points)
    if n <= MAX_POINTS_PER_CURVE:
        return points, speeds
    k = int(np.ceil(n / MAX_POINTS_PER_CURVE))
    idx = np.unique(np.concatenate([np.arange(0, n, k), [n - 1]]))
    return points[idx], speeds[idx]


def _new_sphere_axes(view):
    fig = plt.figure(figsize=(6.0, 6.0))
    ax = fig.add_subplot(projection="3d", computed_zorder=False)
    u = np.linspace(0.0, 2.0 * np.pi, 60)
    v = np.linspace(0.0, np.pi, 30)
    x = np.outer(np.cos(u), np.sin(v))
    y = np.outer(np.sin(u), np.sin(v))
    z = np.outer(np.ones_like(u), np.cos(v))
    ax.plot_surface(x, y, z, color="#f2f2f2", alpha=0.25, linewidth=0,
                    antialiased=False, shade=False)
    ax.set_box_aspect((1, 1, 1))
    ax.set_xlim(-1.05, 1.05)
    ax.set_ylim(-1.05, 1.05)
    ax.set_zlim(-1.05, 1.05)
    ax.set_axis_off()
    ax.view_init(elev=view[0], azim=view[1])
    return fig, ax


def _add_curve(ax, points, speeds, norm, cmap):
    points, speeds = _decimate(points, speeds)
    if len(points) == 1:
        ax.scatter(*points[0], c=[speeds[0]], cmap=cmap, norm=norm, s=18)
        return
    segs = np.stack([points[:-1], points[1:]], axis=1)
    lc = Line3DCollection(segs, cmap=cmap, norm=norm, linewidths=0.9)
    lc.set_array(0.5 * (speeds[:-1] + speeds[1:]))
    ax.add_collection3d(lc)


def _finish(fig, ax, norm, cmap, spec, labels):
    for text, pos in labels.items():
        ax.text(*(1.18 * np.asarray(pos)), text, fontsize=11,
                ha="center", va="center")
    mappable = plt.cm.ScalarMappable(norm=norm, cmap=cmap)
    mappable.set_array([])
    cbar = fig.colorbar(mappable, ax=ax, shrink=0.6, pad=0.02)
    cbar.set_label(r"$\|\omega\|$ (rad/s)")
    fig.savefig(spec.out, dpi=spec.dpi)
    plt.close(fig)


def render_s2(spec: RenderSpec) -> dict:
    """Draw every seed's direction path on one sphere, speed-shaded.

    Returns {"out", "n_seeds", "max_speed"}; the colorbar maximum equals
    max_speed over the rendered window.
    """
    bundle = spec.load()
    if bundle.model != "s2":
        raise ValueError("render_s2 needs an S^2 bundle (records with 'q'); "
                         "got an SO(3) bundle")
    vmax = bundle.max_speed(spec.t)
    norm = plt.Normalize(vmin=0.0, vmax=vmax if vmax > 0.0 else 1.0)
    cmap = plt.get_cmap("turbo")
    fig, ax = _new_sphere_axes(spec.view)
    for seed in bundle.seeds:
        points, speeds = _window(bundle, seed, spec.t)
        if len(points):
            _add_curve(ax, points, speeds, norm, cmap)
    _finish(fig, ax, norm, cmap, spec,
            {"$e_1$": (1, 0, 0), "$e_2$": (0, 1, 0), "$-e_3$": (0, 0, -1)})
    return {"out": spec.out, "n_seeds": len(bundle.seeds), "max_speed": vmax}


def render_so3(spec: RenderSpec) -> dict:
    """Trace the three body axes (columns of R) of every seed on one
    sphere, speed-shaded.

    Returns {"out", "n_seeds", "max_speed"}.
    """
    bundle = spec.load()
    if bundle.model != "so3":
        raise ValueError("render_so3 needs an SO(3) bundle (records with "
                         "'R'); got an S^2 bundle")
    vmax = bundle.max_speed(spec.t)
    norm = plt.Normalize(vmin=0.0, vmax=vmax if vmax > 0.0 else 1.0)
    cmap = plt.get_cmap("turbo")
    fig, ax = _new_sphere_axes(spec.view)
    for seed in bundle.seeds:
        mats, speeds = _window(bundle, seed, spec.t)
        for col in range(3):
            if len(mats):
                _add_curve(ax, mats[:, :, col], speeds, norm, cmap)
    _finish(fig, ax, norm, cmap, spec,
            {"$e_1$": (1, 0, 0), "$e_2$": (0, 1, 0), "$e_3$": (0, 0, 1)})
    return {"out": spec.out, "n_seeds": len(bundle.seeds), "max_speed": vmax}


def render(spec: RenderSpec) -> dict:
    """Dispatch on the bundle's model."""
    bundle = spec.load()
    return (render_s2 if bundle.model == "s2" else render_so3)(spec)
