"""Global stable-manifold analysis of closed-loop attitude dynamics.

Submodules:
    geom          -- S^2 / SO(3) primitives (hat, vee, exp, distances)
    models        -- closed-loop vector fields, Lyapunov functions, equilibria
    linearization -- coordinate-free 6x6 linearized systems
    spectral      -- eigen-structure, classification, subspace bases
    integrators   -- backward/forward variational integrator steps and flows
    manifold      -- seed balls, globalization, slices, export
    cli           -- command-line entry point
"""

from . import geom, models, linearization, spectral, integrators, manifold
from .geom import TangentStateS2, TangentStateSO3
from .models import S2Params, SO3Params
from .integrators import StepSpec, MomentumState, flow
from .manifold import (build_seed_ball_s2, build_seed_ball_so3, globalize,
                       slice_stats, validate_forward, export_bundle,
                       load_bundle)

__version__ = "0.1.0"

__all__ = [
    "geom", "models", "linearization", "spectral", "integrators", "manifold",
    "TangentStateS2", "TangentStateSO3", "S2Params", "SO3Params",
    "StepSpec", "MomentumState", "flow",
    "build_seed_ball_s2", "build_seed_ball_so3", "globalize", "slice_stats",
    "validate_forward", "export_bundle", "load_bundle",
]
