"""Command-line interface.

Subcommands: eigs, simulate, manifold, validate, export. Flags override
config-file values, which override built-in defaults. Exit codes: 0
success, 1 numerical failure, 2 argument error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import geom, linearization, manifold, models, spectral
from .errors import AttbasinError
from .geom import TangentStateS2, TangentStateSO3
from .integrators import StepSpec, flow
from .models import S2Params, SO3Params


def _load_params(args, model):
    cfg = {}
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = models.parse_config(fh.read())
    return models.params_from_config(cfg, model=model)


def _parse_state(text, model):
    """Initial state: 'x,y,z;wx,wy,wz' (direction for s2, axis-angle for so3)."""
    try:
        cfg_part, w_part = text.split(";")
        cfg = np.array([float(x) for x in cfg_part.split(",")])
        w = np.array([float(x) for x in w_part.split(",")])
        if cfg.shape != (3,) or w.shape != (3,):
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            "state must be 'x,y,z;wx,wy,wz' (six floats)")
    if model == "s2":
        q = cfg / np.linalg.norm(cfg)
        return TangentStateS2(q, geom.tangent_project(q, w))
    return TangentStateSO3(geom.exp_rot(cfg), w)


def _positive(name):
    def parse(text):
        value = float(text)
        if value <= 0.0:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return value
    return parse


S2_EQUILIBRIA = {"hanging": 0, "inverted": 1}
SO3_EQUILIBRIA = {"identity": 0, "e1": 1, "e2": 2, "e3": 3}


def cmd_eigs(args):
    p = _load_params(args, args.model)
    if args.model == "s2":
        idx = S2_EQUILIBRIA[args.equilibrium]
        eq = models.equilibria("s2", p)[idx]
        lin = linearization.a_matrix_s2(eq, p)
        e = spectral.eigen_decompose(lin.A)
        cls = spectral.classify_equilibrium(e, lin.C)
    else:
        idx = SO3_EQUILIBRIA[args.equilibrium]
        eq = models.equilibria("so3", p)[idx]
        lin = linearization.a_matrix_so3(eq, p)
        e = spectral.eigen_decompose(lin.A)
        cls = spectral.classify_equilibrium(e)
    print(f"# {args.model} equilibrium '{args.equilibrium}': {cls.label} "
          f"({cls.n_stable} stable / {cls.n_unstable} unstable)")
    print(spectral.format_eigen_table(e))
    return 0


def cmd_simulate(args):
    p = _load_params(args, args.model)
    state = _parse_state(args.state, args.model)
    direction = "forward" if args.direction == "fwd" else "backward"
    spec = StepSpec(h=args.h, direction=direction)
    traj = flow(state, args.T, spec, p, stride=args.stride)
    bundle = manifold.ManifoldBundle(
        model=args.model, equilibrium=None, delta=float("nan"), h=args.h,
        stride=args.stride, times=traj.times, trajectories=[traj.states])
    manifold.export_bundle(bundle, args.out, fmt=args.format)
    print(f"wrote {len(traj.states)} states to {args.out}")
    return 0


def cmd_manifold(args):
    if args.model == "s2":
        if args.equilibrium != "inverted":
            raise AttbasinError("the s2 saddle is the inverted equilibrium")
        p = _load_params(args, "s2")
        ball = manifold.build_seed_ball_s2(p, args.delta, args.points)
    else:
        if args.equilibrium not in ("e1", "e2", "e3"):
            raise AttbasinError("so3 saddles are e1, e2, e3")
        p = _load_params(args, "so3")
        ball = manifold.build_seed_ball_so3(int(args.equilibrium[1]), p,
                                            args.delta, args.points)
    spec = StepSpec(h=args.h, direction="backward")
    bundle = manifold.globalize(ball, args.T, spec, p, stride=args.stride,
                                workers=args.workers)
    manifold.export_bundle(bundle, args.out, fmt=args.format)
    failed = len(bundle.failures)
    print(f"wrote {bundle.n_seeds} trajectories ({failed} failed) to {args.out}")
    return 0


def cmd_validate(args):
    p = _load_params(args, args.model)
    bundle = manifold.load_bundle(args.bundle)
    eq_map = S2_EQUILIBRIA if args.model == "s2" else SO3_EQUILIBRIA
    eq = models.equilibria(args.model, p)[eq_map[args.equilibrium]]
    bundle.model = args.model
    bundle.equilibrium = eq
    spec = StepSpec(h=args.h, direction="forward")
    d = manifold.validate_forward(bundle, args.seed, args.t, spec, p)
    print(f"seed {args.seed} at t = {args.t}: forward distance to "
          f"equilibrium = {d:.6e}")
    return 0


def cmd_export(args):
    bundle = manifold.load_bundle(args.bundle)
    manifold.export_bundle(bundle, args.out, fmt=args.format)
    print(f"wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="attbasin",
        description="Global stable-manifold analysis of closed-loop "
                    "attitude dynamics on S^2 and SO(3).")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, model_required=True):
        sp.add_argument("--model", choices=["s2", "so3"],
                        required=model_required)
        sp.add_argument("--config", help="flat key=value parameter file")

    sp = sub.add_parser("eigs", help="eigenvalue table of an equilibrium")
    common(sp)
    sp.add_argument("--equilibrium", required=True,
                    choices=sorted(S2_EQUILIBRIA) + sorted(SO3_EQUILIBRIA),
                    help="hanging/inverted (s2) or identity/e1/e2/e3 (so3)")
    sp.set_defaults(func=cmd_eigs)

    sp = sub.add_parser("simulate", help="integrate one trajectory")
    common(sp)
    sp.add_argument("--state", required=True,
                    help="'x,y,z;wx,wy,wz': direction (s2) or axis-angle "
                         "attitude (so3), then angular velocity")
    sp.add_argument("--T", type=_positive("--T"), required=True,
                    help="duration in seconds (positive multiple of h)")
    sp.add_argument("--h", type=_positive("--h"), default=0.002)
    sp.add_argument("--direction", choices=["fwd", "bwd"], default="fwd")
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("manifold", help="globalize a stable manifold")
    common(sp)
    sp.add_argument("--equilibrium", required=True,
                    choices=["inverted", "e1", "e2", "e3"])
    sp.add_argument("--delta", type=_positive("--delta"), default=1e-6)
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--T", type=_positive("--T"), required=True)
    sp.add_argument("--h", type=_positive("--h"), default=0.002)
    sp.add_argument("--stride", type=int, default=1)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--format", choices=["jsonl", "csv"], default="jsonl")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_manifold)

    sp = sub.add_parser("validate",
                        help="forward-validate one bundle state")
    common(sp)
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--equilibrium", required=True,
                    choices=sorted(S2_EQUILIBRIA) + sorted(SO3_EQUILIBRIA))
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--t", type=float, required=True)
    sp.add_argument("--h", type=_positive("--h"), default=0.002)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("export", help="convert a bundle between formats")
    sp.add_argument("--bundle", required=True)
    sp.add_argument("--format", choices=["jsonl", "csv"], required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_export)

    return parser


def dispatch(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except AttbasinError as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
