"""Command-line renderer: attviz --bundle ws.jsonl --t 9 --out ws.png."""

from __future__ import annotations

import argparse
import sys

from .render import RenderSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="attviz",
        description="Render a trajectory bundle (JSONL) as a sphere figure.")
    parser.add_argument("--bundle", required=True, help="input JSONL bundle")
    parser.add_argument("--t", type=float, default=None,
                        help="render only times <= t (default: all)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--view", default="22,-58",
                        help="camera 'elev,azim' in degrees (default 22,-58)")
    return parser


def dispatch(argv=None):
    args = build_parser().parse_args(argv)
    try:
        elev, azim = (float(x) for x in args.view.split(","))
    except ValueError:
        print("error: --view must be 'elev,azim' (two floats)",
              file=sys.stderr)
        return 2
    spec = RenderSpec(bundle=args.bundle, out=args.out, t=args.t,
                      view=(elev, azim))
    try:
        info = render(spec)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {info['out']} ({info['n_seeds']} seeds, "
          f"max speed {info['max_speed']:.4g} rad/s)")
    return 0


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
