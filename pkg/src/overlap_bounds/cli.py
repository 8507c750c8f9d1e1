"""Command-line entry point: ``overlap-bounds <command> [options]``."""
from __future__ import annotations

import argparse
import math
import sys
from typing import Optional, Sequence

from .harness import COMMANDS, EXIT_USAGE, RunConfig, run


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _theta_list(text: str):
    try:
        values = tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad theta list {text!r}") from exc
    if not values:
        raise argparse.ArgumentTypeError("theta list is empty")
    return values


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(
        prog="overlap-bounds",
        description="Reproduce the overlap-inequality figures and numbers as CSV tables.",
    )
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    p.add_argument("--xmin", type=float)
    p.add_argument("--xmax", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--quad-points", type=int, default=2001)
    p.add_argument("--theta-list", type=_theta_list,
                   default=(math.pi / 4, math.pi / 6, math.pi / 8, math.pi / 12),
                   help="comma-separated mixing angles in radians (fig3)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--force-fail", action="store_true", help=argparse.SUPPRESS)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(
            command=args.command,
            output_path=args.out,
            xmin=args.xmin,
            xmax=args.xmax,
            steps=args.steps,
            quadrature_points=args.quad_points,
            theta_list=args.theta_list,
            seed=args.seed,
            force_fail=args.force_fail,
        )
        cfg.grid() if cfg.command in ("fig1", "fig2", "gaussian") else None
    except (_UsageError, ValueError) as exc:
        print(f"overlap-bounds: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    text, status = run(cfg)
    if cfg.output_path:
        try:
            with open(cfg.output_path, "w", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"overlap-bounds: cannot write {cfg.output_path}: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
