"""Command line: ``skdv run|diagnose|estimates|grid-check``."""

from __future__ import annotations

import argparse
import logging
import sys

from .config import Experiment, read_config
from .errors import ConfigError, SKdVError


def _cmd_run(args):
    from .runner import run
    return run(read_config(args.config))


def _cmd_estimates(args):
    from dataclasses import replace
    from .runner import run
    cfg = replace(read_config(args.config), experiment=Experiment.ESTIMATES)
    return run(cfg)


def _cmd_diagnose(args):
    from .runner import diagnose, fmt
    from .snapshot import read_snapshot
    f, t = read_snapshot(args.snapshot)
    if not 0 < args.beta <= 1:
        raise ConfigError(f"--beta must lie in (0, 1], got {args.beta}")
    row = diagnose(f, t, (args.beta,))
    print(",".join(row))
    print(",".join(fmt(v) for v in row.values()))
    return 0


def _cmd_grid_check(args):
    from .runner import fmt, grid_check
    info = grid_check(read_config(args.config))
    for k, v in info.items():
        print(f"{k} = {fmt(v) if not isinstance(v, bool) else str(v).lower()}")
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="skdv", description="Schrodinger-KdV numerical laboratory")
    ap.add_argument("-v", "--verbose", action="store_true", help="echo the run log to stderr")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run the experiment described by a config file")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_run)
    p = sub.add_parser("diagnose", help="regularity summary of a snapshot file, as CSV")
    p.add_argument("snapshot")
    p.add_argument("--beta", type=float, default=0.6)
    p.set_defaults(fn=_cmd_diagnose)
    p = sub.add_parser("estimates", help="estimate-catalog campaign (config supplies grid, ensemble, entries)")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_estimates)
    p = sub.add_parser("grid-check", help="contamination and tail diagnostics without evolving")
    p.add_argument("config")
    p.set_defaults(fn=_cmd_grid_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logger = logging.getLogger("skdv_lab")
    logger.setLevel(logging.INFO)
    if args.verbose:
        h = logging.StreamHandler(sys.stderr)
        h.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(h)
    try:
        return int(args.fn(args))
    except SKdVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2 if isinstance(exc, ConfigError) else 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
