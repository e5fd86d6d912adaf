"""Command line entry point: ``fdsurrogate run --config <path> --out <dir>``."""

from __future__ import annotations

import argparse
import logging
import sys

from .benchmark.experiment import SOLVERS, ConfigError, load_config, run_experiment
from .nn import ACTIVATIONS
from .rbf import KERNELS


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdsurrogate")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a benchmark grid and write CSV/SVG artifacts")
    run.add_argument("--config", required=True, help="flat key = value config file")
    run.add_argument("--out", required=True, help="output directory")
    run.add_argument("--seed", type=int)
    run.add_argument("--budget-simplex", type=int)
    run.add_argument("--solvers", help=f"comma-separated subset of {','.join(SOLVERS)}")
    run.add_argument("--kernel", choices=sorted(KERNELS))
    run.add_argument("--activation", choices=sorted(ACTIVATIONS))
    run.add_argument("--workers", type=int)
    run.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        cfg = load_config(args.config, seed=args.seed, budget_simplex=args.budget_simplex,
                          solvers=args.solvers, kernel=args.kernel,
                          activation=args.activation, workers=args.workers)
    except ConfigError as exc:
        print(f"fdsurrogate: config error: {exc}", file=sys.stderr)
        return 2
    result = run_experiment(cfg, args.out)
    for solver, curve in result.curves.items():
        line = f"{solver:12s} solved {curve.final:.3f}"
        if solver in result.gains and result.gains[solver]:
            line += f"  median eta {result.median_gain(solver):.3f}"
        print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
