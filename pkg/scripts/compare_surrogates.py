"""Final data-profile fraction and median gain for every kernel and activation choice.

Runs the Sobolev and plain variants of one family at a time, so the grid is
5 kernel/activation settings x the chosen problems.
"""

import argparse

from fdsurrogate.benchmark.experiment import ExperimentConfig, run_experiment
from fdsurrogate.nn import ACTIVATIONS
from fdsurrogate.rbf import KERNELS


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget-simplex", type=int, default=50)
    ap.add_argument("--problems", default=None, help="comma-separated names (default: all)")
    args = ap.parse_args()
    problems = args.problems.split(",") if args.problems else None

    settings = [("rbf", k) for k in sorted(KERNELS)] + [("nn", a) for a in sorted(ACTIVATIONS)]
    print(f"{'setting':22s} {'sobolev':>8s} {'plain':>8s} {'eta sob':>8s} {'eta pl':>8s}")
    for family, choice in settings:
        solvers = (f"{family}-sobolev", f"{family}-plain")
        kw = {"kernel": choice} if family == "rbf" else {"activation": choice}
        res = run_experiment(ExperimentConfig(problems=problems, solvers=solvers,
                                              budget_simplex=args.budget_simplex, **kw))
        fr = [res.final_fraction(s) for s in solvers]
        med = [res.median_gain(s) for s in solvers]
        print(f"{family + ':' + choice:22s} {fr[0]:8.3f} {fr[1]:8.3f} {med[0]:8.3f} {med[1]:8.3f}")


if __name__ == "__main__":
    main()
