"""Convergence test, data profiles and surrogate-gain summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..accelerated import eta


class MismatchedProblemSets(ValueError):
    pass


def converged(f_x0: float, f_x: float, f_best: float, tau: float = 1e-4) -> bool:
    """``f(x0) - f(x) >= (1 - tau) (f(x0) - f_best)``."""
    return f_x0 - f_x >= (1.0 - tau) * (f_x0 - f_best)


def evals_to_converge(history, f_best: float, tau: float = 1e-4) -> float:
    """First evaluation count at which the best value so far passes the test (or ``inf``).

    ``history[0]`` must be the value at the starting point.
    """
    history = np.asarray(history, dtype=float)
    if history.size == 0:
        return math.inf
    f0 = history[0]
    running = np.minimum.accumulate(history)
    ok = np.nonzero(f0 - running >= (1.0 - tau) * (f0 - f_best))[0]
    return float(ok[0] + 1) if ok.size else math.inf


@dataclass
class ProfileTable:
    """Evaluations to convergence per (problem, solver), plus each problem's dimension."""

    dims: dict[str, int] = field(default_factory=dict)
    evals: dict[tuple[str, str], float] = field(default_factory=dict)

    @property
    def solvers(self) -> list[str]:
        seen: dict[str, None] = {}
        for _, s in self.evals:
            seen.setdefault(s)
        return list(seen)

    @property
    def problems(self) -> list[str]:
        return list(self.dims)

    def add(self, problem: str, n: int, solver: str, evals: float) -> None:
        self.dims[problem] = n
        self.evals[(problem, solver)] = evals

    def check(self) -> None:
        expected = set(self.dims)
        for s in self.solvers:
            have = {p for (p, s2) in self.evals if s2 == s}
            if have != expected:
                raise MismatchedProblemSets(
                    f"solver {s!r} covers {sorted(have)}, expected {sorted(expected)}")

    @classmethod
    def from_histories(cls, histories: dict[tuple[str, str], list], dims: dict[str, int],
                       tau: float = 1e-4) -> tuple["ProfileTable", dict[str, float]]:
        """Build the table with ``f_best`` taken over every solver's evaluations."""
        f_best: dict[str, float] = {}
        for (p, _), h in histories.items():
            if len(h):
                f_best[p] = min(f_best.get(p, math.inf), float(np.min(h)))
        table = cls()
        for (p, s), h in histories.items():
            table.add(p, dims[p], s, evals_to_converge(h, f_best[p], tau))
        table.check()
        return table, f_best


@dataclass
class ProfileCurve:
    """Step function ``alpha -> fraction of problems solved within alpha (n+1) evaluations``."""

    ratios: np.ndarray  # evals / (n + 1) per problem, inf when unsolved
    budget_simplex: float

    def __call__(self, alpha: float) -> float:
        if self.ratios.size == 0:
            return 0.0
        return float(np.mean(self.ratios <= alpha))

    def breakpoints(self) -> list[tuple[float, float]]:
        alphas = sorted({0.0, float(self.budget_simplex),
                         *(float(r) for r in self.ratios if r <= self.budget_simplex)})
        return [(a, self(a)) for a in alphas]

    @property
    def final(self) -> float:
        return self(self.budget_simplex)


def data_profile(table: ProfileTable, budget_simplex: float) -> dict[str, ProfileCurve]:
    table.check()
    curves = {}
    for s in table.solvers:
        ratios = np.array([table.evals[(p, s)] / (table.dims[p] + 1) for p in table.problems])
        curves[s] = ProfileCurve(ratios, budget_simplex)
    return curves


@dataclass
class GainSummary:
    values: dict[str, float]
    minimum: float
    whisker_low: float
    q1: float
    median: float
    q3: float
    whisker_high: float
    maximum: float


def five_number_summary(values) -> tuple[float, ...]:
    v = np.sort(np.asarray(values, dtype=float))
    q1, med, q3 = np.percentile(v, [25, 50, 75])
    iqr = q3 - q1
    lo = v[v >= q1 - 1.5 * iqr].min()
    hi = v[v <= q3 + 1.5 * iqr].max()
    return float(v[0]), float(lo), float(q1), float(med), float(q3), float(hi), float(v[-1])


def gain_distribution(t_values_by_problem: dict[str, list], dims: dict[str, int]) -> GainSummary:
    """Per-problem surrogate gain over all completed iterations, with a box-plot summary.

    Problems without a completed iteration are left out.
    """
    values = {}
    for p, ts in t_values_by_problem.items():
        if len(ts):
            values[p] = eta(float(np.mean(ts)), dims[p])
    if not values:
        raise ValueError("no problem has a completed iteration")
    return GainSummary(values, *five_number_summary(list(values.values())))
