"""Problems x solvers benchmark grid: config parsing, execution and CSV/SVG artifacts."""

from __future__ import annotations

import configparser
import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Optional

import numpy as np

from ..accelerated import eta, solve_accelerated, trace_violations
from ..base_solver import solve_base
from ..core import Oracle, SolverConfig
from ..families import NnFamily, RbfFamily
from ..nn import ACTIVATIONS
from ..rbf import KERNELS
from .problems import default_suite
from .profiles import ProfileTable, data_profile, five_number_summary
from .svg import boxplot_svg, profile_svg

log = logging.getLogger(__name__)

SOLVERS = ("base", "rbf-sobolev", "rbf-plain", "nn-sobolev", "nn-plain")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    solver: SolverConfig = field(default_factory=SolverConfig)
    problems: Optional[list[str]] = None  # None = whole suite
    solvers: tuple[str, ...] = SOLVERS
    budget_simplex: int = 100
    tau: float = 1e-4
    seed: int = 0
    kernel: str = "gaussian"
    activation: str = "softplus"
    workers: int = 1

    def __post_init__(self):
        bad = [s for s in self.solvers if s not in SOLVERS]
        if bad:
            raise ConfigError(f"unknown solver(s) {bad}; choose from {list(SOLVERS)}")
        if not self.solvers:
            raise ConfigError("no solvers selected")
        if self.kernel not in KERNELS:
            raise ConfigError(f"unknown kernel {self.kernel!r}")
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")
        if self.budget_simplex < 1 or self.workers < 1:
            raise ConfigError("budget_simplex and workers must be positive")
        if not 0 < self.tau < 1:
            raise ConfigError("tau must lie in (0, 1)")
        suite = [p.name for p in default_suite()]
        if self.problems is not None:
            missing = [p for p in self.problems if p not in suite]
            if missing:
                raise ConfigError(f"unknown problem(s) {missing}")

    def problem_indices(self) -> list[int]:
        suite = [p.name for p in default_suite()]
        if self.problems is None:
            return list(range(len(suite)))
        return [suite.index(p) for p in self.problems]


_SOLVER_KEYS = {f.name: f.type for f in fields(SolverConfig)}
_INT_KEYS = {"cap_F", "cap_G", "max_inner_halvings", "budget_simplex", "seed", "workers"}


def _split(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def parse_config(text: str, **overrides) -> ExperimentConfig:
    """Parse flat ``key = value`` lines (``#`` comments allowed).

    Keys mirror :class:`SolverConfig` (``lambda`` is accepted for ``lam``) plus
    ``problems``, ``solvers``, ``budget_simplex``, ``tau``, ``seed``, ``kernel``,
    ``activation`` and ``workers``. Keyword ``overrides`` that are not ``None``
    win over the file.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    raw = dict(parser["run"])
    raw.update({k: str(v) for k, v in overrides.items() if v is not None})
    if "lambda" in raw:
        raw["lam"] = raw.pop("lambda")

    solver_kw, exp_kw = {}, {}
    for key, value in raw.items():
        try:
            if key in _SOLVER_KEYS:
                solver_kw[key] = int(value) if key in _INT_KEYS else float(value)
            elif key in _INT_KEYS:
                exp_kw[key] = int(value)
            elif key == "tau":
                exp_kw[key] = float(value)
            elif key in ("kernel", "activation"):
                exp_kw[key] = value.strip()
            elif key == "solvers":
                exp_kw[key] = tuple(_split(value))
            elif key == "problems":
                exp_kw[key] = None if value.strip() == "all" else _split(value)
            else:
                raise ConfigError(f"unknown config key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"bad value for {key!r}: {value!r}") from None
    try:
        solver = SolverConfig(**solver_kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return ExperimentConfig(solver=solver, **exp_kw)


def load_config(path, **overrides) -> ExperimentConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text, **overrides)


def cell_seed(seed: int, problem_index: int) -> int:
    # NN variants on one problem share their initial weights
    return int(np.random.SeedSequence([seed, problem_index]).generate_state(1)[0])


def make_family(solver: str, cfg: ExperimentConfig, problem_index: int):
    if solver == "base":
        return None
    kind, mode = solver.split("-")
    sobolev = mode == "sobolev"
    if kind == "rbf":
        return RbfFamily(cfg.kernel, sobolev)
    return NnFamily(cfg.activation, sobolev, lam=cfg.solver.lam,
                    seed=cell_seed(cfg.seed, problem_index))


@dataclass
class CellResult:
    problem: str
    solver: str
    n: int
    history: list[float]
    trace_csv: str
    t_values: list[int]
    iterations: int
    status: str
    evals: int
    f_best: float
    training_failures: int = 0
    fe_identity: bool = True
    violations: list[str] = field(default_factory=list)


def run_cell(problem_index: int, solver: str, cfg: ExperimentConfig) -> CellResult:
    problem = default_suite()[problem_index]
    oracle = Oracle(problem.objective, problem.n, budget=cfg.budget_simplex * (problem.n + 1))
    family = make_family(solver, cfg, problem_index)
    if family is None:
        _, trace = solve_base(oracle, problem.x0, cfg.solver)
    else:
        _, trace = solve_accelerated(oracle, problem.x0, cfg.solver, family)
    return CellResult(problem.name, solver, problem.n, list(oracle.history), trace.to_csv(),
                      trace.t_values, trace.iterations, trace.status, oracle.eval_count,
                      oracle.best_f, trace.training_failures,
                      fe_identity=trace.total_evals == oracle.eval_count,
                      violations=trace_violations(trace, cfg.solver))


def _run_cell_star(args):
    return run_cell(*args)


def _limit_threads():
    try:
        from threadpoolctl import threadpool_limits
        threadpool_limits(1)
    except ImportError:  # pragma: no cover
        pass


def run_grid(cfg: ExperimentConfig) -> list[CellResult]:
    jobs = [(i, s, cfg) for i in cfg.problem_indices() for s in cfg.solvers]
    if cfg.workers == 1:
        results = []
        for job in jobs:
            res = run_cell(*job)
            log.info("%s / %s: %s after %d evals", res.problem, res.solver, res.status, res.evals)
            results.append(res)
        return results
    with ProcessPoolExecutor(max_workers=cfg.workers, initializer=_limit_threads) as pool:
        # map preserves job order, so output does not depend on scheduling
        return list(pool.map(_run_cell_star, jobs))


@dataclass
class ExperimentResult:
    cells: list[CellResult]
    table: ProfileTable
    f_best: dict[str, float]
    curves: dict
    gains: dict[str, dict[str, tuple[float, float]]]  # solver -> problem -> (S, eta)

    def final_fraction(self, solver: str) -> float:
        return self.curves[solver].final

    def median_gain(self, solver: str) -> float:
        return float(np.median([e for _, e in self.gains[solver].values()]))


def _fmt(x: float) -> str:
    return "inf" if math.isinf(x) else repr(float(x))


def _csv(rows, header) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def summarize(cells: list[CellResult], cfg: ExperimentConfig) -> ExperimentResult:
    dims = {c.problem: c.n for c in cells}
    histories = {(c.problem, c.solver): c.history for c in cells}
    table, f_best = ProfileTable.from_histories(histories, dims, cfg.tau)
    curves = data_profile(table, cfg.budget_simplex)
    gains: dict[str, dict] = {}
    for c in cells:
        if c.solver != "base" and c.t_values:
            S = float(np.mean(c.t_values))
            gains.setdefault(c.solver, {})[c.problem] = (S, eta(S, c.n))
    return ExperimentResult(cells, table, f_best, curves, gains)


def write_artifacts(result: ExperimentResult, cfg: ExperimentConfig, out_dir) -> Path:
    out = Path(out_dir)
    (out / "traces").mkdir(parents=True, exist_ok=True)
    for c in result.cells:
        (out / "traces" / f"{c.problem}_{c.solver}.csv").write_text(c.trace_csv)

    runs = [(c.problem, c.n, c.solver, c.status, c.iterations, c.evals, _fmt(c.f_best),
             _fmt(result.f_best[c.problem]), _fmt(result.table.evals[(c.problem, c.solver)]),
             c.training_failures)
            for c in result.cells]
    (out / "runs.csv").write_text(_csv(runs, ("problem", "n", "solver", "status", "iterations",
                                              "evals", "f_run_best", "f_best",
                                              "evals_to_converge", "training_failures")))

    prof_rows = [(s, _fmt(a), _fmt(frac))
                 for s, curve in result.curves.items() for a, frac in curve.breakpoints()]
    (out / "profiles.csv").write_text(_csv(prof_rows, ("solver", "alpha", "fraction")))

    gain_rows = [(p, s, _fmt(S), _fmt(e))
                 for s, per in result.gains.items() for p, (S, e) in per.items()]
    (out / "gains.csv").write_text(_csv(gain_rows, ("problem", "solver", "S", "eta")))

    summaries = {s: five_number_summary([e for _, e in per.values()])
                 for s, per in result.gains.items() if per}
    summ_rows = [(s, *map(_fmt, v)) for s, v in summaries.items()]
    (out / "gain_summary.csv").write_text(_csv(summ_rows, (
        "solver", "min", "whisker_low", "q1", "median", "q3", "whisker_high", "max")))

    (out / "profiles.svg").write_text(profile_svg(
        {s: c.breakpoints() for s, c in result.curves.items()}, cfg.budget_simplex,
        title=f"Data profiles, tau={cfg.tau:g}"))
    if summaries:
        (out / "gains.svg").write_text(boxplot_svg(summaries))
    cfg_dump = {**asdict(cfg.solver), "problems": cfg.problems or "all",
                "solvers": ",".join(cfg.solvers), "budget_simplex": cfg.budget_simplex,
                "tau": cfg.tau, "seed": cfg.seed, "kernel": cfg.kernel,
                "activation": cfg.activation}
    (out / "config_used.txt").write_text(
        "".join(f"{k} = {v if not isinstance(v, list) else ','.join(v)}\n"
                for k, v in cfg_dump.items() if v is not None))
    return out


def run_experiment(cfg: ExperimentConfig, out_dir=None) -> ExperimentResult:
    result = summarize(run_grid(cfg), cfg)
    if out_dir is not None:
        write_artifacts(result, cfg, out_dir)
    return result


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))
