"""Base method with surrogate steps after every successful outer iteration.

Also holds the surrogate-gain statistic and the numeric checks of the
worst-case iteration and evaluation bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .base_solver import (BUDGET_EXHAUSTED, NEAR_STATIONARY, _NoDescent, descent_step,
                          finish_trace, next_sigma, start_trace)
from .core import (BudgetExhausted, EmptyTrace, GradDataset, IterationRecord, Oracle,
                   SolverConfig, SolverTrace, ValueDataset)
from .surrogate_step import surrogate_descend

TRAINING_ERRORS = (FloatingPointError, np.linalg.LinAlgError, OverflowError)


def solve_accelerated(oracle: Oracle, x0, cfg: SolverConfig, family):
    """Run the surrogate-accelerated method with a surrogate ``family``.

    ``family.train(F, G)`` must return a fitted surrogate. The datasets are
    exposed afterwards as ``trace.F`` and ``trace.G``. A training error skips
    the surrogate phase of that iteration (``t_k = 0``, no evaluation spent).
    """
    trace, x, fx = start_trace(oracle, x0, cfg)
    n = trace.n
    start = oracle.eval_count - 1
    F = ValueDataset(cfg.value_cap(n), n).insert(x, fx)
    G = GradDataset(cfg.cap_G, n)
    trace.F, trace.G = F, G
    sigma = cfg.sigma0
    while True:
        rec = trace.records[-1]
        try:
            step = descent_step(oracle, x, fx, sigma, cfg, rec, trace, on_differences=F.extend)
        except BudgetExhausted:
            return finish_trace(trace, oracle, BUDGET_EXHAUSTED), trace
        except _NoDescent:
            return finish_trace(trace, oracle, NEAR_STATIONARY), trace
        rec.i_k, rec.f_plus = step.i, step.f_plus
        rec.grad_norm, rec.h = float(np.linalg.norm(step.grad)), step.h
        F.insert(step.x_plus, step.f_plus)
        G.insert(x, step.grad, step.h)

        sigma_used = 2.0 ** step.i * sigma
        x, fx, rec.t_k = step.x_plus, step.f_plus, 0
        budget_hit = False
        try:
            model = family.train(F, G)
        except TRAINING_ERRORS:
            trace.training_failures += 1
            model = None
        if model is not None:
            out = surrogate_descend(step.x_plus, step.f_plus, oracle, model, sigma_used,
                                    cfg.rho, cfg.gamma, cfg.epsilon)
            rec.surrogate_evals = out.evals_used
            rec.t_k = out.t_plus
            F.extend(out.new_values)
            x, fx = out.v_plus, out.f_plus
            budget_hit = out.stop_reason == "budget"

        sigma = next_sigma(step.i, sigma, cfg)
        trace.records.append(
            IterationRecord(rec.k + 1, x, fx, sigma, cum_fe=oracle.eval_count - start))
        if budget_hit:
            return finish_trace(trace, oracle, BUDGET_EXHAUSTED), trace


def eta(S: float, n: int) -> float:
    """Surrogate gain ``(1 + S / (2(n+1))) / (1 + S)``."""
    return (1.0 + S / (2.0 * (n + 1))) / (1.0 + S)


def average_surrogate_steps(t_values) -> float:
    t_values = list(t_values)
    if not t_values:
        raise EmptyTrace("no completed outer iterations")
    return float(np.mean(t_values))


def surrogate_gain(trace: SolverTrace | list, n: int | None = None) -> float:
    """Surrogate gain of the completed iterations of ``trace`` (or of a list of ``t_k``)."""
    if isinstance(trace, SolverTrace):
        n = trace.n if n is None else n
        t_values = trace.t_values
    else:
        t_values = trace
    if n is None:
        raise ValueError("dimension required")
    return eta(average_surrogate_steps(t_values), n)


@dataclass
class ComplexityReport:
    T: int
    FE: int
    S: float
    sigma_max: float
    C_f: float
    C_max: float
    T_bound: float
    FE_bound: float

    @property
    def T_ok(self) -> bool:
        return self.T <= self.T_bound

    @property
    def FE_ok(self) -> bool:
        return self.FE <= self.FE_bound


def complexity_constants(L: float, cfg: SolverConfig) -> tuple[float, float, float]:
    sigma_max = 2.0 * max(cfg.sigma0, 2.0 * L)
    C_f = 81.0 / 8.0 * max(sigma_max, L ** 2 / cfg.sigma_min)
    C_max = max(C_f, cfg.gamma * sigma_max)
    return sigma_max, C_f, C_max


def first_stationary_index(trace: SolverTrace, gradient, epsilon: float) -> int:
    for r in trace.records:
        if np.linalg.norm(gradient(r.x)) <= epsilon:
            return r.k
    raise ValueError("the run never reached an epsilon-stationary iterate")


def complexity_report(trace: SolverTrace, problem, cfg: SolverConfig) -> ComplexityReport:
    """Measured ``T(eps)``, ``FE(eps)`` against the iteration and evaluation bounds.

    ``problem`` needs ``gradient``, ``lipschitz`` and ``f_low``.
    """
    n, eps = trace.n, cfg.epsilon
    T = first_stationary_index(trace, problem.gradient, eps)
    FE = trace.records[T].cum_fe
    S = float(np.mean([r.t_k for r in trace.records[:T]])) if T else 0.0
    sigma_max, C_f, C_max = complexity_constants(problem.lipschitz, cfg)
    gap = trace.records[0].f_x - problem.f_low
    T_bound = 2.0 * C_max * gap / ((1.0 + S) * eps ** 2)
    FE_bound = (4.0 * eta(S, n) * (n + 1) * C_max * gap / eps ** 2
                + math.log2(sigma_max / cfg.sigma0) * (n + 1) + T)
    return ComplexityReport(T, FE, S, sigma_max, C_f, C_max, T_bound, FE_bound)


def fe_bound_check(trace: SolverTrace, problem, cfg: SolverConfig) -> bool:
    return complexity_report(trace, problem, cfg).FE_ok


def trace_violations(trace: SolverTrace, cfg: SolverConfig) -> list[str]:
    """Invariant breaches in a finished trace; an empty list means the run is consistent.

    Checks monotone iterate values, ``sigma_k >= sigma_min`` and, for every
    completed iteration, ``f(x_k^+) - f(x_{k+1}) >= t_k eps^2 / (gamma 2^{i_k} sigma_k)``.
    """
    out = []
    recs = trace.records
    for a, b in zip(recs, recs[1:]):
        if b.f_x > a.f_x:
            out.append(f"k={b.k}: f increased from {a.f_x!r} to {b.f_x!r}")
    for r in recs:
        if r.sigma < cfg.sigma_min:
            out.append(f"k={r.k}: sigma {r.sigma!r} below sigma_min")
    for r, nxt in zip(recs, recs[1:]):
        if not r.completed:
            continue
        need = r.t_k * cfg.epsilon ** 2 / (cfg.gamma * r.sigma_used)
        if not r.f_plus - nxt.f_x >= need:
            out.append(f"k={r.k}: surrogate decrease {r.f_plus - nxt.f_x!r} < {need!r}")
        if r.f_plus > r.f_x:
            out.append(f"k={r.k}: trial point increased f")
    return out
