"""Derivative-free gradient descent with forward differences and doubling backtracking."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core import BudgetExhausted, IterationRecord, Oracle, SolverConfig, SolverTrace
from .finite_difference import fd_step, forward_gradient

NEAR_STATIONARY = "NearStationary"
BUDGET_EXHAUSTED = "BudgetExhausted"


class _NoDescent(Exception):
    """Raised when the inner loop hits ``max_inner_halvings`` without success."""


@dataclass
class StepResult:
    i: int
    grad: np.ndarray
    h: float
    x_plus: np.ndarray
    f_plus: float


def descent_step(oracle: Oracle, x: np.ndarray, fx: float, sigma: float, cfg: SolverConfig,
                 record: IterationRecord, trace: SolverTrace,
                 on_differences: Optional[Callable[[list], None]] = None) -> StepResult:
    """One outer iteration of the base method (inner loop over the halving level ``i``).

    Evaluations are charged to ``record`` as they happen so the accounting
    stays exact when :class:`BudgetExhausted` interrupts the loop.
    """
    n = x.shape[0]
    small = 0.8 * cfg.epsilon
    for i in range(cfg.max_inner_halvings):
        scale = 2.0 ** i * sigma
        h = fd_step(cfg.epsilon, n, scale)
        before = oracle.eval_count
        try:
            g, points = forward_gradient(oracle, x, fx, h)
        finally:
            record.fd_evals += oracle.eval_count - before
        trace.last_grad, trace.last_h = g, h
        if on_differences is not None:
            on_differences(points)
        gnorm2 = float(g @ g)
        if np.sqrt(gnorm2) < small:
            continue
        x_trial = x - g / scale
        f_trial = oracle.evaluate(x_trial)
        record.trial_evals += 1
        if fx - f_trial >= gnorm2 / (8.0 * scale):
            return StepResult(i, g, h, x_trial, f_trial)
    raise _NoDescent


def next_sigma(i_k: int, sigma: float, cfg: SolverConfig) -> float:
    return max(2.0 ** (i_k - 1) * sigma, cfg.sigma_min)


def start_trace(oracle: Oracle, x0, cfg: SolverConfig) -> tuple[SolverTrace, np.ndarray, float]:
    x0 = np.array(x0, dtype=float)
    trace = SolverTrace(n=x0.shape[0])
    f0 = oracle.evaluate(x0)
    trace.initial_evals = 1
    trace.records.append(IterationRecord(0, x0, f0, cfg.sigma0, cum_fe=1))
    return trace, x0, f0


def finish_trace(trace: SolverTrace, oracle: Oracle, status: str) -> np.ndarray:
    trace.status = status
    trace.x_best = oracle.best_x.copy()
    trace.f_best = oracle.best_f
    return trace.x_best


def solve_base(oracle: Oracle, x0, cfg: SolverConfig = SolverConfig()):
    """Run the base method until it stalls near a stationary point or the budget ends.

    Returns ``(x_best, trace)`` where ``x_best`` is the best evaluated point.
    The iterate sequence itself is in ``trace.records``.
    """
    trace, x, fx = start_trace(oracle, x0, cfg)
    sigma = cfg.sigma0
    start = oracle.eval_count - 1
    while True:
        rec = trace.records[-1]
        try:
            step = descent_step(oracle, x, fx, sigma, cfg, rec, trace)
        except BudgetExhausted:
            return finish_trace(trace, oracle, BUDGET_EXHAUSTED), trace
        except _NoDescent:
            return finish_trace(trace, oracle, NEAR_STATIONARY), trace
        rec.i_k, rec.t_k, rec.f_plus = step.i, 0, step.f_plus
        rec.grad_norm, rec.h = float(np.linalg.norm(step.grad)), step.h
        sigma = next_sigma(step.i, sigma, cfg)
        x, fx = step.x_plus, step.f_plus
        trace.records.append(
            IterationRecord(rec.k + 1, x, fx, sigma, cum_fe=oracle.eval_count - start))
