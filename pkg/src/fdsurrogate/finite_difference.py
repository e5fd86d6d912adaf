"""Forward-difference gradients and the difference-step schedule."""

from __future__ import annotations

import math

import numpy as np

from .core import NonPositiveInput, Oracle


def fd_step(epsilon: float, n: int, sigma_eff: float) -> float:
    """Difference interval ``2 eps / (5 sqrt(n) sigma_eff)``.

    ``sigma_eff`` is the current curvature estimate ``2**i * sigma_k``.
    """
    if not (epsilon > 0 and n > 0 and sigma_eff > 0):
        raise NonPositiveInput("epsilon, n and sigma_eff must all be positive")
    return 2.0 * epsilon / (5.0 * math.sqrt(n) * sigma_eff)


def forward_gradient(oracle: Oracle, x, fx: float, h: float):
    """Forward-difference gradient at ``x`` using ``n`` new evaluations.

    ``fx`` must already hold ``f(x)``; it is not re-evaluated. Returns the
    gradient estimate and the list of ``(point, value)`` pairs evaluated, in
    coordinate order. If the budget runs out part way, :class:`BudgetExhausted`
    propagates and the evaluations already made stay counted on the oracle.
    """
    if not h > 0:
        raise NonPositiveInput("h must be positive")
    x = np.asarray(x, dtype=float)
    n = x.shape[0]
    grad = np.empty(n)
    new_points = []
    for j in range(n):
        y = x.copy()
        y[j] += h
        fy = oracle.evaluate(y)
        grad[j] = (fy - fx) / h
        new_points.append((y, fy))
    return grad, new_points
