"""Armijo gradient descent on a trained surrogate, gated by true decrease of f."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BudgetExhausted, Oracle
from .surrogate import SurrogateModel

MAX_MODEL_BACKTRACKS = 60
ZERO_GRAD_TOL = 1e-14


@dataclass
class SurrogateOutcome:
    v_plus: np.ndarray
    f_plus: float
    t_plus: int
    new_values: list = field(default_factory=list)
    evals_used: int = 0
    # per accepted step: (ell_t, L_t, f(v_t) - f(v_{t+1}))
    steps: list = field(default_factory=list)
    stop_reason: str = ""


def model_backtrack(model: SurrogateModel, v, mv: float, grad, L: float, rho: float,
                    max_backtracks: int = MAX_MODEL_BACKTRACKS):
    """Smallest ``ell >= 0`` with ``m(v) - m(v_hat) >= rho / (2**ell L) ||grad||^2``.

    Returns ``(ell, v_hat)`` or ``None`` when no ``ell <= max_backtracks`` works.
    """
    g2 = float(grad @ grad)
    for ell in range(max_backtracks + 1):
        scale = 2.0 ** ell * L
        v_hat = v - grad / scale
        if mv - model.value(v_hat) >= rho / scale * g2:
            return ell, v_hat
    return None


def surrogate_descend(v, fv: float, oracle: Oracle, model: SurrogateModel, sigma: float,
                      rho: float, gamma: float, epsilon: float) -> SurrogateOutcome:
    """Take model-Armijo steps from ``v`` while each one lowers ``f`` by ``eps^2/(gamma sigma)``.

    Every evaluated trial point is reported in ``new_values``, including the
    rejected one. The curvature estimate starts at ``sigma`` and is updated as
    ``L <- 2**(ell - 1) L`` after each accepted step. A spent budget ends the
    loop early with the last accepted point.
    """
    v = np.asarray(v, dtype=float).copy()
    threshold = epsilon ** 2 / (gamma * sigma)
    out = SurrogateOutcome(v_plus=v, f_plus=float(fv), t_plus=0)
    L = float(sigma)
    fv = float(fv)
    while True:
        grad = np.asarray(model.spatial_gradient(v), dtype=float)
        if not np.all(np.isfinite(grad)):
            out.stop_reason = "nonfinite_model"
            break
        if np.linalg.norm(grad) <= ZERO_GRAD_TOL:
            # ell = 0 with v_hat = v satisfies the model test trivially
            ell, v_hat = 0, v.copy()
        else:
            found = model_backtrack(model, v, model.value(v), grad, L, rho)
            if found is None:
                out.stop_reason = "model_backtrack_cap"
                break
            ell, v_hat = found
        try:
            f_hat = oracle.evaluate(v_hat)
        except BudgetExhausted:
            out.stop_reason = "budget"
            break
        out.evals_used += 1
        out.new_values.append((v_hat, f_hat))
        if fv - f_hat >= threshold:
            out.steps.append((ell, L, fv - f_hat))
            L = 2.0 ** (ell - 1) * L
            v, fv = v_hat, f_hat
            out.t_plus += 1
        else:
            out.stop_reason = "rejected"
            break
    out.v_plus, out.f_plus = v, fv
    return out
