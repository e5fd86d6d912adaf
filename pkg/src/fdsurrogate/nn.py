"""One-hidden-layer network surrogate with closed-form Sobolev-loss gradients.

The model is ``m(x) = W2 phi(W1 x + b1) + b2`` with hidden width ``q = 5n``.
Training minimizes the value/gradient loss with an L-BFGS loop that lives in
this module so the stopping rule is exactly the one the solver relies on.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .surrogate import SurrogateModel, TrainingProblem


@dataclass(frozen=True)
class Activation:
    """Entrywise activation with its first two derivatives.

    ``derivs(u)`` returns ``(phi, phi', phi'')`` sharing one exponential,
    which is what the training loop uses.
    """

    name: str
    derivs: Callable[[np.ndarray], tuple]
    init: str  # "he" or "glorot"

    def f(self, u):
        return self.derivs(u)[0]

    def d1(self, u):
        return self.derivs(u)[1]

    def d2(self, u):
        return self.derivs(u)[2]


def _logistic_parts(u):
    e = np.exp(-np.abs(u))
    s = np.where(u >= 0, 1.0, e) / (1.0 + e)
    return e, s


def _softplus(u):
    e, s = _logistic_parts(u)
    return np.maximum(u, 0.0) + np.log1p(e), s, s * (1.0 - s)


def _sigmoid(u):
    _, s = _logistic_parts(u)
    ds = s * (1.0 - s)
    return s, ds, ds * (1.0 - 2.0 * s)


def _silu(u):
    _, s = _logistic_parts(u)
    ds = s * (1.0 - s)
    return u * s, s + u * ds, ds * (2.0 + u * (1.0 - 2.0 * s))


# Standard logistic conventions; the mirrored forms 1/(1+e^u) and u/(1+e^u)
# give the same model class up to the sign of W1, b1.
ACTIVATIONS = {
    "softplus": Activation("softplus", _softplus, "he"),
    "sigmoid": Activation("sigmoid", _sigmoid, "glorot"),
    "silu": Activation("silu", _silu, "he"),
}


def get_activation(name: str) -> Activation:
    try:
        return ACTIVATIONS[name]
    except KeyError:
        raise ValueError(
            f"unknown activation {name!r}; choose from {sorted(ACTIVATIONS)}") from None


class NnSurrogate(SurrogateModel):
    def __init__(self, W1, b1, W2, b2: float, activation: Activation):
        self.W1 = np.atleast_2d(np.asarray(W1, dtype=float))
        self.q, self.n = self.W1.shape
        self.b1 = np.asarray(b1, dtype=float).reshape(self.q)
        self.W2 = np.asarray(W2, dtype=float).reshape(self.q)
        self.b2 = float(b2)
        self.activation = activation
        self.fit_info: Optional[LbfgsResult] = None

    def values(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return self.activation.f(X @ self.W1.T + self.b1) @ self.W2 + self.b2

    def value(self, x) -> float:
        return float(self.values(x)[0])

    def spatial_gradients(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        return (self.activation.d1(X @ self.W1.T + self.b1) * self.W2) @ self.W1

    def spatial_gradient(self, x) -> np.ndarray:
        return self.spatial_gradients(x)[0]

    def parameters(self) -> np.ndarray:
        return np.concatenate([self.W1.ravel(), self.b1, self.W2, [self.b2]])

    def shape_descriptor(self) -> dict:
        return {"family": "nn", "activation": self.activation.name, "n": self.n, "q": self.q}

    @classmethod
    def from_parameters(cls, theta, n: int, q: int, activation: Activation) -> "NnSurrogate":
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (q * n + 2 * q + 1,):
            raise ValueError(f"expected {q * n + 2 * q + 1} parameters, got {theta.shape}")
        W1 = theta[:q * n].reshape(q, n)
        b1 = theta[q * n:q * n + q]
        W2 = theta[q * n + q:q * n + 2 * q]
        return cls(W1, b1, W2, theta[-1], activation)

    def copy(self) -> "NnSurrogate":
        return NnSurrogate(self.W1.copy(), self.b1.copy(), self.W2.copy(), self.b2,
                           self.activation)


def init_nn(n: int, activation: Activation | str = "softplus", seed=None,
            width: Optional[int] = None) -> NnSurrogate:
    """He (softplus, silu) or Glorot-uniform (sigmoid) weights, zero biases."""
    if isinstance(activation, str):
        activation = get_activation(activation)
    if n < 1:
        raise ValueError("n must be positive")
    q = 5 * n if width is None else width
    rng = np.random.default_rng(seed)
    if activation.init == "he":
        W1 = rng.normal(0.0, np.sqrt(2.0 / n), size=(q, n))
        W2 = rng.normal(0.0, np.sqrt(2.0 / q), size=q)
    else:
        W1 = rng.uniform(-1.0, 1.0, size=(q, n)) * np.sqrt(6.0 / (n + q))
        W2 = rng.uniform(-1.0, 1.0, size=q) * np.sqrt(6.0 / (q + 1))
    return NnSurrogate(W1, np.zeros(q), W2, 0.0, activation)


def _loss_and_grad(theta, n, q, act, Y, fY, Z, gZ, lam):
    W1 = theta[:q * n].reshape(q, n)
    b1 = theta[q * n:q * n + q]
    w2 = theta[q * n + q:q * n + 2 * q]
    b2 = theta[-1]
    N = Y.shape[0]

    U = Y @ W1.T + b1
    A, A1, _ = act.derivs(U)
    r = A @ w2 + b2 - fY
    loss = r @ r / N
    c = 2.0 / N * r
    g_w2 = A.T @ c
    g_b2 = c.sum()
    dU = np.outer(c, w2) * A1
    g_W1 = dU.T @ Y
    g_b1 = dU.sum(axis=0)

    M = Z.shape[0]
    if M:
        Uz = Z @ W1.T + b1
        _, D, D2 = act.derivs(Uz)
        P = D * w2
        E = P @ W1 - gZ
        loss += np.sum(E * E) / M
        dG = 2.0 / M * E
        g_W1 += P.T @ dG
        dP = dG @ W1.T
        g_w2 += np.sum(dP * D, axis=0)
        dUz = dP * w2 * D2
        g_W1 += dUz.T @ Z
        g_b1 += dUz.sum(axis=0)

    grad = np.concatenate([g_W1.ravel(), g_b1, g_w2, [g_b2]])
    if lam:
        loss += lam * (theta @ theta)
        grad += 2.0 * lam * theta
    return float(loss), grad


def _problem_arrays(model: NnSurrogate, prob: TrainingProblem):
    Y, fY, Z, gZ = prob.arrays()
    if Y.shape[1] != model.n:
        raise ValueError("data dimension does not match the model")
    return Y, fY, Z, gZ


def nn_loss(model: NnSurrogate, prob: TrainingProblem) -> float:
    Y, fY, Z, gZ = _problem_arrays(model, prob)
    return _loss_and_grad(model.parameters(), model.n, model.q, model.activation,
                          Y, fY, Z, gZ, prob.lam)[0]


def loss_gradient_theta(model: NnSurrogate, prob: TrainingProblem) -> np.ndarray:
    """Exact gradient of the training loss with respect to the flattened parameters."""
    Y, fY, Z, gZ = _problem_arrays(model, prob)
    return _loss_and_grad(model.parameters(), model.n, model.q, model.activation,
                          Y, fY, Z, gZ, prob.lam)[1]


@dataclass(frozen=True)
class LbfgsConfig:
    memory: int = 10
    max_iters: int = 1000
    grad_tol_rel: float = 1e-6
    c1: float = 1e-4
    shrink: float = 0.5
    max_backtracks: int = 50


@dataclass
class LbfgsResult:
    x: np.ndarray
    fun: float
    grad_norm: float
    initial_grad_norm: float
    iterations: int
    status: str  # "converged", "max_iters" or "line_search_failure"
    history: list[float] = field(default_factory=list)


def _two_loop(g, S, Yc):
    q = g.copy()
    alphas = []
    for s, y in zip(reversed(S), reversed(Yc)):
        a = (s @ q) / (y @ s)
        alphas.append(a)
        q -= a * y
    if S:
        s, y = S[-1], Yc[-1]
        q *= (s @ y) / (y @ y)
    for (s, y), a in zip(zip(S, Yc), reversed(alphas)):
        b = (y @ q) / (y @ s)
        q += (a - b) * s
    return q


def lbfgs(fun, x0, cfg: LbfgsConfig = LbfgsConfig()) -> LbfgsResult:
    """Minimize ``fun`` (returning value and gradient) from ``x0``.

    Stops at iteration ``K`` when ``||grad(x_K)|| <= grad_tol_rel * max(1, ||grad(x_0)||)``
    or ``K == max_iters``. Steps come from Armijo backtracking, so accepted
    values never increase. A failed line search ends the run and returns the
    last accepted iterate with status ``"line_search_failure"``.
    """
    x = np.array(x0, dtype=float)
    f, g = fun(x)
    if not np.isfinite(f) or not np.all(np.isfinite(g)):
        raise FloatingPointError("non-finite loss at the initial point")
    g0 = float(np.linalg.norm(g))
    tol = cfg.grad_tol_rel * max(1.0, g0)
    S, Yc = deque(maxlen=cfg.memory), deque(maxlen=cfg.memory)
    history = [f]
    k = 0
    status = "max_iters"
    while True:
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            status = "converged"
            break
        if k >= cfg.max_iters:
            break
        d = -_two_loop(g, S, Yc)
        slope = g @ d
        if not slope < 0:
            S.clear()
            Yc.clear()
            d = -g
            slope = -(g @ g)
        step = 1.0 if S else min(1.0, 1.0 / gnorm)
        for _ in range(cfg.max_backtracks):
            x_new = x + step * d
            f_new, g_new = fun(x_new)
            if np.isfinite(f_new) and f_new <= f + cfg.c1 * step * slope:
                break
            step *= cfg.shrink
        else:
            status = "line_search_failure"
            break
        s, y = x_new - x, g_new - g
        if s @ y > 1e-10 * np.linalg.norm(s) * np.linalg.norm(y):
            S.append(s)
            Yc.append(y)
        x, f, g = x_new, f_new, g_new
        k += 1
        history.append(f)
    return LbfgsResult(x, f, float(np.linalg.norm(g)), g0, k, status, history)


def train_nn(init: NnSurrogate, prob: TrainingProblem,
             cfg: LbfgsConfig = LbfgsConfig()) -> NnSurrogate:
    """Train from ``init`` (left untouched); the result carries ``fit_info``."""
    Y, fY, Z, gZ = _problem_arrays(init, prob)
    n, q, act, lam = init.n, init.q, init.activation, prob.lam

    def fun(theta):
        return _loss_and_grad(theta, n, q, act, Y, fY, Z, gZ, lam)

    res = lbfgs(fun, init.parameters(), cfg)
    model = NnSurrogate.from_parameters(res.x, n, q, act)
    model.fit_info = res
    return model
