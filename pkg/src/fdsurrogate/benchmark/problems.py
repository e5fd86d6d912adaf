"""Smooth unconstrained test problems with fixed starting points.

Most are sums of squares from the Moré, Garbow and Hillstrom collection; the
convex quadratics carry their exact gradient, Lipschitz constant and minimum
so the complexity bounds can be checked on them.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


@dataclass(frozen=True)
class TestProblem:
    __test__ = False  # keep pytest from collecting this class

    name: str
    n: int
    objective: Callable[[np.ndarray], float]
    x0: np.ndarray
    f_low: Optional[float] = None
    lipschitz: Optional[float] = None
    gradient: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, x) -> float:
        return self.objective(np.asarray(x, dtype=float))


def _sumsq(residuals):
    def f(x):
        r = residuals(x)
        return float(r @ r)
    return f


def quadratic(name: str, eigenvalues, rotate_seed: Optional[int] = None, start: float = 3.0,
              center=None) -> TestProblem:
    """``0.5 (x - c)^T A (x - c)`` with the given spectrum, optionally rotated."""
    lam = np.asarray(eigenvalues, dtype=float)
    n = lam.shape[0]
    if rotate_seed is None:
        A = np.diag(lam)
    else:
        Q, _ = np.linalg.qr(np.random.default_rng(rotate_seed).normal(size=(n, n)))
        A = (Q * lam) @ Q.T
        A = 0.5 * (A + A.T)
    c = np.zeros(n) if center is None else np.asarray(center, dtype=float)

    def f(x):
        d = x - c
        return float(0.5 * d @ A @ d)

    def grad(x):
        return A @ (np.asarray(x, dtype=float) - c)

    return TestProblem(name, n, f, c + start, f_low=0.0,
                       lipschitz=float(np.max(np.linalg.eigvalsh(A))), gradient=grad)


def ext_rosenbrock(n):
    def r(x):
        out = np.empty(n)
        out[0::2] = 10.0 * (x[1::2] - x[0::2] ** 2)
        out[1::2] = 1.0 - x[0::2]
        return out
    x0 = np.tile([-1.2, 1.0], n // 2)
    return TestProblem(f"ext_rosenbrock_{n}", n, _sumsq(r), x0, f_low=0.0)


def ext_powell(n):
    def f(x):
        a, b, c, d = x[0::4], x[1::4], x[2::4], x[3::4]
        return float(np.sum((a + 10 * b) ** 2 + 5 * (c - d) ** 2
                            + (b - 2 * c) ** 4 + 10 * (a - d) ** 4))
    return TestProblem(f"ext_powell_{n}", n, f, np.tile([3.0, -1.0, 0.0, 1.0], n // 4),
                       f_low=0.0)


def trigonometric(n):
    i = np.arange(1, n + 1)

    def r(x):
        return n - np.sum(np.cos(x)) + i * (1 - np.cos(x)) - np.sin(x)
    return TestProblem(f"trigonometric_{n}", n, _sumsq(r), np.full(n, 1.0 / n), f_low=0.0)


def beale():
    y = np.array([1.5, 2.25, 2.625])
    i = np.arange(1, 4)

    def r(x):
        return y - x[0] * (1 - x[1] ** i)
    return TestProblem("beale_2", 2, _sumsq(r), np.array([1.0, 1.0]), f_low=0.0)


def freudenstein_roth():
    def r(x):
        return np.array([-13 + x[0] + ((5 - x[1]) * x[1] - 2) * x[1],
                         -29 + x[0] + ((x[1] + 1) * x[1] - 14) * x[1]])
    return TestProblem("freudenstein_roth_2", 2, _sumsq(r), np.array([0.5, -2.0]), f_low=0.0)


def box3d(m=10):
    t = 0.1 * np.arange(1, m + 1)

    def r(x):
        return (np.exp(-t * x[0]) - np.exp(-t * x[1])
                - x[2] * (np.exp(-t) - np.exp(-10 * t)))
    return TestProblem("box3d_3", 3, _sumsq(r), np.array([0.0, 10.0, 20.0]), f_low=0.0)


def wood():
    def r(x):
        return np.array([10 * (x[1] - x[0] ** 2), 1 - x[0],
                         np.sqrt(90) * (x[3] - x[2] ** 2), 1 - x[2],
                         np.sqrt(10) * (x[1] + x[3] - 2), (x[1] - x[3]) / np.sqrt(10)])
    return TestProblem("wood_4", 4, _sumsq(r), np.array([-3.0, -1.0, -3.0, -1.0]), f_low=0.0)


def penalty1(n):
    a = 1e-5

    def r(x):
        return np.append(np.sqrt(a) * (x - 1), x @ x - 0.25)
    return TestProblem(f"penalty1_{n}", n, _sumsq(r), np.arange(1.0, n + 1))


def variably_dimensioned(n):
    j = np.arange(1, n + 1)

    def r(x):
        s = j @ (x - 1)
        return np.concatenate([x - 1, [s, s ** 2]])
    return TestProblem(f"variably_dimensioned_{n}", n, _sumsq(r), 1 - j / n, f_low=0.0)


def brown_almost_linear(n):
    def r(x):
        out = x + np.sum(x) - (n + 1)
        out[-1] = np.prod(x) - 1
        return out
    return TestProblem(f"brown_almost_linear_{n}", n, _sumsq(r), np.full(n, 0.5), f_low=0.0)


def broyden_tridiagonal(n):
    def r(x):
        xp = np.concatenate([[0.0], x, [0.0]])
        return (3 - 2 * x) * x - xp[:-2] - 2 * xp[2:] + 1
    return TestProblem(f"broyden_tridiagonal_{n}", n, _sumsq(r), np.full(n, -1.0), f_low=0.0)


def discrete_boundary_value(n):
    h = 1.0 / (n + 1)
    t = h * np.arange(1, n + 1)

    def r(x):
        xp = np.concatenate([[0.0], x, [0.0]])
        return 2 * x - xp[:-2] - xp[2:] + h ** 2 * (x + t + 1) ** 3 / 2
    return TestProblem(f"discrete_boundary_value_{n}", n, _sumsq(r), t * (t - 1), f_low=0.0)


def linear_full_rank(n, m=10):
    def r(x):
        out = np.full(m, -2.0 / m * np.sum(x) - 1)
        out[:n] += x
        return out
    return TestProblem(f"linear_full_rank_{n}", n, _sumsq(r), np.ones(n), f_low=float(m - n))


def dixon_price(n):
    i = np.arange(2, n + 1)

    def f(x):
        return float((x[0] - 1) ** 2 + np.sum(i * (2 * x[1:] ** 2 - x[:-1]) ** 2))
    return TestProblem(f"dixon_price_{n}", n, f, np.ones(n), f_low=0.0)


def zakharov(n):
    i = np.arange(1, n + 1)

    def f(x):
        s = 0.5 * i @ x
        return float(x @ x + s ** 2 + s ** 4)
    return TestProblem(f"zakharov_{n}", n, f, np.ones(n), f_low=0.0)


def chebyquad(n):
    m = n
    integrals = np.array([-1.0 / (k * k - 1.0) if k % 2 == 0 else 0.0
                          for k in range(1, m + 1)])

    def r(x):
        y = 2 * x - 1
        T_prev, T = np.ones(n), y
        out = np.empty(m)
        for idx in range(m):
            out[idx] = np.mean(T) - integrals[idx]
            T_prev, T = T, 2 * y * T - T_prev
        return out
    return TestProblem(f"chebyquad_{n}", n, _sumsq(r), np.arange(1, n + 1) / (n + 1.0))


def log_cosh():
    def f(x):
        d = abs(x[0] - 1.0)
        # log(cosh(d)) without overflow
        return float(d + np.log1p(np.exp(-2 * d)) - np.log(2.0))
    return TestProblem("log_cosh_1", 1, f, np.array([4.0]), f_low=0.0, lipschitz=1.0,
                       gradient=lambda x: np.tanh(np.asarray(x, dtype=float) - 1.0))


def default_suite() -> list[TestProblem]:
    return [
        quadratic("quadratic_1", [4.0], start=5.0),
        quadratic("quadratic_diag_2", [1.0, 10.0]),
        quadratic("quadratic_rot_5", np.geomspace(1.0, 100.0, 5), rotate_seed=5),
        quadratic("quadratic_diag_10", np.geomspace(0.5, 50.0, 10)),
        quadratic("quadratic_rot_20", np.geomspace(1.0, 10.0, 20), rotate_seed=20),
        log_cosh(),
        ext_rosenbrock(2),
        ext_rosenbrock(6),
        ext_powell(4),
        ext_powell(8),
        trigonometric(5),
        trigonometric(10),
        beale(),
        freudenstein_roth(),
        box3d(),
        wood(),
        penalty1(4),
        penalty1(10),
        variably_dimensioned(6),
        brown_almost_linear(5),
        broyden_tridiagonal(8),
        discrete_boundary_value(8),
        linear_full_rank(5),
        dixon_price(4),
        zakharov(5),
        chebyquad(6),
    ]


def convex_quadratics() -> list[TestProblem]:
    return [p for p in default_suite() if p.name.startswith("quadratic")]


def get_problems(names=None) -> list[TestProblem]:
    suite = default_suite()
    if names is None or names == "all":
        return suite
    by_name = {p.name: p for p in suite}
    missing = [nm for nm in names if nm not in by_name]
    if missing:
        raise KeyError(f"unknown problems: {', '.join(missing)}")
    return [by_name[nm] for nm in names]
