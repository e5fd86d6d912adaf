"""Evaluation oracle, FIFO datasets, solver configuration and traces."""

from __future__ import annotations

import csv
import io
import math
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional

import numpy as np


class BudgetExhausted(RuntimeError):
    """Raised when an oracle is queried after its evaluation budget is spent."""


class DimensionMismatch(ValueError):
    pass


class NonPositiveInput(ValueError):
    pass


class EmptyValueDataset(ValueError):
    pass


class EmptyTrace(ValueError):
    pass


def _as_point(x, n: int) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != n:
        raise DimensionMismatch(f"expected a vector of length {n}, got shape {x.shape}")
    return x


class Oracle:
    """Zeroth-order access to an objective with exact evaluation accounting.

    Every query increments ``eval_count`` by one. Once ``eval_count`` reaches
    ``budget`` further queries raise :class:`BudgetExhausted`. The oracle also
    keeps the sequence of returned values and the best point seen, which the
    benchmark uses to build data profiles. A NaN objective value is recorded
    and returned as ``inf``.
    """

    def __init__(self, objective: Callable[[np.ndarray], float], dimension: int,
                 budget: Optional[int] = None):
        if dimension < 1:
            raise NonPositiveInput("dimension must be positive")
        if budget is not None and budget < 1:
            raise NonPositiveInput("budget must be positive")
        self.objective = objective
        self.dimension = int(dimension)
        self.budget = budget
        self.eval_count = 0
        self.history: list[float] = []
        self.best_x: Optional[np.ndarray] = None
        self.best_f = np.inf

    @property
    def remaining(self) -> Optional[int]:
        if self.budget is None:
            return None
        return self.budget - self.eval_count

    @property
    def exhausted(self) -> bool:
        return self.budget is not None and self.eval_count >= self.budget

    def evaluate(self, x) -> float:
        x = _as_point(x, self.dimension)
        if self.exhausted:
            raise BudgetExhausted(f"evaluation budget of {self.budget} spent")
        with np.errstate(over="ignore", invalid="ignore"):
            fx = float(self.objective(x.copy()))
        if math.isnan(fx):
            fx = math.inf  # undefined value: worse than anything, so every descent test rejects it
        self.eval_count += 1
        self.history.append(fx)
        if fx < self.best_f:
            self.best_f = fx
            self.best_x = x.copy()
        return fx

    __call__ = evaluate


class _FifoDataset:
    """Capped insertion-ordered store keyed by exact point coordinates."""

    def __init__(self, cap: int, dimension: Optional[int] = None):
        if cap < 1:
            raise NonPositiveInput("cap must be positive")
        self.cap = int(cap)
        self.dimension = dimension
        self._entries: OrderedDict[tuple, tuple] = OrderedDict()

    def _key(self, point) -> tuple[tuple, np.ndarray]:
        point = np.asarray(point, dtype=float).ravel()
        if self.dimension is None:
            self.dimension = point.shape[0]
        elif point.shape[0] != self.dimension:
            raise DimensionMismatch(
                f"expected a point of length {self.dimension}, got {point.shape[0]}")
        return tuple(point.tolist()), point.copy()

    def _put(self, key: tuple, payload: tuple) -> None:
        # a duplicate point replaces the stored payload and becomes the newest entry
        self._entries.pop(key, None)
        self._entries[key] = payload
        while len(self._entries) > self.cap:
            self._entries.popitem(last=False)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, point) -> bool:
        return tuple(np.asarray(point, dtype=float).ravel().tolist()) in self._entries

    def points(self) -> np.ndarray:
        if not self._entries:
            return np.zeros((0, self.dimension or 0))
        return np.array([p[0] for p in self._entries.values()])


class ValueDataset(_FifoDataset):
    """The set of evaluated points ``(y_i, f(y_i))`` fed to surrogate training."""

    def insert(self, point, value: float) -> "ValueDataset":
        key, point = self._key(point)
        self._put(key, (point, float(value)))
        return self

    def extend(self, pairs) -> "ValueDataset":
        for point, value in pairs:
            self.insert(point, value)
        return self

    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self._entries.values()], dtype=float)

    def __iter__(self) -> Iterator[tuple[np.ndarray, float]]:
        return iter(list(self._entries.values()))


class GradDataset(_FifoDataset):
    """Points with their finite-difference gradients and the step that produced them."""

    def insert(self, point, grad, h: float) -> "GradDataset":
        key, point = self._key(point)
        grad = np.asarray(grad, dtype=float).ravel()
        if grad.shape[0] != point.shape[0]:
            raise DimensionMismatch("gradient and point lengths differ")
        self._put(key, (point, grad.copy(), float(h)))
        return self

    def grads(self) -> np.ndarray:
        if not self._entries:
            return np.zeros((0, self.dimension or 0))
        return np.array([p[1] for p in self._entries.values()])

    def steps(self) -> np.ndarray:
        return np.array([p[2] for p in self._entries.values()], dtype=float)

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray, float]]:
        return iter(list(self._entries.values()))


def insert_value(ds: ValueDataset, point, value: float) -> ValueDataset:
    return ds.insert(point, value)


def insert_grad(ds: GradDataset, point, grad, h: float) -> GradDataset:
    return ds.insert(point, grad, h)


@dataclass(frozen=True)
class SolverConfig:
    """Parameters shared by the base and the surrogate-accelerated solvers.

    ``cap_F`` defaults to ``10 * (n + 1)`` once the dimension is known; use
    :meth:`value_cap` to resolve it. ``lam`` is the weight of the parameter
    penalty in the surrogate training loss (used by the NN surrogate only,
    RBF fits are unregularized).
    """

    sigma0: float = 1.0
    sigma_min: float = 1e-2
    epsilon: float = 1e-5
    rho: float = 1e-4
    gamma: float = 12.5
    lam: float = 1e-4
    cap_F: Optional[int] = None
    cap_G: int = 10
    max_inner_halvings: int = 60

    def __post_init__(self):
        for name in ("sigma0", "sigma_min", "epsilon", "rho", "gamma"):
            if not getattr(self, name) > 0:
                raise NonPositiveInput(f"{name} must be positive")
        if self.sigma0 < self.sigma_min:
            raise ValueError("sigma0 must be >= sigma_min")
        if self.lam < 0:
            raise ValueError("lam must be non-negative")
        if self.cap_F is not None and self.cap_F < 1:
            raise NonPositiveInput("cap_F must be positive")
        if self.cap_G < 1 or self.max_inner_halvings < 1:
            raise NonPositiveInput("cap_G and max_inner_halvings must be positive")

    def value_cap(self, n: int) -> int:
        return self.cap_F if self.cap_F is not None else 10 * (n + 1)


@dataclass
class IterationRecord:
    """State at the start of outer iteration ``k`` and, once completed, its outcome.

    ``cum_fe`` is the number of evaluations spent when ``x`` became the iterate.
    The evaluation counters itemize what iteration ``k`` itself consumed; they
    are filled in even when the iteration was cut short by the budget.
    """

    k: int
    x: np.ndarray
    f_x: float
    sigma: float
    cum_fe: int
    i_k: Optional[int] = None
    t_k: Optional[int] = None
    f_plus: Optional[float] = None
    grad_norm: Optional[float] = None
    h: Optional[float] = None
    fd_evals: int = 0
    trial_evals: int = 0
    surrogate_evals: int = 0

    @property
    def completed(self) -> bool:
        return self.i_k is not None

    @property
    def sigma_used(self) -> Optional[float]:
        if self.i_k is None:
            return None
        return 2.0 ** self.i_k * self.sigma


TRACE_COLUMNS = ("k", "i_k", "sigma_k", "t_k", "f_xk", "cum_fe")


@dataclass
class SolverTrace:
    n: int
    records: list[IterationRecord] = field(default_factory=list)
    status: str = "running"
    initial_evals: int = 0
    x_best: Optional[np.ndarray] = None
    f_best: float = np.inf
    last_grad: Optional[np.ndarray] = None
    last_h: Optional[float] = None
    # surrogate runs only
    F: Optional[ValueDataset] = None
    G: Optional[GradDataset] = None
    training_failures: int = 0

    @property
    def completed(self) -> list[IterationRecord]:
        return [r for r in self.records if r.completed]

    @property
    def iterations(self) -> int:
        return len(self.completed)

    @property
    def t_values(self) -> list[int]:
        return [r.t_k or 0 for r in self.completed]

    @property
    def total_evals(self) -> int:
        return self.initial_evals + sum(
            r.fd_evals + r.trial_evals + r.surrogate_evals for r in self.records)

    @property
    def final(self) -> IterationRecord:
        return self.records[-1]

    def rows(self) -> list[tuple]:
        return [(r.k, "" if r.i_k is None else r.i_k, repr(float(r.sigma)),
                 "" if r.t_k is None else r.t_k, repr(float(r.f_x)), r.cum_fe)
                for r in self.records]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRACE_COLUMNS)
        writer.writerows(self.rows())
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def read_trace_csv(path) -> list[dict]:
    """Parse a trace CSV back into dictionaries of typed values."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            out.append({
                "k": int(row["k"]),
                "i_k": int(row["i_k"]) if row["i_k"] else None,
                "sigma_k": float(row["sigma_k"]),
                "t_k": int(row["t_k"]) if row["t_k"] else None,
                "f_xk": float(row["f_xk"]),
                "cum_fe": int(row["cum_fe"]),
            })
    return out
