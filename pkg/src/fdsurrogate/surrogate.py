"""Surrogate model interface and the value / Sobolev training losses."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .core import EmptyValueDataset, GradDataset, ValueDataset


class SurrogateModel(ABC):
    """A continuously differentiable model ``m: R^n -> R``.

    ``spatial_gradient`` must be the exact derivative of ``value``. Batched
    variants default to looping and are overridden where vectorization pays.
    """

    n: int

    @abstractmethod
    def value(self, x) -> float: ...

    @abstractmethod
    def spatial_gradient(self, x) -> np.ndarray: ...

    @abstractmethod
    def parameters(self) -> np.ndarray:
        """All trainable parameters concatenated into one flat vector."""

    def values(self, X) -> np.ndarray:
        return np.array([self.value(x) for x in np.atleast_2d(X)])

    def spatial_gradients(self, X) -> np.ndarray:
        return np.array([self.spatial_gradient(x) for x in np.atleast_2d(X)])


@dataclass
class TrainingProblem:
    """Data and penalty weight for one surrogate fit.

    With ``sobolev=False`` the gradient dataset is ignored and the loss is the
    mean squared value residual plus ``lam * ||theta||^2``.
    """

    F: ValueDataset
    G: GradDataset
    lam: float = 0.0
    sobolev: bool = True

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("lam must be non-negative")

    def arrays(self):
        if len(self.F) == 0:
            raise EmptyValueDataset("value dataset is empty")
        Y, fY = self.F.points(), self.F.values()
        if self.sobolev and len(self.G) > 0:
            Z, gZ = self.G.points(), self.G.grads()
        else:
            Z = gZ = np.zeros((0, Y.shape[1]))
        return Y, fY, Z, gZ


def loss(model: SurrogateModel, prob: TrainingProblem) -> float:
    Y, fY, Z, gZ = prob.arrays()
    res = model.values(Y) - fY
    out = float(np.mean(res ** 2))
    if Z.shape[0]:
        gres = model.spatial_gradients(Z) - gZ
        out += float(np.sum(gres ** 2)) / Z.shape[0]
    theta = model.parameters()
    return out + prob.lam * float(theta @ theta)
