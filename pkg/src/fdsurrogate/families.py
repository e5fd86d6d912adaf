"""Surrogate families the accelerated solver can train once per outer iteration."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .core import GradDataset, ValueDataset
from .nn import LbfgsConfig, NnSurrogate, get_activation, init_nn, train_nn
from .rbf import fit_rbf, get_kernel
from .surrogate import SurrogateModel, TrainingProblem


class RbfFamily:
    """Refit from scratch on every call, ``lam = 0``."""

    def __init__(self, kernel: str = "gaussian", sobolev: bool = True):
        self.kernel = get_kernel(kernel)
        self.sobolev = sobolev

    @property
    def name(self) -> str:
        return f"rbf-{self.kernel.name}-{'sobolev' if self.sobolev else 'plain'}"

    def train(self, F: ValueDataset, G: GradDataset) -> SurrogateModel:
        return fit_rbf(self.kernel, F, G, self.sobolev)


class NnFamily:
    """Shallow network; the first call initializes from ``seed``, later calls warm-start.

    ``last_input`` and ``model`` hold the parameters handed to and returned by
    the most recent training run.
    """

    def __init__(self, activation: str = "softplus", sobolev: bool = True, lam: float = 1e-4,
                 seed=0, lbfgs: LbfgsConfig = LbfgsConfig()):
        self.activation = get_activation(activation)
        self.sobolev = sobolev
        self.lam = lam
        self.seed = seed
        self.lbfgs = lbfgs
        self.model: Optional[NnSurrogate] = None
        self.last_input: Optional[np.ndarray] = None
        self.calls = 0

    @property
    def name(self) -> str:
        return f"nn-{self.activation.name}-{'sobolev' if self.sobolev else 'plain'}"

    def train(self, F: ValueDataset, G: GradDataset) -> SurrogateModel:
        init = self.model if self.model is not None else init_nn(
            F.dimension, self.activation, self.seed)
        self.last_input = init.parameters()
        prob = TrainingProblem(F, G, lam=self.lam, sobolev=self.sobolev)
        model = train_nn(init, prob, self.lbfgs)
        if not np.all(np.isfinite(model.parameters())):
            raise FloatingPointError("training produced non-finite parameters")
        self.model = model
        self.calls += 1
        return model
