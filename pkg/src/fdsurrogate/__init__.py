"""Finite-difference gradient descent for black-box objectives, with surrogate acceleration."""

from .accelerated import complexity_report, eta, fe_bound_check, solve_accelerated, surrogate_gain
from .base_solver import solve_base
from .core import (BudgetExhausted, DimensionMismatch, EmptyTrace, EmptyValueDataset,
                   GradDataset, NonPositiveInput, Oracle, SolverConfig, SolverTrace,
                   ValueDataset)
from .families import NnFamily, RbfFamily
from .finite_difference import fd_step, forward_gradient
from .nn import NnSurrogate, init_nn, train_nn
from .rbf import RbfSurrogate, fit_rbf
from .surrogate import SurrogateModel, TrainingProblem, loss
from .surrogate_step import surrogate_descend

__version__ = "0.1.0"
