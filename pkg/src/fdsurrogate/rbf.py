"""Radial basis function surrogate with a linear tail, fitted by minimal-norm least squares."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import EmptyValueDataset, GradDataset, ValueDataset
from .surrogate import SurrogateModel

RCOND = 1e-12


@dataclass(frozen=True)
class RbfKernel:
    name: str
    psi: Callable[[np.ndarray], np.ndarray]
    # r -> psi'(r) / r, extended continuously to r = 0
    psi_over_r: Callable[[np.ndarray], np.ndarray]


def _gauss(r):
    return np.exp(-r ** 2)


def _gauss_over_r(r):
    return -2.0 * np.exp(-r ** 2)


def _mq(r):
    return -np.sqrt(1.0 + r ** 2)


def _mq_over_r(r):
    return -1.0 / np.sqrt(1.0 + r ** 2)


def _cubic(r):
    return r ** 3


def _cubic_over_r(r):
    return 3.0 * r


KERNELS = {
    "gaussian": RbfKernel("gaussian", _gauss, _gauss_over_r),
    "multiquadratic": RbfKernel("multiquadratic", _mq, _mq_over_r),
    "cubic": RbfKernel("cubic", _cubic, _cubic_over_r),
}


def get_kernel(name: str) -> RbfKernel:
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown RBF kernel {name!r}; choose from {sorted(KERNELS)}") from None


def _distances(X, C):
    return np.sqrt(np.sum((X[:, None, :] - C[None, :, :]) ** 2, axis=2))


class RbfSurrogate(SurrogateModel):
    """``m(x) = sum_i alpha_i psi(||x - y_i||) + beta^T x + delta``."""

    def __init__(self, kernel: RbfKernel, centers, alpha, beta, delta: float):
        self.kernel = kernel
        self.centers = np.atleast_2d(np.asarray(centers, dtype=float))
        self.alpha = np.asarray(alpha, dtype=float).ravel()
        self.beta = np.asarray(beta, dtype=float).ravel()
        self.delta = float(delta)
        self.n = self.beta.shape[0]
        if self.centers.shape != (self.alpha.shape[0], self.n):
            raise ValueError("centers must be an N x n array matching alpha and beta")

    def values(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Psi = self.kernel.psi(_distances(X, self.centers))
        return Psi @ self.alpha + X @ self.beta + self.delta

    def value(self, x) -> float:
        return float(self.values(x)[0])

    def spatial_gradients(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=float))
        diff = X[:, None, :] - self.centers[None, :, :]
        W = self.kernel.psi_over_r(np.sqrt(np.sum(diff ** 2, axis=2))) * self.alpha
        return np.einsum("mi,min->mn", W, diff) + self.beta

    def spatial_gradient(self, x) -> np.ndarray:
        return self.spatial_gradients(x)[0]

    def parameters(self) -> np.ndarray:
        return np.concatenate([self.alpha, self.beta, [self.delta]])

    def shape_descriptor(self) -> dict:
        return {"family": "rbf", "kernel": self.kernel.name,
                "N": int(self.alpha.shape[0]), "n": self.n}

    @classmethod
    def from_parameters(cls, kernel: RbfKernel, centers, theta) -> "RbfSurrogate":
        centers = np.atleast_2d(np.asarray(centers, dtype=float))
        N, n = centers.shape
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (N + n + 1,):
            raise ValueError(f"expected {N + n + 1} parameters, got {theta.shape}")
        return cls(kernel, centers, theta[:N], theta[N:N + n], theta[-1])


def design_system(kernel: RbfKernel, Y, fY, Z=None, gZ=None):
    """Stacked, row-weighted least-squares system whose residual norm is the Sobolev loss.

    Unknowns are ``(alpha, beta, delta)``. Value rows carry weight
    ``1/sqrt(N)``; the ``M * n`` gradient rows carry ``1/sqrt(M)``.
    """
    Y = np.atleast_2d(Y)
    N, n = Y.shape
    A_val = np.hstack([kernel.psi(_distances(Y, Y)), Y, np.ones((N, 1))])
    blocks, rhs = [A_val / np.sqrt(N)], [np.asarray(fY, dtype=float) / np.sqrt(N)]
    if Z is not None and len(Z):
        Z = np.atleast_2d(Z)
        M = Z.shape[0]
        diff = Z[:, None, :] - Y[None, :, :]
        W = kernel.psi_over_r(np.sqrt(np.sum(diff ** 2, axis=2)))
        # row (j, l): d m / d x_l at z_j
        A_alpha = (W[:, :, None] * diff).transpose(0, 2, 1).reshape(M * n, N)
        A_beta = np.tile(np.eye(n), (M, 1))
        A_grad = np.hstack([A_alpha, A_beta, np.zeros((M * n, 1))])
        blocks.append(A_grad / np.sqrt(M))
        rhs.append(np.asarray(gZ, dtype=float).reshape(M * n) / np.sqrt(M))
    return np.vstack(blocks), np.concatenate(rhs)


def fit_rbf(kernel: RbfKernel | str, F: ValueDataset, G: GradDataset | None = None,
            sobolev: bool = True) -> RbfSurrogate:
    """Fit on every point of ``F`` as a center; minimal-norm solution among minimizers."""
    if isinstance(kernel, str):
        kernel = get_kernel(kernel)
    if len(F) == 0:
        raise EmptyValueDataset("value dataset is empty")
    Y, fY = F.points(), F.values()
    Z = gZ = None
    if sobolev and G is not None and len(G) > 0:
        Z, gZ = G.points(), G.grads()
    A, b = design_system(kernel, Y, fY, Z, gZ)
    theta = np.linalg.lstsq(A, b, rcond=RCOND)[0]
    return RbfSurrogate.from_parameters(kernel, Y, theta)
