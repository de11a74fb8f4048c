# src/gp/posterior.py

"""
GP conditioning: value posterior and the posterior over the gradient (Jacobian) of the
objective at a query point.

With K_y = K(X, X) + noise_variance * I factored once, the Jacobian posterior at x is

    mean  = dK(x, X) K_y^{-1} y
    cov   = sf2 * L - dK(x, X) K_y^{-1} dK(x, X)^T

so it reuses the factor of the value posterior; the covariance never reads the targets.
"""

import logging
from typing import List, NamedTuple, Optional, Tuple

import numpy as np

from src.config.constants import JITTER
from src.utils.exceptions import ConditioningError, InputError
from .cholesky import CholeskyFactor, cholesky
from .kernels import (
    KernelParams,
    kernel_grad1_matrix,
    kernel_matrix,
    kernel_vector,
    noisy_kernel_matrix,
)

logger = logging.getLogger("GIBO.GP")


class ValuePosterior(NamedTuple):
    mean: float
    variance: float


class JacobianPosterior(NamedTuple):
    mean: np.ndarray
    covariance: np.ndarray


class Dataset:
    """
    Append-only list of (point, target) pairs sharing one dimension.
    """

    def __init__(self, dim: int):
        if dim < 1:
            raise InputError(f"Dataset dimension must be >= 1, got {dim}")
        self.dim = dim
        self._points: List[np.ndarray] = []
        self._targets: List[float] = []
        self._cache: Optional[Tuple[np.ndarray, np.ndarray]] = None

    @classmethod
    def from_arrays(cls, X, y) -> "Dataset":
        X = np.atleast_2d(np.asarray(X, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if X.shape[0] != y.shape[0]:
            raise InputError(f"Got {X.shape[0]} points but {y.shape[0]} targets")
        data = cls(X.shape[1])
        for point, target in zip(X, y):
            data.append(point, target)
        return data

    def append(self, point, target: float) -> None:
        point = np.atleast_1d(np.asarray(point, dtype=float)).copy()
        if point.shape != (self.dim,):
            raise InputError(f"Point has shape {point.shape}, dataset expects ({self.dim},)")
        point.setflags(write=False)
        self._points.append(point)
        self._targets.append(float(target))
        self._cache = None

    def window(self, size: int) -> "Dataset":
        """The most recent min(size, n) points, in their original order."""
        if size < 0:
            raise InputError(f"Window size must be non-negative, got {size}")
        sub = Dataset(self.dim)
        start = max(len(self) - size, 0)
        sub._points = self._points[start:]
        sub._targets = self._targets[start:]
        return sub

    def _arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        if self._cache is None:
            X = np.array(self._points).reshape(len(self._points), self.dim)
            y = np.array(self._targets, dtype=float)
            self._cache = (X, y)
        return self._cache

    @property
    def X(self) -> np.ndarray:
        return self._arrays()[0]

    @property
    def y(self) -> np.ndarray:
        return self._arrays()[1]

    def __len__(self) -> int:
        return len(self._points)

    def __repr__(self) -> str:
        return f"Dataset(dim={self.dim}, n={len(self)})"


def factorize(X: np.ndarray, params: KernelParams) -> CholeskyFactor:
    """
    Factors K(X, X) + noise_variance * I.

    Near-noiseless matrices (noise_variance < JITTER) that fail to factor are retried once
    with JITTER * signal_variance added to the diagonal.
    """
    try:
        return cholesky(noisy_kernel_matrix(X, params))
    except ConditioningError:
        if params.noise_variance >= JITTER:
            raise
        logger.debug(
            "Retrying factorization with jitter",
            extra={"experiment_id": "N/A", "extra_info": {"points": len(X)}},
        )
        return cholesky(noisy_kernel_matrix(X, params, jitter=JITTER * params.signal_variance))


class GPModel:
    """
    A zero-mean GP conditioned on fixed points, owning the Cholesky factor and the weights
    alpha = K_y^{-1} y.

    Args:
        X (np.ndarray): Conditioning points, shape (n, d).
        y (np.ndarray): Targets, shape (n,).
        params (KernelParams): Kernel hyperparameters.
        factor (CholeskyFactor, optional): Precomputed factor of K_y.
    """

    def __init__(self, X, y, params: KernelParams, factor: Optional[CholeskyFactor] = None):
        self.params = params
        self.X = np.asarray(X, dtype=float).reshape(-1, params.dim)
        y = np.asarray(y, dtype=float).reshape(-1)
        if y.shape[0] != self.X.shape[0]:
            raise InputError(f"Got {self.X.shape[0]} points but {y.shape[0]} targets")
        self._factor = factor if factor is not None else factorize(self.X, params)
        self.alpha = self._factor.solve(y)

    @classmethod
    def from_dataset(cls, data: Dataset, params: KernelParams) -> "GPModel":
        if data.dim != params.dim:
            raise InputError(f"Dataset dimension {data.dim} does not match kernel dimension {params.dim}")
        return cls(data.X, data.y, params)

    @classmethod
    def from_weights(
        cls, X, alpha, params: KernelParams, factor: Optional[CholeskyFactor] = None
    ) -> "GPModel":
        """
        Builds a model directly from weights; the factor is only computed if a variance is asked for.
        """
        model = cls.__new__(cls)
        model.params = params
        model.X = np.asarray(X, dtype=float).reshape(-1, params.dim)
        model.alpha = np.asarray(alpha, dtype=float).reshape(-1)
        if model.alpha.shape[0] != model.X.shape[0]:
            raise InputError(f"Got {model.X.shape[0]} points but {model.alpha.shape[0]} weights")
        model._factor = factor
        return model

    @property
    def factor(self) -> CholeskyFactor:
        if self._factor is None:
            self._factor = factorize(self.X, self.params)
        return self._factor

    @property
    def size(self) -> int:
        return self.X.shape[0]

    def posterior_mean(self, x) -> float:
        return float(kernel_vector(x, self.X, self.params) @ self.alpha)

    def posterior_means(self, Xq, chunk_size: int = 2048) -> np.ndarray:
        """Batched posterior means, evaluated in chunks of query points."""
        Xq = np.asarray(Xq, dtype=float).reshape(-1, self.params.dim)
        means = np.empty(Xq.shape[0])
        for start in range(0, Xq.shape[0], chunk_size):
            block = Xq[start : start + chunk_size]
            means[start : start + chunk_size] = kernel_matrix(block, self.X, self.params) @ self.alpha
        return means

    def posterior_value(self, x) -> ValuePosterior:
        k = kernel_vector(x, self.X, self.params)
        v = self.factor.solve_lower(k)
        variance = max(self.params.signal_variance - float(v @ v), 0.0)
        return ValuePosterior(float(k @ self.alpha), variance)

    def posterior_values(self, Xq) -> Tuple[np.ndarray, np.ndarray]:
        """Means and variances for a batch of query points, shape (m,) each."""
        Xq = np.asarray(Xq, dtype=float).reshape(-1, self.params.dim)
        Kq = kernel_matrix(Xq, self.X, self.params)
        means = Kq @ self.alpha
        V = self.factor.solve_lower(Kq.T)
        variances = np.maximum(self.params.signal_variance - np.sum(V * V, axis=0), 0.0)
        return means, variances

    def posterior_covariance(self, x1, x2) -> float:
        """Posterior covariance of the latent function between x1 and x2."""
        k1 = kernel_vector(x1, self.X, self.params)
        k2 = kernel_vector(x2, self.X, self.params)
        prior = float(kernel_matrix(np.atleast_2d(x1), np.atleast_2d(x2), self.params)[0, 0])
        return prior - float(self.factor.solve_lower(k1) @ self.factor.solve_lower(k2))

    def posterior_mean_gradient(self, x) -> np.ndarray:
        """Gradient of the posterior mean at x, shape (d,)."""
        return kernel_grad1_matrix(x, self.X, self.params) @ self.alpha

    def posterior_jacobian(self, x) -> JacobianPosterior:
        G = kernel_grad1_matrix(x, self.X, self.params)
        mean = G @ self.alpha
        V = self.factor.solve_lower(G.T)
        covariance = self.params.signal_variance * np.diag(self.params.precision) - V.T @ V
        return JacobianPosterior(mean, 0.5 * (covariance + covariance.T))


def posterior_value(query, data: Dataset, params: KernelParams) -> ValuePosterior:
    """Posterior mean and variance of the latent function at `query`."""
    return GPModel.from_dataset(data, params).posterior_value(query)


def posterior_jacobian(query, data: Dataset, params: KernelParams) -> JacobianPosterior:
    """Posterior mean and covariance of the objective's gradient at `query`."""
    return GPModel.from_dataset(data, params).posterior_jacobian(query)
