# src/gp/kernels.py

"""
Squared-exponential (SE) kernel and its derivatives.

    k(x1, x2) = sf2 * exp(-0.5 * (x1 - x2)^T L (x1 - x2)),   L = diag(1 / lengthscales^2)

The scalar functions (`se_kernel`, `se_kernel_grad1`, `se_kernel_hess12`) work on single
points; the `*_matrix` helpers evaluate the same quantities against a whole point set and
are what the posterior and acquisition code use.
"""

import dataclasses
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.spatial.distance import cdist

from src.utils.exceptions import InputError


@dataclass(frozen=True, eq=False)
class KernelParams:
    """
    Hyperparameters of a zero-mean GP with SE kernel.

    Attributes:
        lengthscales (np.ndarray): Per-dimension lengthscales, all > 0.
        signal_variance (float): sf2 > 0.
        noise_variance (float): Observation noise variance >= 0.
    """

    lengthscales: np.ndarray
    signal_variance: float = 1.0
    noise_variance: float = 0.0
    _precision: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        lengthscales = np.atleast_1d(np.asarray(self.lengthscales, dtype=float)).copy()
        if lengthscales.ndim != 1 or lengthscales.size == 0:
            raise InputError(f"lengthscales must be a non-empty vector, got shape {lengthscales.shape}")
        if not np.all(np.isfinite(lengthscales)) or np.any(lengthscales <= 0):
            raise InputError(f"lengthscales must be positive, got {lengthscales}")
        if not np.isfinite(self.signal_variance) or self.signal_variance <= 0:
            raise InputError(f"signal_variance must be positive, got {self.signal_variance}")
        if not np.isfinite(self.noise_variance) or self.noise_variance < 0:
            raise InputError(f"noise_variance must be non-negative, got {self.noise_variance}")
        lengthscales.setflags(write=False)
        object.__setattr__(self, "lengthscales", lengthscales)
        object.__setattr__(self, "signal_variance", float(self.signal_variance))
        object.__setattr__(self, "noise_variance", float(self.noise_variance))
        object.__setattr__(self, "_precision", 1.0 / lengthscales**2)

    @classmethod
    def isotropic(
        cls, dim: int, lengthscale: float, signal_variance: float = 1.0, noise_variance: float = 0.0
    ) -> "KernelParams":
        return cls(np.full(dim, float(lengthscale)), signal_variance, noise_variance)

    @property
    def dim(self) -> int:
        return self.lengthscales.size

    @property
    def precision(self) -> np.ndarray:
        """Diagonal of L, i.e. 1 / lengthscales^2."""
        return self._precision

    @property
    def precision_matrix(self) -> np.ndarray:
        return np.diag(self._precision)

    def replace(self, **changes) -> "KernelParams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return {
            "lengthscales": self.lengthscales.tolist(),
            "signal_variance": self.signal_variance,
            "noise_variance": self.noise_variance,
        }


def _check_pair(x1, x2, params: KernelParams) -> Tuple[np.ndarray, np.ndarray]:
    x1 = np.atleast_1d(np.asarray(x1, dtype=float))
    x2 = np.atleast_1d(np.asarray(x2, dtype=float))
    if x1.shape != (params.dim,) or x2.shape != (params.dim,):
        raise InputError(
            f"Dimension mismatch: got {x1.shape} and {x2.shape}, kernel expects ({params.dim},)"
        )
    return x1, x2


def _check_points(X, params: KernelParams) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.size == 0:
        return X.reshape(0, params.dim)
    if X.ndim == 1 and params.dim == 1:
        X = X[:, None]
    X = np.atleast_2d(X)
    if X.shape[1] != params.dim:
        raise InputError(f"Points have dimension {X.shape[1]}, kernel expects {params.dim}")
    return X


def se_kernel(x1, x2, params: KernelParams) -> float:
    """Returns k(x1, x2)."""
    x1, x2 = _check_pair(x1, x2, params)
    diff = x1 - x2
    return float(params.signal_variance * np.exp(-0.5 * np.dot(diff * params.precision, diff)))


def se_kernel_grad1(x1, x2, params: KernelParams) -> np.ndarray:
    """Returns dk/dx1 = -L (x1 - x2) k(x1, x2). The gradient w.r.t. x2 is its negative."""
    x1, x2 = _check_pair(x1, x2, params)
    diff = x1 - x2
    k = params.signal_variance * np.exp(-0.5 * np.dot(diff * params.precision, diff))
    return -params.precision * diff * k


def se_kernel_hess12(x1, x2, params: KernelParams) -> np.ndarray:
    """
    Returns the mixed second derivative d^2k / dx1 dx2 = L (I - d d^T L) k(x1, x2), d = x1 - x2.

    Entry [i, j] is the derivative w.r.t. x1[i] and x2[j]. At x1 == x2 this is sf2 * L.
    """
    x1, x2 = _check_pair(x1, x2, params)
    diff = x1 - x2
    k = params.signal_variance * np.exp(-0.5 * np.dot(diff * params.precision, diff))
    scaled = params.precision * diff
    return (np.diag(params.precision) - np.outer(scaled, scaled)) * k


def kernel_matrix(X1, X2, params: KernelParams) -> np.ndarray:
    """K(X1, X2), shape (n1, n2), without the noise term."""
    X1 = _check_points(X1, params)
    X2 = _check_points(X2, params)
    if X1.shape[0] == 0 or X2.shape[0] == 0:
        return np.zeros((X1.shape[0], X2.shape[0]))
    scale = params.lengthscales
    sq_dist = cdist(X1 / scale, X2 / scale, metric="sqeuclidean")
    return params.signal_variance * np.exp(-0.5 * sq_dist)


def kernel_vector(x, X, params: KernelParams) -> np.ndarray:
    """k(x, X), shape (n,)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (params.dim,):
        raise InputError(f"Query has shape {x.shape}, kernel expects ({params.dim},)")
    return kernel_matrix(x[None, :], X, params)[0]


def kernel_grad1_matrix(x, X, params: KernelParams) -> np.ndarray:
    """
    Gradient of k(x, X_j) w.r.t. x for every point X_j, stacked as columns: shape (d, n).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    X = _check_points(X, params)
    k = kernel_vector(x, X, params)
    return -(params.precision[:, None] * (x[:, None] - X.T)) * k[None, :]


def noisy_kernel_matrix(X, params: KernelParams, jitter: float = 0.0) -> np.ndarray:
    """K(X, X) + (noise_variance + jitter) I."""
    K = kernel_matrix(X, X, params)
    K[np.diag_indices_from(K)] += params.noise_variance + jitter
    return K
