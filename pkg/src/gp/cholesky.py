# src/gp/cholesky.py

"""
Lower Cholesky factors of noise-augmented kernel matrices, with block appends.

For a factored n-point matrix A11 = L11 L11^T, appending the blocks A12 (cross terms) and
A22 (new diagonal block) gives

    [L11    0 ]
    [S21  S22 ],   S21 = (L11^{-1} A12)^T,   S22 = chol(A22 - S21 S21^T)

so the factor of the grown matrix costs O(n^2) per new point instead of O(n^3).
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky as _scipy_cholesky, solve_triangular

from src.utils.exceptions import ConditioningError, InputError


@dataclass(frozen=True, eq=False)
class CholeskyFactor:
    """
    Lower-triangular factor of an n x n positive definite matrix.

    Attributes:
        lower (np.ndarray): The (n, n) lower-triangular factor.
    """

    lower: np.ndarray

    @classmethod
    def empty(cls) -> "CholeskyFactor":
        return cls(np.zeros((0, 0)))

    @property
    def size(self) -> int:
        return self.lower.shape[0]

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        """Solves (L L^T) x = rhs."""
        rhs = np.asarray(rhs, dtype=float)
        if self.size == 0:
            return np.zeros_like(rhs)
        return cho_solve((self.lower, True), rhs)

    def solve_lower(self, rhs: np.ndarray) -> np.ndarray:
        """Solves L x = rhs."""
        rhs = np.asarray(rhs, dtype=float)
        if self.size == 0:
            return np.zeros_like(rhs)
        return solve_triangular(self.lower, rhs, lower=True)

    def log_determinant(self) -> float:
        """log det(L L^T)."""
        return float(2.0 * np.sum(np.log(np.diag(self.lower))))

    def reconstruct(self) -> np.ndarray:
        return self.lower @ self.lower.T


def cholesky(matrix: np.ndarray) -> CholeskyFactor:
    """
    Factorizes a symmetric positive definite matrix.

    Raises:
        ConditioningError: If the matrix is not numerically positive definite.
    """
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"Cholesky needs a square matrix, got shape {matrix.shape}")
    if matrix.shape[0] == 0:
        return CholeskyFactor.empty()
    try:
        lower = _scipy_cholesky(matrix, lower=True)
    except (LinAlgError, ValueError) as e:
        raise ConditioningError(f"Matrix of size {matrix.shape[0]} is not positive definite: {e}")
    return CholeskyFactor(lower)


def cholesky_append(
    factor: CholeskyFactor,
    cross: np.ndarray,
    diagonal: Union[float, np.ndarray],
) -> CholeskyFactor:
    """
    Extends a factor by one point (or a block of m points).

    Args:
        factor (CholeskyFactor): Factor of the current n x n matrix.
        cross (np.ndarray): Cross terms A12, shape (n,) or (n, m).
        diagonal (float or np.ndarray): A22, a scalar or an (m, m) block.

    Returns:
        CholeskyFactor: Factor of the (n + m) x (n + m) matrix.

    Raises:
        InputError: If block shapes disagree with the factor.
        ConditioningError: If the Schur complement A22 - S21 S21^T is not positive definite.
    """
    n = factor.size
    diagonal = np.atleast_2d(np.asarray(diagonal, dtype=float))
    m = diagonal.shape[0]
    cross = np.asarray(cross, dtype=float)
    if cross.size != n * m or diagonal.shape != (m, m):
        raise InputError(f"Block shapes do not match a factor of size {n}")
    cross = cross.reshape(n, m)

    s12 = factor.solve_lower(cross)
    schur = diagonal - s12.T @ s12
    if m == 1 and not schur[0, 0] > 0:
        raise ConditioningError(
            f"Schur complement {schur[0, 0]:.3e} is not positive; the new point nearly duplicates existing data"
        )
    s22 = cholesky(schur).lower

    lower = np.zeros((n + m, n + m))
    lower[:n, :n] = factor.lower
    lower[n:, :n] = s12.T
    lower[n:, n:] = s22
    return CholeskyFactor(lower)
