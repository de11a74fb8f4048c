# src/tests/test_kernels.py

import numpy as np
import pytest

from src.gp.cholesky import CholeskyFactor, cholesky, cholesky_append
from src.gp.kernels import (
    KernelParams,
    kernel_grad1_matrix,
    kernel_matrix,
    noisy_kernel_matrix,
    se_kernel,
    se_kernel_grad1,
    se_kernel_hess12,
)
from src.utils.exceptions import ConditioningError, InputError


def test_kernel_params_rejects_invalid_values():
    """Test KernelParams rejects non-positive lengthscales and variances."""
    with pytest.raises(InputError):
        KernelParams(np.array([0.1, 0.0]))
    with pytest.raises(InputError):
        KernelParams(np.array([0.1]), signal_variance=-1.0)
    with pytest.raises(InputError):
        KernelParams(np.array([0.1]), noise_variance=-1e-3)


def test_se_kernel_at_identical_points_is_signal_variance(params_2d):
    """Test k(x, x) equals the signal variance."""
    x = np.array([0.2, 0.7])
    assert se_kernel(x, x, params_2d) == pytest.approx(params_2d.signal_variance)


def test_se_kernel_dimension_mismatch(params_2d):
    """Test se_kernel raises InputError for points of the wrong dimension."""
    with pytest.raises(InputError, match="Dimension mismatch"):
        se_kernel(np.zeros(3), np.zeros(2), params_2d)


def test_se_kernel_grad1_matches_finite_differences(params_2d):
    """Test the analytic kernel gradient against central differences."""
    x1, x2 = np.array([0.3, 0.1]), np.array([0.5, 0.4])
    h = 1e-6
    numeric = np.array(
        [
            (se_kernel(x1 + h * e, x2, params_2d) - se_kernel(x1 - h * e, x2, params_2d)) / (2 * h)
            for e in np.eye(2)
        ]
    )
    np.testing.assert_allclose(se_kernel_grad1(x1, x2, params_2d), numeric, atol=1e-8)


def test_se_kernel_hess12_matches_finite_differences(params_2d):
    """Test the mixed second derivative against differences of the first derivative in x2."""
    x1, x2 = np.array([0.3, 0.1]), np.array([0.5, 0.4])
    h = 1e-6
    numeric = np.column_stack(
        [
            (se_kernel_grad1(x1, x2 + h * e, params_2d) - se_kernel_grad1(x1, x2 - h * e, params_2d)) / (2 * h)
            for e in np.eye(2)
        ]
    )
    np.testing.assert_allclose(se_kernel_hess12(x1, x2, params_2d), numeric, atol=1e-6)


def test_se_kernel_hess12_at_identical_points(params_2d):
    """Test the mixed second derivative at x1 == x2 is sf2 * L."""
    x = np.array([0.4, 0.4])
    expected = params_2d.signal_variance * np.diag(params_2d.precision)
    np.testing.assert_allclose(se_kernel_hess12(x, x, params_2d), expected)


def test_kernel_matrix_matches_scalar_kernel(rng, params_2d):
    """Test kernel_matrix and kernel_grad1_matrix agree with the scalar functions."""
    X1, X2 = rng.uniform(size=(4, 2)), rng.uniform(size=(3, 2))
    K = kernel_matrix(X1, X2, params_2d)
    for i in range(4):
        for j in range(3):
            assert K[i, j] == pytest.approx(se_kernel(X1[i], X2[j], params_2d), rel=1e-12)
    G = kernel_grad1_matrix(X1[0], X2, params_2d)
    for j in range(3):
        np.testing.assert_allclose(G[:, j], se_kernel_grad1(X1[0], X2[j], params_2d), rtol=1e-12)


def test_noisy_kernel_matrix_adds_noise_to_diagonal(rng, params_2d):
    """Test noisy_kernel_matrix adds noise_variance + jitter on the diagonal only."""
    X = rng.uniform(size=(5, 2))
    diff = noisy_kernel_matrix(X, params_2d, jitter=1e-6) - kernel_matrix(X, X, params_2d)
    np.testing.assert_allclose(diff, (params_2d.noise_variance + 1e-6) * np.eye(5), atol=1e-15)


def test_cholesky_append_matches_batch_factorization(rng, params_2d):
    """Test fifty single-point appends reproduce the batch factor."""
    X = rng.uniform(size=(50, 2))
    A = noisy_kernel_matrix(X, params_2d)
    factor = CholeskyFactor.empty()
    for n in range(50):
        factor = cholesky_append(factor, A[:n, n], A[n, n])
    np.testing.assert_allclose(factor.lower, cholesky(A).lower, atol=1e-10)


def test_cholesky_append_block(rng, params_2d):
    """Test appending a block of three points at once."""
    X = rng.uniform(size=(8, 2))
    A = noisy_kernel_matrix(X, params_2d)
    factor = cholesky_append(cholesky(A[:5, :5]), A[:5, 5:], A[5:, 5:])
    np.testing.assert_allclose(factor.reconstruct(), A, atol=1e-12)


def test_cholesky_rejects_indefinite_matrix():
    """Test cholesky raises ConditioningError for an indefinite matrix."""
    with pytest.raises(ConditioningError):
        cholesky(np.array([[1.0, 2.0], [2.0, 1.0]]))


def test_cholesky_append_duplicate_point_without_noise():
    """Test appending an exact duplicate of a noiseless point fails with ConditioningError."""
    params = KernelParams(np.array([0.2]))
    X = np.array([[0.1], [0.6]])
    A = noisy_kernel_matrix(X, params)
    with pytest.raises(ConditioningError):
        cholesky_append(cholesky(A), A[:, 0], params.signal_variance)


def test_cholesky_solve_and_log_determinant(rng, params_2d):
    """Test the factor solves linear systems and gives log det."""
    X = rng.uniform(size=(6, 2))
    A = noisy_kernel_matrix(X, params_2d)
    factor = cholesky(A)
    b = rng.standard_normal(6)
    np.testing.assert_allclose(A @ factor.solve(b), b, atol=1e-10)
    assert factor.log_determinant() == pytest.approx(np.linalg.slogdet(A)[1], rel=1e-10)
