# src/tests/test_posterior.py

import numpy as np
import pytest

from src.gp.kernels import KernelParams
from src.gp.posterior import Dataset, GPModel, posterior_jacobian, posterior_value
from src.utils.exceptions import InputError
from src.utils.rng import make_rng


def _covariance_fd(model, x, h=1e-3):
    """Mixed second difference of the posterior covariance surface at (x, x)."""
    d = x.size
    result = np.empty((d, d))
    E = np.eye(d) * h
    for i in range(d):
        for j in range(d):
            result[i, j] = (
                model.posterior_covariance(x + E[i], x + E[j])
                - model.posterior_covariance(x + E[i], x - E[j])
                - model.posterior_covariance(x - E[i], x + E[j])
                + model.posterior_covariance(x - E[i], x - E[j])
            ) / (4 * h * h)
    return result


def test_dataset_append_and_window():
    """Test Dataset keeps points in order and windows return the most recent ones."""
    data = Dataset(2)
    for k in range(5):
        data.append([k, -k], float(k))
    window = data.window(3)
    assert len(data) == 5
    np.testing.assert_array_equal(window.y, [2.0, 3.0, 4.0])
    np.testing.assert_array_equal(window.X[0], [2.0, -2.0])
    assert len(data.window(10)) == 5


def test_dataset_rejects_wrong_dimension():
    """Test Dataset.append raises InputError on a dimension mismatch."""
    data = Dataset(2)
    with pytest.raises(InputError):
        data.append([1.0, 2.0, 3.0], 0.0)


def test_empty_dataset_gives_prior(params_2d):
    """Test the posterior on an empty dataset equals the prior."""
    value = posterior_value(np.array([0.3, 0.3]), Dataset(2), params_2d)
    assert value.mean == 0.0
    assert value.variance == pytest.approx(params_2d.signal_variance)
    jacobian = posterior_jacobian(np.array([0.3, 0.3]), Dataset(2), params_2d)
    np.testing.assert_array_equal(jacobian.mean, np.zeros(2))
    np.testing.assert_allclose(jacobian.covariance, params_2d.signal_variance * np.diag(params_2d.precision))


def test_noiseless_single_point_interpolates():
    """Test a noiseless GP reproduces its single observation with zero variance."""
    params = KernelParams(np.array([0.2]))
    data = Dataset.from_arrays([[0.4]], [1.7])
    value = posterior_value(np.array([0.4]), data, params)
    assert value.mean == pytest.approx(1.7, abs=1e-10)
    assert value.variance == pytest.approx(0.0, abs=1e-10)


def test_batched_values_match_single_queries(rng, dataset_2d, params_2d):
    """Test posterior_values agrees with repeated posterior_value calls."""
    model = GPModel.from_dataset(dataset_2d, params_2d)
    Xq = rng.uniform(size=(7, 2))
    means, variances = model.posterior_values(Xq)
    for k, x in enumerate(Xq):
        single = model.posterior_value(x)
        assert means[k] == pytest.approx(single.mean, rel=1e-10, abs=1e-12)
        assert variances[k] == pytest.approx(single.variance, rel=1e-8, abs=1e-12)
    np.testing.assert_allclose(model.posterior_means(Xq, chunk_size=3), means, atol=1e-12)


def test_from_weights_matches_conditioned_model(dataset_2d, params_2d):
    """Test a model rebuilt from its weights gives the same means."""
    model = GPModel.from_dataset(dataset_2d, params_2d)
    rebuilt = GPModel.from_weights(model.X, model.alpha, params_2d)
    x = np.array([0.25, 0.75])
    assert rebuilt.posterior_mean(x) == pytest.approx(model.posterior_mean(x), rel=1e-14)
    assert rebuilt.posterior_value(x).variance == pytest.approx(model.posterior_value(x).variance)


@pytest.mark.parametrize("dim", [1, 2, 5])
def test_jacobian_matches_finite_differences(dim):
    """Test the Jacobian posterior mean and covariance against finite differences on random datasets."""
    rng = make_rng(dim)
    for _ in range(5):
        n = int(rng.integers(1, 21))
        params = KernelParams(rng.uniform(0.3, 1.0, size=dim), signal_variance=rng.uniform(0.5, 2.0), noise_variance=0.01)
        X = rng.uniform(size=(n, dim))
        y = rng.standard_normal(n)
        model = GPModel(X, y, params)
        x = rng.uniform(size=dim)

        h = 1e-5
        numeric_mean = np.array(
            [(model.posterior_mean(x + h * e) - model.posterior_mean(x - h * e)) / (2 * h) for e in np.eye(dim)]
        )
        jacobian = model.posterior_jacobian(x)
        np.testing.assert_allclose(jacobian.mean, numeric_mean, atol=1e-4)
        np.testing.assert_allclose(jacobian.covariance, _covariance_fd(model, x), atol=1e-3)


def test_jacobian_covariance_ignores_targets(dataset_2d, params_2d):
    """Test the Jacobian covariance does not depend on the observed targets."""
    x = np.array([0.5, 0.5])
    first = GPModel(dataset_2d.X, dataset_2d.y, params_2d).posterior_jacobian(x)
    second = GPModel(dataset_2d.X, -3.0 * dataset_2d.y + 1.0, params_2d).posterior_jacobian(x)
    np.testing.assert_allclose(first.covariance, second.covariance, atol=1e-14)


def test_jacobian_covariance_is_symmetric_psd(dataset_2d, params_2d):
    """Test the Jacobian covariance is symmetric positive semi-definite."""
    covariance = posterior_jacobian(np.array([0.1, 0.9]), dataset_2d, params_2d).covariance
    np.testing.assert_array_equal(covariance, covariance.T)
    assert np.min(np.linalg.eigvalsh(covariance)) > -1e-10


def test_posterior_rejects_dimension_mismatch(dataset_2d):
    """Test GPModel.from_dataset raises InputError when the kernel dimension differs."""
    with pytest.raises(InputError):
        GPModel.from_dataset(dataset_2d, KernelParams(np.ones(3)))
