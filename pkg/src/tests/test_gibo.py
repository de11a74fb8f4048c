# src/tests/test_gibo.py

import numpy as np
import pytest

from src.gp.hyperparameters import FixedPrior, Hyperpriors, UniformPrior
from src.gp.kernels import KernelParams
from src.gp.posterior import Dataset
from src.optimizers import (
    GiboConfig,
    GIBOOptimizer,
    OptimizerState,
    gibo_iteration,
    mahalanobis_norm,
    normalize_gradient,
    run_gibo,
    select_local_window,
)
from src.utils.exceptions import DegenerateGradientError, InputError
from src.utils.rng import make_rng

CENTER = np.array([0.5, 0.5])


def quadratic(theta):
    return -float(np.sum((np.asarray(theta) - CENTER) ** 2))


@pytest.fixture
def config():
    return GiboConfig(stepsize=0.2, samples_per_step=2, window=8, delta_b=0.2, restarts=2, raw_samples=16)


@pytest.fixture
def params():
    return KernelParams.isotropic(2, 0.3, 1.0, 0.01)


def test_mahalanobis_norm():
    """Test the norm uses the inverse squared lengthscales."""
    assert mahalanobis_norm(np.array([0.3, 0.4]), np.array([0.1, 0.2])) == pytest.approx(np.sqrt(9 + 4))


def test_normalize_gradient_gives_unit_length():
    """Test a normalized gradient has unit Mahalanobis norm and keeps its direction."""
    lengthscales = np.array([0.2, 0.7])
    direction = normalize_gradient(np.array([3.0, -1.0]), lengthscales)
    assert mahalanobis_norm(direction, lengthscales) == pytest.approx(1.0, abs=1e-12)
    assert direction[0] > 0 > direction[1]


def test_normalize_gradient_rejects_zero():
    """Test a zero gradient raises DegenerateGradientError."""
    with pytest.raises(DegenerateGradientError):
        normalize_gradient(np.zeros(3), np.ones(3))


def test_config_validation():
    """Test GiboConfig rejects a window smaller than one iteration and refitting without hyperpriors."""
    with pytest.raises(InputError, match="window"):
        GiboConfig(stepsize=0.1, samples_per_step=3, window=3, delta_b=0.2)
    with pytest.raises(InputError, match="hyperpriors"):
        GiboConfig(stepsize=0.1, samples_per_step=1, window=4, delta_b=0.2, refit=True)
    with pytest.raises(InputError):
        GiboConfig(stepsize=0.0, samples_per_step=1, window=4, delta_b=0.2)


def test_select_local_window_keeps_latest_points():
    """Test the window is the last N points in order."""
    data = Dataset.from_arrays(np.arange(10.0).reshape(5, 2), np.arange(5.0))
    window = select_local_window(data, 2)
    np.testing.assert_array_equal(window.y, [3.0, 4.0])


def test_single_iteration_consumes_m_plus_one(config, params):
    """Test one iteration makes exactly M + 1 oracle calls, the first at the iterate."""
    calls = []

    def oracle(theta):
        calls.append(np.array(theta))
        return quadratic(theta)

    state = OptimizerState(np.zeros(2), Dataset(2), params)
    new_state = gibo_iteration(state, oracle, config, make_rng(0))
    assert len(calls) == 3
    np.testing.assert_array_equal(calls[0], np.zeros(2))
    assert new_state.iteration == 1
    assert new_state.evaluations == 3
    for point in calls[1:]:
        assert np.all(np.abs(point) <= config.delta_b + 1e-12)


def test_step_length_equals_stepsize(config, params):
    """Test every normalized step has Mahalanobis length eta."""
    history = run_gibo(quadratic, np.zeros(2), config, 30, params, make_rng(1))
    assert history.metadata["iterations"] == 10
    assert len(history.metadata["step_norms"]) == 10
    np.testing.assert_allclose(history.metadata["step_norms"], config.stepsize, atol=1e-10)


@pytest.mark.parametrize("budget,iterations", [(3, 1), (13, 4), (14, 4), (15, 5)])
def test_budget_accounting(config, params, budget, iterations):
    """Test the run stops before an iteration would exceed the budget."""
    history = run_gibo(quadratic, np.zeros(2), config, budget, params, make_rng(2))
    assert history.metadata["iterations"] == iterations
    assert len(history) == 3 * iterations


def test_budget_smaller_than_iteration(config, params):
    """Test a budget below M + 1 raises InputError."""
    with pytest.raises(InputError):
        run_gibo(quadratic, np.zeros(2), config, 2, params, make_rng(0))


def test_constant_objective_keeps_iterate(config, params):
    """Test a zero posterior gradient skips the step but still spends the evaluations."""
    history = run_gibo(lambda theta: 0.0, np.array([0.1, 0.2]), config, 9, params, make_rng(3))
    assert history.metadata["degenerate_steps"] == 3
    assert history.metadata["step_norms"] == []
    assert history.metadata["final_iterate"] == [0.1, 0.2]
    assert len(history) == 9


def test_run_is_deterministic(config, params):
    """Test two runs with the same seed produce identical histories."""
    first = run_gibo(quadratic, np.zeros(2), config, 15, params, make_rng(4))
    second = run_gibo(quadratic, np.zeros(2), config, 15, params, make_rng(4))
    np.testing.assert_array_equal(first.points, second.points)
    np.testing.assert_array_equal(first.ys, second.ys)


def test_gibo_climbs_a_quadratic(config, params):
    """Test GIBO moves toward the maximum of a smooth quadratic."""
    history = run_gibo(quadratic, np.zeros(2), config, 45, params, make_rng(5))
    final = np.array(history.metadata["final_iterate"])
    assert quadratic(final) > quadratic(np.zeros(2)) + 0.1


def test_gibo_converges_on_se_bump():
    """Test GIBO walks from 0.7 to the maximizer of a 1-d squared-exponential bump at 0.3."""

    def bump(theta):
        return float(np.exp(-0.5 * ((theta[0] - 0.3) / 0.2) ** 2))

    config = GiboConfig(stepsize=0.25, samples_per_step=1, window=6, delta_b=0.1, restarts=2, raw_samples=16)
    params = KernelParams.isotropic(1, 0.2, 1.0, 1e-3)
    history = run_gibo(bump, np.array([0.7]), config, 40, params, make_rng(9))
    final = history.metadata["final_iterate"][0]
    # normalized steps move 0.25 * 0.2 = 0.05 per iteration
    assert abs(final - 0.3) <= 0.1
    assert max(history.ys) > 0.95


def test_history_records_iterates(config, params):
    """Test acquisition queries are recorded against the iterate they were chosen for."""
    history = run_gibo(quadratic, np.zeros(2), config, 6, params, make_rng(6))
    for record in history.records[:3]:
        np.testing.assert_array_equal(record.iterate, np.zeros(2))
    np.testing.assert_array_equal(history.records[3].point, history.records[3].iterate)
    assert list(history.best_ys) == sorted(history.best_ys)


def test_refit_updates_hyperparameters(params):
    """Test refitting replaces the kernel parameters with a MAP estimate within the prior box."""
    hyperpriors = Hyperpriors(UniformPrior(0.05, 0.6), FixedPrior(1.0), FixedPrior(0.1))
    config = GiboConfig(
        stepsize=0.2, samples_per_step=2, window=8, delta_b=0.2,
        refit=True, hyperpriors=hyperpriors, restarts=2, raw_samples=16,
    )
    history = run_gibo(quadratic, np.zeros(2), config, 9, params, make_rng(7))
    lengthscales = np.array(history.metadata["final_params"]["lengthscales"])
    assert np.all((lengthscales >= 0.05 * (1 - 1e-9)) & (lengthscales <= 0.6 * (1 + 1e-9)))


def test_optimizer_uses_prior_mode_without_params():
    """Test GIBOOptimizer falls back to the hyperprior modes and needs them when no params are given."""
    hyperpriors = Hyperpriors(UniformPrior(0.1, 0.5), FixedPrior(1.0), FixedPrior(0.1))
    optimizer = GIBOOptimizer(
        GiboConfig(stepsize=0.2, samples_per_step=1, window=4, delta_b=0.2, hyperpriors=hyperpriors, restarts=1, raw_samples=8)
    )
    history = optimizer.run(quadratic, np.zeros(2), 4, make_rng(8))
    assert len(history) == 4
    assert optimizer.evaluations_per_step == 2

    bare = GIBOOptimizer(GiboConfig(stepsize=0.2, samples_per_step=1, window=4, delta_b=0.2))
    with pytest.raises(InputError):
        bare.run(quadratic, np.zeros(2), 4, make_rng(8))
