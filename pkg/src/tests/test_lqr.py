# src/tests/test_lqr.py

import numpy as np
import pytest
from scipy.linalg import LinAlgError
from unittest.mock import patch

from src.benchmarks.lqr import (
    LQRInstance,
    LQROracle,
    RolloutConfig,
    average_cost,
    benchmark_instance,
    cost_to_go,
    dare_residual,
    flatten_gain,
    is_stabilizing,
    lqr_oracle,
    relative_error,
    solve_dare,
    solve_dlyap,
    spectral_radius,
    transformed_reward,
    unflatten_gain,
)
from src.runstats import StateNormalizer
from src.utils.exceptions import InputError, StabilityError
from src.utils.rng import make_rng

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0


@pytest.fixture(scope="module")
def instance():
    return benchmark_instance()


def test_benchmark_instance_is_open_loop_unstable(instance):
    """Test the benchmark dynamics have spectral radius 1.01 + 0.01 sqrt(2)."""
    assert spectral_radius(instance.A) == pytest.approx(1.01 + 0.01 * np.sqrt(2.0), abs=1e-3)
    assert not is_stabilizing(np.zeros(9), instance)


def test_scalar_dare_is_golden_ratio():
    """Test the scalar Riccati equation with unit data gives P = golden ratio."""
    P, K = solve_dare([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    assert P[0, 0] == pytest.approx(GOLDEN, rel=1e-10)
    assert K[0, 0] == pytest.approx(-GOLDEN / (1.0 + GOLDEN), rel=1e-10)


def test_benchmark_riccati_residual(instance):
    """Test the stored Riccati solution satisfies the equation and stabilizes the loop."""
    P = instance.riccati_solution
    assert dare_residual(P, instance.A, instance.B, instance.Q, instance.R) < 1e-8
    assert is_stabilizing(instance.optimal_gain, instance)
    np.testing.assert_allclose(P, P.T)


def test_scalar_lyapunov():
    """Test Sigma = a^2 Sigma + w gives w / (1 - a^2)."""
    assert solve_dlyap([[0.5]], [[1.0]])[0, 0] == pytest.approx(4.0 / 3.0)


def test_lyapunov_rejects_unstable_matrix():
    """Test solve_dlyap raises StabilityError for spectral radius >= 1."""
    with pytest.raises(StabilityError):
        solve_dlyap([[1.0]], [[1.0]])


def test_relative_error_zero_at_optimum(instance):
    """Test the optimal gain has zero relative error."""
    error = relative_error(instance.optimal_gain, instance)
    assert error.stable
    assert error.value < 1e-10


def test_relative_error_of_unstable_gain(instance):
    """Test a non-stabilizing gain scores (inf, False)."""
    assert relative_error(np.zeros(9), instance) == (np.inf, False)


def test_relative_error_matches_cost_gap(instance):
    """Test the curvature form of the relative error equals (J(K) - J*) / J*."""
    K = instance.optimal_gain - 0.05 * np.eye(3)
    error = relative_error(K, instance)
    gap = (average_cost(K, instance) - instance.optimal_cost) / instance.optimal_cost
    assert error.value == pytest.approx(gap, rel=1e-6)


def test_cost_forms_agree(instance):
    """Test the covariance and value forms of the average cost agree, and J(K*) == Tr(W P)."""
    K = -0.5 * np.eye(3)
    assert average_cost(K, instance) == pytest.approx(cost_to_go(K, instance), rel=1e-9)
    assert average_cost(instance.optimal_gain, instance) == pytest.approx(instance.optimal_cost, rel=1e-9)
    assert cost_to_go(np.zeros((3, 3)), instance) == np.inf


def test_gain_flattening_is_row_major(instance):
    """Test gains flatten row-major and reject the wrong size."""
    K = np.arange(9.0).reshape(3, 3)
    np.testing.assert_array_equal(flatten_gain(K), np.arange(9.0))
    np.testing.assert_array_equal(unflatten_gain(np.arange(9.0), instance), K)
    with pytest.raises(InputError):
        unflatten_gain(np.zeros(4), instance)


def test_instance_validation():
    """Test LQRInstance rejects mismatched shapes and an indefinite R."""
    with pytest.raises(InputError):
        LQRInstance(A=np.eye(2), B=np.eye(2), Q=np.eye(3), R=np.eye(2), W=np.eye(2))
    with pytest.raises(InputError):
        LQRInstance(A=np.eye(2), B=np.eye(2), Q=np.eye(2), R=-np.eye(2), W=np.eye(2))


def test_transformed_reward():
    """Test -log(1 + cost) at zero and its monotonicity."""
    assert transformed_reward(0.0) == 0.0
    assert transformed_reward(1.0) < transformed_reward(0.5) < 0.0


def test_rollout_is_seeded_and_prefers_optimal_gain(instance):
    """Test rollouts reproduce under a seed and the optimal gain beats an overly aggressive one."""
    config = RolloutConfig(trajectory_length=200, trajectories=4)
    theta_star = flatten_gain(instance.optimal_gain)
    first = lqr_oracle(theta_star, instance, config, make_rng(0))
    second = lqr_oracle(theta_star, instance, config, make_rng(0))
    assert first == second
    assert first <= 0.0
    aggressive = lqr_oracle(flatten_gain(-1.5 * np.eye(3)), instance, config, make_rng(0))
    assert first > aggressive


def test_divergent_rollout_stays_finite(instance):
    """Test an exploding closed loop is truncated and still returns a finite reward."""
    config = RolloutConfig(trajectory_length=100, trajectories=2, overflow_threshold=1e6)
    value = lqr_oracle(flatten_gain(5.0 * np.eye(3)), instance, config, make_rng(1))
    assert np.isfinite(value)
    assert value < lqr_oracle(flatten_gain(instance.optimal_gain), instance, config, make_rng(1))


def test_oracle_counts_timesteps(instance):
    """Test LQROracle counts calls and timesteps."""
    oracle = LQROracle(instance, RolloutConfig(trajectory_length=10, trajectories=2), rng=3)
    for _ in range(3):
        oracle(np.zeros(9))
    assert oracle.calls == 3
    assert oracle.timesteps == 60


def test_oracle_feeds_normalizer(instance):
    """Test rollouts with a normalizer record states and the scale in effect per call."""
    normalizer = StateNormalizer(3)
    oracle = LQROracle(instance, RolloutConfig(trajectory_length=20), rng=4, normalizer=normalizer)
    oracle(flatten_gain(instance.optimal_gain))
    normalizer.commit()
    oracle(flatten_gain(instance.optimal_gain))
    assert len(oracle.state_scales) == 2
    np.testing.assert_array_equal(oracle.state_scales[0], np.ones(3))
    assert not np.array_equal(oracle.state_scales[1], np.ones(3))


def test_rollout_config_validation():
    """Test RolloutConfig rejects empty rollouts."""
    with pytest.raises(InputError):
        RolloutConfig(trajectory_length=0)
    assert RolloutConfig(trajectory_length=300, trajectories=2).timesteps == 600


def test_instance_save_and_load(instance, tmp_path):
    """Test an instance round-trips through npz with its Riccati solution."""
    path = tmp_path / "lqr.npz"
    instance.save(str(path))
    loaded = LQRInstance.load(str(path))
    np.testing.assert_array_equal(loaded.A, instance.A)
    np.testing.assert_array_equal(loaded.optimal_gain, instance.optimal_gain)
    assert loaded.optimal_cost == instance.optimal_cost


def _empirical_average_cost(K, instance, rng, trajectories=500, steps=2300, burn_in=300):
    """Time-and-ensemble average of x^T Q x + u^T R u under u = K x and the instance noise."""
    n = instance.state_dim
    X = np.zeros((trajectories, n))
    total = 0.0
    for t in range(steps):
        U = X @ K.T
        if t >= burn_in:
            total += np.sum((X @ instance.Q) * X) + np.sum((U @ instance.R) * U)
        X = X @ instance.A.T + U @ instance.B.T + rng.standard_normal((trajectories, n)) @ instance.noise_factor.T
    return total / (trajectories * (steps - burn_in))


def test_relative_error_matches_simulated_cost_gap(instance):
    """Test the closed-form relative error agrees with a simulated average-cost gap."""
    K = instance.optimal_gain - 0.05 * np.eye(3)
    # common random numbers for both gains
    cost = _empirical_average_cost(K, instance, make_rng(5))
    optimal = _empirical_average_cost(instance.optimal_gain, instance, make_rng(5))
    assert (cost - optimal) / optimal == pytest.approx(relative_error(K, instance).value, rel=0.1, abs=0.02)


def test_noise_free_rollout_by_hand():
    """Test a noise-free scalar rollout from x0 = 1 matches the hand-stepped rewards."""
    scalar = LQRInstance(A=[[1.1]], B=[[1.0]], Q=[[1.0]], R=[[1.0]], W=[[0.0]])
    config = RolloutConfig(trajectory_length=3, initial_state=np.array([1.0]))
    # x: 1 -> 0.6 -> 0.36, u = -0.5 x
    costs = np.array([1.0 + 0.25, 0.36 + 0.09, 0.1296 + 0.0324])
    expected = float(np.mean(-np.log1p(costs)))
    assert lqr_oracle(np.array([-0.5]), scalar, config, make_rng(0)) == pytest.approx(expected, rel=1e-12)
    assert lqr_oracle(np.array([-0.5]), scalar, config, make_rng(99)) == pytest.approx(expected, rel=1e-12)


def test_noise_free_rollout_of_benchmark_dynamics(instance):
    """Test a noise-free rollout from e1 follows x_{t+1} = (A + B K) x_t."""
    quiet = LQRInstance(A=instance.A, B=instance.B, Q=instance.Q, R=instance.R, W=np.zeros((3, 3)))
    K = -0.5 * np.eye(3)
    x, rewards = np.array([1.0, 0.0, 0.0]), []
    for _ in range(5):
        u = K @ x
        rewards.append(-np.log1p(x @ quiet.Q @ x + u @ quiet.R @ u))
        x = quiet.A @ x + quiet.B @ u
    config = RolloutConfig(trajectory_length=5, initial_state=np.array([1.0, 0.0, 0.0]))
    assert lqr_oracle(flatten_gain(K), quiet, config, make_rng(0)) == pytest.approx(np.mean(rewards), rel=1e-12)


def test_dare_fallback_scalar():
    """Test the Riccati recursion solves the scalar a = 1.1 case when the scipy solver fails."""
    a = 1.1
    P_exact = (a**2 + np.sqrt(a**4 + 4.0)) / 2.0
    with patch("src.benchmarks.lqr.solve_discrete_are", side_effect=LinAlgError("failed")) as solver:
        P, K = solve_dare([[a]], [[1.0]], [[1.0]], [[1.0]])
    solver.assert_called_once()
    assert P[0, 0] == pytest.approx(P_exact, rel=1e-10)
    assert K[0, 0] == pytest.approx(-a * P_exact / (1.0 + P_exact), rel=1e-10)


def test_dare_fallback_benchmark_instance(instance):
    """Test the Riccati recursion reproduces the scipy solution of the benchmark instance."""
    with patch("src.benchmarks.lqr.solve_discrete_are", side_effect=LinAlgError("failed")):
        P, K = solve_dare(instance.A, instance.B, instance.Q, instance.R)
    assert dare_residual(P, instance.A, instance.B, instance.Q, instance.R) < 1e-8
    np.testing.assert_allclose(P, instance.riccati_solution, atol=1e-9)
    np.testing.assert_allclose(K, instance.optimal_gain, atol=1e-9)


def test_dare_fallback_on_inaccurate_solution():
    """Test a scipy solution that misses the residual tolerance is replaced by the recursion."""
    with patch("src.benchmarks.lqr.solve_discrete_are", return_value=np.zeros((1, 1))):
        P, _ = solve_dare([[1.0]], [[1.0]], [[1.0]], [[1.0]])
    assert P[0, 0] == pytest.approx(GOLDEN, rel=1e-10)
