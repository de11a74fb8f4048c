# src/tests/test_benchmark_factory.py

import numpy as np
import pytest

from src.benchmarks import LQRBenchmark, SyntheticBenchmark, create_benchmark
from src.config.params import load_experiment_config
from src.utils.exceptions import InputError


@pytest.fixture
def synthetic_section(small_within_config):
    return load_experiment_config(small_within_config)["synthetic"]


def test_synthetic_benchmark_uses_signal_variance(synthetic_section):
    """Test the configured signal variance reaches the generated objective."""
    synthetic_section["signal_variance"] = 2.5
    benchmark = create_benchmark("synthetic-within", 2, 5, synthetic_section)
    assert isinstance(benchmark, SyntheticBenchmark)
    assert benchmark.objective.params.signal_variance == 2.5
    assert benchmark.true_params.signal_variance == 2.5


def test_synthetic_benchmark_settings(synthetic_section):
    """Test the start point, bounds and noise come from the synthetic section."""
    benchmark = create_benchmark("synthetic-out", 2, 5, synthetic_section)
    np.testing.assert_array_equal(benchmark.start_point(), [0.5, 0.5])
    np.testing.assert_array_equal(benchmark.bounds, [[0.0, 1.0], [0.0, 1.0]])
    assert benchmark.objective.noise_std == synthetic_section["noise_std"]


def test_lqr_benchmark_settings():
    """Test the LQR benchmark takes its rollout settings from the lqr section."""
    section = load_experiment_config({"experiment": {"kind": "lqr"}, "lqr": {"trajectory_length": "50"}})["lqr"]
    benchmark = create_benchmark("lqr", 9, 0, section)
    assert isinstance(benchmark, LQRBenchmark)
    assert benchmark.rollout.trajectory_length == 50
    np.testing.assert_array_equal(benchmark.start_point(), np.zeros(9))


def test_unknown_kind():
    """Test an unknown kind raises InputError."""
    with pytest.raises(InputError, match="Invalid experiment kind"):
        create_benchmark("cartpole", 2, 0, {})
