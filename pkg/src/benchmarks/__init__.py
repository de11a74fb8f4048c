# src/benchmarks/__init__.py
"""
Benchmarks: GP-sampled synthetic objectives and the LQR policy-search task.
"""

from .base_benchmark import BaseBenchmark, TrialScore
from .synthetic import (
    SyntheticObjective,
    approx_global_max,
    delta_sub,
    generate_objective,
    lengthscale_bounds,
    normalized_regret,
    sample_lengthscale,
    sobol_points,
)
from .lqr import (
    LQRInstance,
    LQROracle,
    RelativeError,
    RolloutConfig,
    average_cost,
    cost_to_go,
    benchmark_instance,
    flatten_gain,
    is_stabilizing,
    lqr_oracle,
    relative_error,
    solve_dare,
    solve_dlyap,
    spectral_radius,
    unflatten_gain,
)
from .synthetic_benchmark import SyntheticBenchmark
from .lqr_benchmark import LQRBenchmark
from .benchmark_factory import BENCHMARK_CLASSES, create_benchmark

__all__ = [
    "BaseBenchmark",
    "TrialScore",
    "SyntheticObjective",
    "approx_global_max",
    "delta_sub",
    "generate_objective",
    "lengthscale_bounds",
    "normalized_regret",
    "sample_lengthscale",
    "sobol_points",
    "LQRInstance",
    "LQROracle",
    "RelativeError",
    "RolloutConfig",
    "average_cost",
    "cost_to_go",
    "benchmark_instance",
    "flatten_gain",
    "is_stabilizing",
    "lqr_oracle",
    "relative_error",
    "solve_dare",
    "solve_dlyap",
    "spectral_radius",
    "unflatten_gain",
    "SyntheticBenchmark",
    "LQRBenchmark",
    "BENCHMARK_CLASSES",
    "create_benchmark",
]
