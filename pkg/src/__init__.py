# src/__init__.py

"""
GIBO Benchmark Suite

This package provides:
- **GP core**: squared-exponential kernel, incremental Cholesky, value and Jacobian posteriors,
  MAP hyperparameter fitting.
- **Acquisition**: the gradient-information criterion and its multistart maximizer.
- **Optimizers**: GIBO, Augmented Random Search and vanilla BO with expected improvement.
- **Benchmarks**: GP-sampled synthetic objectives and LQR policy search.
- **Utilities**: logging, seeding, configuration, result files.
"""

from .benchmarks import create_benchmark
from .optimizers import create_optimizer
from .run_experiment import run_experiment, run_trial

__all__ = [
    "create_benchmark",
    "create_optimizer",
    "run_experiment",
    "run_trial",
]
