# src/benchmarks/benchmark_factory.py

import logging

from src.utils import logger as logger_utils
from src.utils.exceptions import InputError
from .base_benchmark import BaseBenchmark
from .lqr import RolloutConfig
from .lqr_benchmark import LQRBenchmark
from .synthetic_benchmark import SyntheticBenchmark

logger = logging.getLogger("GIBO.Benchmarks")

BENCHMARK_CLASSES = {
    "synthetic-within": SyntheticBenchmark,
    "synthetic-out": SyntheticBenchmark,
    "lqr": LQRBenchmark,
}


def create_benchmark(
    kind: str,
    dim: int,
    seed: int,
    settings: dict,
    experiment_id: str = "N/A",
) -> BaseBenchmark:
    """
    Builds the benchmark of one trial.

    Args:
        kind (str): Experiment kind, a key of BENCHMARK_CLASSES.
        dim (int): Dimension of synthetic objectives; ignored for LQR.
        seed (int): Trial seed of the objective.
        settings (dict): The [synthetic] or [lqr] section of a resolved configuration.
        experiment_id (str): Unique identifier for this experiment run.

    Returns:
        BaseBenchmark: The benchmark instance.

    Raises:
        InputError: If the kind is unknown.
    """
    if kind not in BENCHMARK_CLASSES:
        raise InputError(f"Invalid experiment kind: {kind}. Choose from {list(BENCHMARK_CLASSES.keys())}")

    if kind == "lqr":
        rollout = RolloutConfig(
            trajectory_length=settings["trajectory_length"],
            trajectories=settings["trajectories_per_call"],
            overflow_threshold=settings["overflow_threshold"],
        )
        benchmark = LQRBenchmark(
            rollout=rollout,
            experiment_id=experiment_id,
        )
    else:
        benchmark = SyntheticBenchmark(
            dim,
            seed,
            noise_std=settings["noise_std"],
            signal_variance=settings["signal_variance"],
            support_points=settings["support_points"],
            spread=settings["lengthscale_spread"],
            start_coordinate=settings["start_coordinate"],
            best_guess=settings["best_guess"],
            max_iterations=settings["global_max_iterations"],
            experiment_id=experiment_id,
        )

    logger_utils.log_with_experiment_id(
        logger, "debug",
        f"Created benchmark '{kind}' (dim={benchmark.dim}, seed={seed})",
        experiment_id,
    )
    return benchmark
