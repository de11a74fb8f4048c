# src/benchmarks/base_benchmark.py

import logging
from typing import NamedTuple, Optional

import numpy as np

from src.gp.kernels import KernelParams
from src.optimizers.base_optimizer import Oracle, RunHistory
from src.utils import logger as logger_utils

logger = logging.getLogger("GIBO.Benchmarks")


class TrialScore(NamedTuple):
    """
    Per-evaluation scoring of one run.

    Attributes:
        evaluations (np.ndarray): Evaluation index (synthetic) or cumulative timesteps (LQR).
        metric (np.ndarray): Normalized regret or relative error.
        stable (np.ndarray, optional): Stability flag of the current iterate (LQR only).
    """

    evaluations: np.ndarray
    metric: np.ndarray
    stable: Optional[np.ndarray] = None


class BaseBenchmark:
    """
    Base class for benchmarks, providing a template for oracle construction and scoring.

    Attributes:
        name (str): Benchmark name used in logs.
        dim (int): Dimension of the optimizer's search space.
        experiment_id (str): Unique identifier for this experiment run.
    """

    name = "base"

    def __init__(self, dim: int, experiment_id: str = "N/A"):
        self.dim = dim
        self.experiment_id = experiment_id

    def start_point(self) -> np.ndarray:
        raise NotImplementedError("Subclasses must implement start_point()")

    @property
    def bounds(self) -> Optional[np.ndarray]:
        """Domain box of shape (d, 2), or None for unbounded search spaces."""
        return None

    @property
    def true_params(self) -> Optional[KernelParams]:
        """Kernel parameters of the generating process, when known."""
        return None

    def make_oracle(self, rng: np.random.Generator, state_normalization: bool = False) -> Oracle:
        """
        A fresh oracle drawing its noise from `rng`. State normalization is only
        available for state-based oracles.
        """
        raise NotImplementedError("Subclasses must implement make_oracle()")

    def score(self, history: RunHistory, oracle=None) -> TrialScore:
        raise NotImplementedError("Subclasses must implement score()")

    def log_score(self, score: TrialScore, optimizer: str) -> None:
        extra_info = {"optimizer": optimizer, "final_metric": float(score.metric[-1])}
        if score.stable is not None:
            extra_info["stable"] = bool(score.stable[-1])
        logger_utils.log_with_experiment_id(
            logger, "info",
            f"{self.name}: {optimizer} scored",
            self.experiment_id,
            extra_info=extra_info,
        )
