# src/benchmarks/synthetic_benchmark.py

import numpy as np

from src.gp.kernels import KernelParams
from src.optimizers.base_optimizer import RunHistory
from src.utils.exceptions import InputError
from .base_benchmark import BaseBenchmark, TrialScore
from .synthetic import SyntheticObjective, generate_objective, normalized_regret


class SyntheticBenchmark(BaseBenchmark):
    """
    One seeded synthetic objective on [0, 1]^d, started from `start_coordinate` * 1 and
    scored by normalized regret.

    Args:
        dim (int): Dimension.
        seed (int): Objective seed.
        noise_std (float): Evaluation noise.
        signal_variance (float): Prior signal variance of the generated objective.
        support_points (int): Number of Sobol support points.
        spread (float): Relative half-width of the lengthscale interval.
        start_coordinate (float): Coordinate of the start point in every dimension.
        best_guess (str): "noiseless" or "noisy" best-guess selection when scoring.
        max_iterations (int): Iteration cap of the global-maximum search.
        objective (SyntheticObjective, optional): Pre-built objective; skips generation.
        experiment_id (str): Unique identifier for this experiment run.
    """

    name = "synthetic"

    def __init__(
        self,
        dim: int,
        seed: int,
        noise_std: float = 0.1,
        signal_variance: float = 1.0,
        support_points: int = 1000,
        spread: float = 0.3,
        start_coordinate: float = 0.5,
        best_guess: str = "noiseless",
        max_iterations: int = 10_000,
        objective: SyntheticObjective = None,
        experiment_id: str = "N/A",
    ):
        super().__init__(dim, experiment_id)
        self.start_coordinate = start_coordinate
        self.best_guess = best_guess
        self.objective = objective or generate_objective(
            dim,
            seed,
            support_points=support_points,
            noise_std=noise_std,
            signal_variance=signal_variance,
            spread=spread,
            max_iterations=max_iterations,
            experiment_id=experiment_id,
        )

    def start_point(self) -> np.ndarray:
        return np.full(self.dim, self.start_coordinate)

    @property
    def bounds(self) -> np.ndarray:
        return np.tile([0.0, 1.0], (self.dim, 1))

    @property
    def true_params(self) -> KernelParams:
        return self.objective.true_params

    def make_oracle(self, rng: np.random.Generator, state_normalization: bool = False):
        if state_normalization:
            raise InputError("Synthetic objectives have no state to normalize")
        objective = self.objective

        def oracle(theta) -> float:
            return objective.evaluate_noisy(theta, rng)

        return oracle

    def score(self, history: RunHistory, oracle=None) -> TrialScore:
        regret = normalized_regret(self.objective, history, self.best_guess, self.start_point())
        return TrialScore(np.arange(1, len(history) + 1), regret)
