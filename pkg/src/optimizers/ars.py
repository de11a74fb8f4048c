# src/optimizers/ars.py

"""
Augmented Random Search (reward-std scaling with top-b elitism).

Each update draws N standard-normal directions, evaluates the objective on both sides of
every direction and moves along the finite differences of the b best directions, scaled by
the standard deviation of the returns it used.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.config.constants import RETURN_STD_FLOOR
from src.utils import logger as logger_utils
from src.utils.exceptions import InputError
from .base_optimizer import BaseOptimizer, Oracle, RunHistory

logger = logging.getLogger("GIBO.Optimizers")


@dataclass(frozen=True)
class ArsConfig:
    """
    Attributes:
        stepsize (float): alpha > 0.
        perturbation (float): nu > 0, scale of the exploration directions.
        directions (int): N >= 1 directions per update.
        elite (int): b best directions kept, 0 keeps all of them.
        state_normalization (bool): Refresh the oracle's state statistics after each update.
    """

    stepsize: float
    perturbation: float
    directions: int
    elite: int = 0
    state_normalization: bool = False

    def __post_init__(self):
        if not self.stepsize > 0:
            raise InputError(f"stepsize must be positive, got {self.stepsize}")
        if not self.perturbation > 0:
            raise InputError(f"perturbation must be positive, got {self.perturbation}")
        if self.directions < 1:
            raise InputError(f"directions must be >= 1, got {self.directions}")
        if not 0 <= self.elite <= self.directions:
            raise InputError(f"elite must lie in [0, {self.directions}], got {self.elite}")

    @property
    def used_directions(self) -> int:
        return self.elite if self.elite > 0 else self.directions

    @property
    def evaluations_per_update(self) -> int:
        return 2 * self.directions


def ars_step(
    theta: np.ndarray,
    directions: np.ndarray,
    y_plus: np.ndarray,
    y_minus: np.ndarray,
    config: ArsConfig,
) -> np.ndarray:
    """
    The ARS parameter update for already evaluated directions.

    Args:
        theta (np.ndarray): Current parameters, shape (d,).
        directions (np.ndarray): Directions delta_k, shape (N, d).
        y_plus (np.ndarray): Returns at theta + nu * delta_k, shape (N,).
        y_minus (np.ndarray): Returns at theta - nu * delta_k, shape (N,).
        config (ArsConfig): Optimizer configuration.

    Returns:
        np.ndarray: theta + alpha / (b * sigma_R) * sum_k (y+_k - y-_k) delta_k over the b
        directions with the largest max(y+_k, y-_k).
    """
    y_plus = np.asarray(y_plus, dtype=float)
    y_minus = np.asarray(y_minus, dtype=float)
    b = config.used_directions
    # stable sort: earlier directions win ties
    order = np.argsort(-np.maximum(y_plus, y_minus), kind="stable")[:b]
    used = np.concatenate([y_plus[order], y_minus[order]])
    sigma = max(float(np.std(used)), RETURN_STD_FLOOR)
    differences = y_plus[order] - y_minus[order]
    return theta + config.stepsize / (b * sigma) * (differences @ directions[order])


def ars_update(
    theta: np.ndarray,
    oracle: Oracle,
    config: ArsConfig,
    rng: np.random.Generator,
    history: Optional[RunHistory] = None,
) -> Tuple[np.ndarray, int]:
    """
    One ARS update: 2N oracle calls, plus then minus for each direction.

    Returns:
        Tuple[np.ndarray, int]: The new parameters and the number of evaluations used.
    """
    theta = np.asarray(theta, dtype=float)
    directions = rng.standard_normal((config.directions, theta.shape[0]))
    y_plus = np.empty(config.directions)
    y_minus = np.empty(config.directions)
    for k, delta in enumerate(directions):
        for sign, target in ((1.0, y_plus), (-1.0, y_minus)):
            point = theta + sign * config.perturbation * delta
            target[k] = oracle(point)
            if history is not None:
                history.append(point, target[k], theta)
    return ars_step(theta, directions, y_plus, y_minus, config), config.evaluations_per_update


def run_ars(
    oracle: Oracle,
    theta0: np.ndarray,
    budget: int,
    config: ArsConfig,
    rng: np.random.Generator,
    experiment_id: str = "N/A",
) -> RunHistory:
    """
    Loops ars_update while a full update fits into `budget`; the evaluations used are
    `budget` rounded down to a multiple of 2N.

    With state normalization the oracle must expose a `normalizer` whose statistics are
    committed after every update, so all rollouts of one update share the same transform.
    """
    if budget < config.evaluations_per_update:
        raise InputError(f"budget {budget} is smaller than one update ({config.evaluations_per_update})")
    normalizer = getattr(oracle, "normalizer", None) if config.state_normalization else None
    if config.state_normalization and normalizer is None:
        raise InputError("state_normalization requires an oracle with a normalizer")

    theta = np.atleast_1d(np.asarray(theta0, dtype=float)).copy()
    history = RunHistory(metadata={"updates": 0})
    while len(history) + config.evaluations_per_update <= budget:
        theta, _ = ars_update(theta, oracle, config, rng, history)
        if normalizer is not None:
            normalizer.commit()
        history.metadata["updates"] += 1
        logger_utils.log_with_experiment_id(
            logger, "debug",
            f"ARS update {history.metadata['updates']} done",
            experiment_id,
            extra_info={"theta": theta, "best_y": history[-1].best_y},
        )
    history.metadata["final_iterate"] = theta.tolist()
    return history


class ARSOptimizer(BaseOptimizer):
    name = "ars"

    @property
    def evaluations_per_step(self) -> int:
        return self.config.evaluations_per_update

    def run(self, oracle, theta0, budget, rng, params=None) -> RunHistory:
        history = run_ars(oracle, theta0, budget, self.config, rng, self.experiment_id)
        self.log_run(history, {"updates": history.metadata["updates"]})
        return history
