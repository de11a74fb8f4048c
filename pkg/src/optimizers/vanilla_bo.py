# src/optimizers/vanilla_bo.py

"""
Global Bayesian optimization with Expected Improvement over a box domain.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from src.gp.hyperparameters import Hyperpriors, fit_hyperparameters_map
from src.gp.kernels import KernelParams
from src.gp.posterior import Dataset, GPModel
from src.utils import logger as logger_utils
from src.utils.exceptions import InputError
from .base_optimizer import BaseOptimizer, Oracle, RunHistory

logger = logging.getLogger("GIBO.Optimizers")


@dataclass(frozen=True)
class EiConfig:
    """
    Attributes:
        xi (float): Exploration offset, >= 0.
        restarts (int): L-BFGS-B ascents per suggestion.
        raw_samples (int): Uniform candidates per suggestion.
        refit_every (int): MAP refit cadence in evaluations when hyperpriors are used.
    """

    xi: float = 0.0
    restarts: int = 5
    raw_samples: int = 256
    refit_every: int = 5

    def __post_init__(self):
        if self.xi < 0:
            raise InputError(f"xi must be non-negative, got {self.xi}")
        if self.restarts < 1:
            raise InputError(f"restarts must be >= 1, got {self.restarts}")
        if self.raw_samples < 1:
            raise InputError(f"raw_samples must be >= 1, got {self.raw_samples}")
        if self.refit_every < 1:
            raise InputError(f"refit_every must be >= 1, got {self.refit_every}")


def expected_improvement(mean, std, best: float, xi: float = 0.0):
    """
    Closed-form EI for a maximization problem; vectorized over mean and std.

    (mean - best - xi) Phi(z) + std phi(z) with z = (mean - best - xi) / std, and
    max(mean - best - xi, 0) where std == 0.
    """
    mean = np.asarray(mean, dtype=float)
    std = np.asarray(std, dtype=float)
    if np.any(std < 0):
        raise InputError("std must be non-negative")
    a = mean - best - xi
    positive = std > 0
    safe_std = np.where(positive, std, 1.0)
    z = a / safe_std
    ei = np.where(positive, a * norm.cdf(z) + std * norm.pdf(z), np.maximum(a, 0.0))
    ei = np.maximum(ei, 0.0)
    return float(ei) if ei.ndim == 0 else ei


def suggest_ei(
    model: Optional[GPModel],
    best: float,
    bounds: np.ndarray,
    config: EiConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """
    Maximizes EI over `bounds` (shape (d, 2)) by random sampling followed by L-BFGS-B from
    the best raw samples. Without data EI is constant, so the first raw sample is returned.
    """
    lower, upper = bounds[:, 0], bounds[:, 1]
    raw = rng.uniform(lower, upper, size=(config.raw_samples, bounds.shape[0]))
    if model is None or model.size == 0:
        return raw[0]

    def acquisition(X: np.ndarray) -> np.ndarray:
        means, variances = model.posterior_values(X)
        return expected_improvement(means, np.sqrt(variances), best, config.xi)

    values = np.atleast_1d(acquisition(raw))
    best_index = int(np.argmax(values))
    x_best, ei_best = raw[best_index], values[best_index]

    order = np.argsort(-values, kind="stable")[: config.restarts]
    for index in order:
        res = minimize(
            lambda x: -float(acquisition(x[None, :])[0]),
            raw[index],
            bounds=bounds,
            method="L-BFGS-B",
        )
        if -res.fun > ei_best:
            x_best, ei_best = res.x, -res.fun
    return np.clip(x_best, lower, upper)


def run_vanilla_bo(
    oracle: Oracle,
    theta0: np.ndarray,
    bounds: np.ndarray,
    budget: int,
    config: EiConfig,
    rng: np.random.Generator,
    params: Optional[KernelParams] = None,
    hyperpriors: Optional[Hyperpriors] = None,
    experiment_id: str = "N/A",
) -> RunHistory:
    """
    Classic BO loop: condition the GP on all data, maximize EI, query, repeat.

    The first query is theta0. With `hyperpriors` the kernel is MAP-refitted every
    `config.refit_every` evaluations; otherwise `params` stay fixed.

    Args:
        oracle (Oracle): Noisy objective.
        theta0 (np.ndarray): First query point.
        bounds (np.ndarray): Domain box, shape (d, 2).
        budget (int): Number of oracle calls, >= 1.
        config (EiConfig): Acquisition configuration.
        rng (np.random.Generator): Source of all randomness of the run.
        params (KernelParams, optional): Kernel parameters, or the warm start when refitting.
        hyperpriors (Hyperpriors, optional): Enables MAP refitting.
        experiment_id (str): Identifier used in log records.

    Returns:
        RunHistory: Exactly `budget` evaluations.
    """
    if budget < 1:
        raise InputError(f"budget must be >= 1, got {budget}")
    bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
    theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
    dim = bounds.shape[0]
    if theta0.shape != (dim,):
        raise InputError(f"theta0 has shape {theta0.shape}, bounds expect ({dim},)")
    if params is None:
        if hyperpriors is None:
            raise InputError("Vanilla BO needs kernel parameters or hyperpriors")
        params = hyperpriors.mode_params(dim)

    data = Dataset(dim)
    history = RunHistory(metadata={"refits": 0})
    query = theta0
    while len(history) < budget:
        y = oracle(query)
        data.append(query, y)
        history.append(query, y, query)
        if len(history) == budget:
            break
        if hyperpriors is not None and len(data) >= 2 and len(data) % config.refit_every == 0:
            params = fit_hyperparameters_map(
                data, hyperpriors, initial=params, seed=int(rng.integers(2**32)), experiment_id=experiment_id
            )
            history.metadata["refits"] += 1
        model = GPModel.from_dataset(data, params)
        query = suggest_ei(model, float(np.max(data.y)), bounds, config, rng)

    logger_utils.log_with_experiment_id(
        logger, "debug",
        "Vanilla BO finished",
        experiment_id,
        extra_info={"evaluations": len(history), "params": params.as_dict()},
    )
    history.metadata["final_params"] = params.as_dict()
    return history


class VanillaBOOptimizer(BaseOptimizer):
    """
    Vanilla BO over a fixed box. `config` is an EiConfig; bounds and hyperpriors are
    passed at construction.
    """

    name = "vbo"

    def __init__(self, config: EiConfig, bounds, hyperpriors: Optional[Hyperpriors] = None, experiment_id: str = "N/A"):
        super().__init__(config, experiment_id)
        self.bounds = np.asarray(bounds, dtype=float).reshape(-1, 2)
        self.hyperpriors = hyperpriors

    @property
    def evaluations_per_step(self) -> int:
        return 1

    def run(self, oracle, theta0, budget, rng, params=None) -> RunHistory:
        history = run_vanilla_bo(
            oracle, theta0, self.bounds, budget, self.config, rng,
            params=params, hyperpriors=self.hyperpriors, experiment_id=self.experiment_id,
        )
        self.log_run(history, {"refits": history.metadata["refits"]})
        return history
