# src/optimizers/gibo.py

"""
GIBO: local Bayesian optimization by actively sampling for the gradient.

Each iteration evaluates the objective at the current iterate, spends M further
evaluations on points chosen by the GI acquisition (each one conditioned on the window of
the last N_m observations), and then takes a step along the posterior-mean gradient at the
iterate. With gradient normalization the step has Mahalanobis length exactly `stepsize`
in the metric L = diag(1 / lengthscales^2).
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from src.acquisition.gradient_information import VALID_JAC_MODES, GIContext, gi_gain, maximize_gi
from src.config.constants import DEGENERATE_GRADIENT_TOL
from src.gp.hyperparameters import Hyperpriors, fit_hyperparameters_map
from src.gp.kernels import KernelParams
from src.gp.posterior import Dataset, posterior_jacobian
from src.utils import logger as logger_utils
from src.utils.exceptions import DegenerateGradientError, InputError
from .base_optimizer import BaseOptimizer, Oracle, RunHistory

logger = logging.getLogger("GIBO.Optimizers")


@dataclass(frozen=True)
class GiboConfig:
    """
    Attributes:
        stepsize (float): eta > 0.
        samples_per_step (int): M >= 1, acquisition queries per gradient step.
        window (int): N_m >= M + 1, number of recent points the local GP sees.
        delta_b (float): Half-width of the acquisition box around the iterate.
        normalize_gradient (bool): Step along g / ||g||_L instead of g.
        refit (bool): MAP-refit the hyperparameters on the window each iteration.
        hyperpriors (Hyperpriors, optional): Required when refitting.
        ard (bool): Per-dimension lengthscales when refitting.
        restarts (int): Local ascents of the acquisition maximizer.
        raw_samples (int, optional): Uniform candidates of the acquisition maximizer.
        acquisition_jac (str): "analytic" or "finite-difference".
    """

    stepsize: float
    samples_per_step: int
    window: int
    delta_b: float
    normalize_gradient: bool = True
    refit: bool = False
    hyperpriors: Optional[Hyperpriors] = None
    ard: bool = True
    restarts: int = 5
    raw_samples: Optional[int] = None
    acquisition_jac: str = "analytic"

    def __post_init__(self):
        if not self.stepsize > 0:
            raise InputError(f"stepsize must be positive, got {self.stepsize}")
        if self.samples_per_step < 1:
            raise InputError(f"samples_per_step must be >= 1, got {self.samples_per_step}")
        if self.window < self.samples_per_step + 1:
            raise InputError(
                f"window must be >= samples_per_step + 1 = {self.samples_per_step + 1}, got {self.window}"
            )
        if not self.delta_b > 0:
            raise InputError(f"delta_b must be positive, got {self.delta_b}")
        if self.refit and self.hyperpriors is None:
            raise InputError("refit requires hyperpriors")
        if self.restarts < 1:
            raise InputError(f"restarts must be >= 1, got {self.restarts}")
        if self.acquisition_jac not in VALID_JAC_MODES:
            raise InputError(f"Unknown acquisition_jac '{self.acquisition_jac}'. Choose from {VALID_JAC_MODES}")

    @property
    def evaluations_per_iteration(self) -> int:
        return self.samples_per_step + 1


@dataclass
class OptimizerState:
    """
    Mutable state of a GIBO run. The dataset is append-only and holds every evaluation.
    """

    iterate: np.ndarray
    data: Dataset
    params: KernelParams
    iteration: int = 0

    @property
    def evaluations(self) -> int:
        return len(self.data)


def mahalanobis_norm(x: np.ndarray, lengthscales: np.ndarray) -> float:
    """sqrt(x^T L x) with L = diag(1 / lengthscales^2)."""
    scaled = np.asarray(x, dtype=float) / np.asarray(lengthscales, dtype=float)
    return float(np.sqrt(scaled @ scaled))


def normalize_gradient(gradient: np.ndarray, lengthscales: np.ndarray) -> np.ndarray:
    """
    Rescales a gradient to unit Mahalanobis length: g / sqrt(g^T L g).

    Raises:
        DegenerateGradientError: If the norm is below DEGENERATE_GRADIENT_TOL.
    """
    gradient = np.asarray(gradient, dtype=float)
    norm = mahalanobis_norm(gradient, lengthscales)
    if not norm >= DEGENERATE_GRADIENT_TOL:
        raise DegenerateGradientError(f"Gradient has Mahalanobis norm {norm:.3e}")
    return gradient / norm


def select_local_window(data: Dataset, window: int) -> Dataset:
    """The last min(window, n) points of `data`, in order."""
    return data.window(window)


def gibo_iteration(
    state: OptimizerState,
    oracle: Oracle,
    config: GiboConfig,
    rng: np.random.Generator,
    history: Optional[RunHistory] = None,
    experiment_id: str = "N/A",
) -> OptimizerState:
    """
    One outer iteration: M + 1 evaluations, an optional refit, one gradient step.

    A degenerate posterior gradient leaves the iterate where it is; the evaluations stay
    consumed. Oracle errors propagate with the evaluations made so far kept in `state.data`.
    """
    theta = state.iterate
    history = history if history is not None else RunHistory()

    y = oracle(theta)
    state.data.append(theta, y)
    history.append(theta, y, theta)

    params = state.params
    if config.refit:
        window = select_local_window(state.data, config.window)
        if len(window) >= 2:
            params = fit_hyperparameters_map(
                window,
                config.hyperpriors,
                initial=params,
                seed=int(rng.integers(2**32)),
                ard=config.ard,
                experiment_id=experiment_id,
            )

    for _ in range(config.samples_per_step):
        window = select_local_window(state.data, config.window)
        ctx = GIContext(theta, window.X, params, config.delta_b)
        query = maximize_gi(
            ctx,
            restarts=config.restarts,
            rng=rng,
            raw_samples=config.raw_samples,
            jac=config.acquisition_jac,
        )
        logger_utils.log_with_experiment_id(
            logger, "debug",
            "Acquisition query selected",
            experiment_id,
            extra_info={"query": query, "trace_reduction": gi_gain(query, ctx)},
        )
        y = oracle(query)
        state.data.append(query, y)
        history.append(query, y, theta)

    window = select_local_window(state.data, config.window)
    gradient = posterior_jacobian(theta, window, params).mean
    next_theta = theta
    try:
        direction = (
            normalize_gradient(gradient, params.lengthscales) if config.normalize_gradient else gradient
        )
        next_theta = theta + config.stepsize * direction
        history.metadata.setdefault("step_norms", []).append(
            mahalanobis_norm(next_theta - theta, params.lengthscales)
        )
    except DegenerateGradientError as e:
        history.metadata["degenerate_steps"] = history.metadata.get("degenerate_steps", 0) + 1
        logger_utils.log_with_experiment_id(
            logger, "warning",
            f"Skipping update at iteration {state.iteration}: {e}",
            experiment_id,
        )

    logger_utils.log_with_experiment_id(
        logger, "debug",
        f"GIBO iteration {state.iteration} done",
        experiment_id,
        extra_info={"iterate": next_theta, "gradient": gradient, "evaluations": state.evaluations},
    )
    return replace(state, iterate=next_theta, params=params, iteration=state.iteration + 1)


def run_gibo(
    oracle: Oracle,
    theta0: np.ndarray,
    config: GiboConfig,
    budget: int,
    params: KernelParams,
    rng: np.random.Generator,
    experiment_id: str = "N/A",
) -> RunHistory:
    """
    Repeats gibo_iteration while a full iteration still fits into `budget`.

    Args:
        oracle (Oracle): Noisy objective.
        theta0 (np.ndarray): Start point.
        config (GiboConfig): Optimizer configuration.
        budget (int): Maximum number of oracle calls, >= M + 1.
        params (KernelParams): Initial (or, without refitting, fixed) hyperparameters.
        rng (np.random.Generator): Source of all randomness of the run.
        experiment_id (str): Identifier used in log records.

    Returns:
        RunHistory: Every evaluation; metadata holds step_norms, iterations and final_iterate.
    """
    if budget < config.evaluations_per_iteration:
        raise InputError(f"budget {budget} is smaller than one iteration ({config.evaluations_per_iteration})")
    theta0 = np.atleast_1d(np.asarray(theta0, dtype=float))
    if theta0.shape != (params.dim,):
        raise InputError(f"theta0 has shape {theta0.shape}, kernel expects ({params.dim},)")

    state = OptimizerState(theta0.copy(), Dataset(params.dim), params)
    history = RunHistory(metadata={"step_norms": [], "degenerate_steps": 0})
    while state.evaluations + config.evaluations_per_iteration <= budget:
        state = gibo_iteration(state, oracle, config, rng, history, experiment_id)

    history.metadata["iterations"] = state.iteration
    history.metadata["final_iterate"] = state.iterate.tolist()
    history.metadata["final_params"] = state.params.as_dict()
    return history


class GIBOOptimizer(BaseOptimizer):
    """
    GIBO behind the common optimizer interface.
    """

    name = "gibo"

    @property
    def evaluations_per_step(self) -> int:
        return self.config.evaluations_per_iteration

    def run(self, oracle, theta0, budget, rng, params=None) -> RunHistory:
        if params is None:
            if self.config.hyperpriors is None:
                raise InputError("GIBO needs kernel parameters or hyperpriors")
            params = self.config.hyperpriors.mode_params(np.size(theta0))
        history = run_gibo(oracle, theta0, self.config, budget, params, rng, self.experiment_id)
        self.log_run(history, {"iterations": history.metadata["iterations"]})
        return history
