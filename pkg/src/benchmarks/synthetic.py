# src/benchmarks/synthetic.py

"""
Synthetic test functions drawn from a GP prior.

An objective is the noiseless posterior mean of a GP conditioned on one joint prior sample
at 1000 Sobol points in [0, 1]^d. Its lengthscale is drawn from an interval that scales with
the mean distance of random points in a unit hypercube, so functions keep a comparable number
of bumps as the dimension grows.
"""

import logging
import warnings
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import cho_solve, cholesky
from scipy.optimize import minimize
from scipy.stats import qmc

from src.config.constants import JITTER, MAX_SYNTHETIC_DIMENSION, NORMALIZATION_TOL, VALID_BEST_GUESS_MODES
from src.gp.kernels import KernelParams, kernel_matrix
from src.gp.posterior import GPModel
from src.utils import logger as logger_utils
from src.utils.exceptions import ConditioningError, InputError, NormalizationError
from src.utils.rng import SeedLike, make_rng

logger = logging.getLogger("GIBO.Benchmarks")

# Jitter escalation for the support-point covariance: JITTER * 10^k, k < _MAX_JITTER_STEPS
_MAX_JITTER_STEPS = 7


def _hypercube_distance_bound(d: int) -> float:
    return np.sqrt(d / 6.0) * np.sqrt(1.0 / 3.0 + 1.0 + 2.0 * np.sqrt(1.0 - 3.0 / (5.0 * d)))


def delta_sub(d: int) -> float:
    """Upper bound of the mean point distance in [0, 1]^d, scaled so delta_sub(2) == 0.1."""
    if d < 1:
        raise InputError(f"Dimension must be >= 1, got {d}")
    return 0.1 * _hypercube_distance_bound(d) / _hypercube_distance_bound(2)


def lengthscale_bounds(d: int, spread: float = 0.3) -> Tuple[float, float]:
    """The interval [2 delta_sub(d) (1 - spread), 2 delta_sub(d) (1 + spread)]."""
    if not 0 <= spread < 1:
        raise InputError(f"spread must lie in [0, 1), got {spread}")
    center = 2.0 * delta_sub(d)
    return center * (1.0 - spread), center * (1.0 + spread)


def sample_lengthscale(d: int, rng: SeedLike = None, spread: float = 0.3) -> float:
    low, high = lengthscale_bounds(d, spread)
    return float(make_rng(rng).uniform(low, high))


def sobol_points(d: int, n: int) -> np.ndarray:
    """
    The first n points of the unscrambled Sobol sequence in [0, 1)^d, skipping the origin.
    """
    if not 1 <= d <= MAX_SYNTHETIC_DIMENSION:
        raise InputError(f"Sobol dimension must lie in [1, {MAX_SYNTHETIC_DIMENSION}], got {d}")
    sampler = qmc.Sobol(d, scramble=False)
    sampler.fast_forward(1)
    with warnings.catch_warnings():
        # n need not be a power of two
        warnings.simplefilter("ignore", UserWarning)
        return sampler.random(n)


@dataclass(eq=False)
class SyntheticObjective:
    """
    A deterministic test function J(x) = k(x, X_s) alpha on [0, 1]^d.

    Attributes:
        support_points (np.ndarray): X_s, shape (n, d).
        support_values (np.ndarray): f_s = J(X_s).
        alpha (np.ndarray): Weights of the conditioned GP.
        params (KernelParams): Generating kernel (noiseless).
        noise_std (float): Standard deviation of evaluate_noisy.
        seed (int, optional): Seed the objective was generated from.
        x_star (np.ndarray, optional): Approximate maximizer.
        f_star (float, optional): J(x_star).
        converged (bool): Whether the maximizer search converged.
    """

    support_points: np.ndarray
    support_values: np.ndarray
    alpha: np.ndarray
    params: KernelParams
    noise_std: float = 0.1
    seed: Optional[int] = None
    x_star: Optional[np.ndarray] = None
    f_star: Optional[float] = None
    converged: bool = False

    def __post_init__(self):
        self._model = GPModel.from_weights(self.support_points, self.alpha, self.params)

    @property
    def dim(self) -> int:
        return self.params.dim

    @property
    def true_params(self) -> KernelParams:
        """Generating kernel plus the evaluation noise, as a within-model GP would use it."""
        return self.params.replace(noise_variance=self.noise_std**2)

    def __call__(self, x) -> float:
        return self._model.posterior_mean(x)

    def values(self, X) -> np.ndarray:
        return self._model.posterior_means(X)

    def gradient(self, x) -> np.ndarray:
        return self._model.posterior_mean_gradient(x)

    def evaluate_noisy(self, x, rng: np.random.Generator) -> float:
        return self(x) + self.noise_std * float(rng.standard_normal())

    def save(self, path: str) -> None:
        np.savez(
            path,
            kind="synthetic",
            dimension=self.dim,
            seed=-1 if self.seed is None else self.seed,
            support_points=self.support_points,
            support_values=self.support_values,
            alpha=self.alpha,
            lengthscales=self.params.lengthscales,
            signal_variance=self.params.signal_variance,
            noise_std=self.noise_std,
            x_star=self.x_star if self.x_star is not None else np.full(self.dim, np.nan),
            f_star=np.nan if self.f_star is None else self.f_star,
            converged=self.converged,
        )

    @classmethod
    def load(cls, path: str) -> "SyntheticObjective":
        with np.load(path) as data:
            if str(data["kind"]) != "synthetic":
                raise InputError(f"{path} does not hold a synthetic objective")
            f_star = float(data["f_star"])
            seed = int(data["seed"])
            return cls(
                support_points=data["support_points"],
                support_values=data["support_values"],
                alpha=data["alpha"],
                params=KernelParams(data["lengthscales"], float(data["signal_variance"])),
                noise_std=float(data["noise_std"]),
                seed=None if seed < 0 else seed,
                x_star=None if np.isnan(f_star) else data["x_star"],
                f_star=None if np.isnan(f_star) else f_star,
                converged=bool(data["converged"]),
            )


def _sample_support_values(X: np.ndarray, params: KernelParams, rng: np.random.Generator):
    K = kernel_matrix(X, X, params)
    z = rng.standard_normal(X.shape[0])
    jitter = JITTER * params.signal_variance
    for _ in range(_MAX_JITTER_STEPS):
        try:
            lower = cholesky(K + jitter * np.eye(X.shape[0]), lower=True)
            break
        except np.linalg.LinAlgError:
            jitter *= 10.0
    else:
        raise ConditioningError(f"Support covariance not factorable up to jitter {jitter:.1e}")
    alpha = cho_solve((lower, True), lower @ z)
    # values of the noiseless posterior mean, so the objective interpolates them exactly
    return K @ alpha, alpha


def generate_objective(
    d: int,
    seed: SeedLike = 0,
    support_points: int = 1000,
    noise_std: float = 0.1,
    signal_variance: float = 1.0,
    spread: float = 0.3,
    lengthscale: Optional[float] = None,
    max_iterations: int = 10_000,
    experiment_id: str = "N/A",
) -> SyntheticObjective:
    """
    Draws a synthetic objective and attaches its approximate global maximum.

    Args:
        d (int): Dimension, 1..MAX_SYNTHETIC_DIMENSION.
        seed: Seed or generator; the lengthscale is drawn first, then the prior sample.
        support_points (int): Number of Sobol support points.
        noise_std (float): Evaluation noise of evaluate_noisy.
        signal_variance (float): Prior signal variance.
        spread (float): Relative half-width of the lengthscale interval.
        lengthscale (float, optional): Fixed isotropic lengthscale instead of a draw.
        max_iterations (int): Iteration cap of the maximizer search.
        experiment_id (str): Identifier used in log records.

    Returns:
        SyntheticObjective: The objective with x_star and f_star set.
    """
    rng = make_rng(seed)
    ls = sample_lengthscale(d, rng, spread) if lengthscale is None else float(lengthscale)
    params = KernelParams.isotropic(d, ls, signal_variance)
    X = sobol_points(d, support_points)
    values, alpha = _sample_support_values(X, params, rng)
    objective = SyntheticObjective(
        X, values, alpha, params, noise_std, seed=seed if isinstance(seed, int) else None
    )
    objective.x_star, objective.f_star, objective.converged = approx_global_max(
        objective, max_iterations, experiment_id
    )
    logger_utils.log_with_experiment_id(
        logger, "debug",
        f"Generated synthetic objective (d={d})",
        experiment_id,
        extra_info={"lengthscale": ls, "f_star": objective.f_star, "converged": objective.converged},
    )
    return objective


def approx_global_max(
    objective: SyntheticObjective, max_iterations: int = 10_000, experiment_id: str = "N/A"
) -> Tuple[np.ndarray, float, bool]:
    """
    Bounded L-BFGS-B ascent on the noiseless objective over [0, 1]^d, started from the best
    support point and from the domain center; the better end point wins.

    Returns:
        Tuple[np.ndarray, float, bool]: (x_star, f_star, converged). f_star is never below
        the best support value or the center value.
    """
    d = objective.dim
    bounds = [(0.0, 1.0)] * d
    best_index = int(np.argmax(objective.support_values))
    starts = [objective.support_points[best_index], np.full(d, 0.5)]

    def negative(x):
        return -objective(x), -objective.gradient(x)

    x_star, f_star, converged = None, -np.inf, True
    for start in starts:
        start_value = objective(start)
        res = minimize(
            negative,
            start,
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": max_iterations, "ftol": 1e-15, "gtol": 1e-10},
        )
        x, value = (res.x, -float(res.fun)) if -res.fun >= start_value else (np.array(start), start_value)
        if not res.success:
            converged = False
        if value > f_star:
            x_star, f_star = np.clip(x, 0.0, 1.0), value

    if not converged:
        logger_utils.log_with_experiment_id(
            logger, "warning",
            "Global maximum search did not converge; using the best iterate",
            experiment_id,
            extra_info={"f_star": f_star},
        )
    return x_star, f_star, converged


def best_guesses(objective: SyntheticObjective, history, mode: str = "noiseless") -> np.ndarray:
    """
    The best guess after each evaluation: the sampled point with the highest true value
    ("noiseless") or with the highest observation ("noisy"). Earliest point wins ties.

    Points are projected onto [0, 1]^d first, the domain f* is taken over; an iterate that
    left the domain is scored as its projection.
    """
    if mode not in VALID_BEST_GUESS_MODES:
        raise InputError(f"Unknown best-guess mode '{mode}'. Choose from {VALID_BEST_GUESS_MODES}")
    if mode == "noisy":
        return np.clip(np.array([record.best_point for record in history]), 0.0, 1.0)
    points = np.clip(history.points, 0.0, 1.0)
    values = objective.values(points)
    guesses = np.empty_like(points)
    best = 0
    for k in range(len(points)):
        if values[k] > values[best]:
            best = k
        guesses[k] = points[best]
    return guesses


def normalized_regret(
    objective: SyntheticObjective,
    history,
    mode: str = "noiseless",
    start: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Per-evaluation regret (f* - J(x_k)) / (f* - J(x0)) of the best guesses x_k.

    x0 defaults to the domain center. Values are not clipped, so noisy best guesses can
    score above 1.

    Raises:
        InputError: If the history is empty.
        NormalizationError: If f* - J(x0) vanishes.
    """
    if len(history) == 0:
        raise InputError("Cannot score an empty history")
    if objective.f_star is None:
        raise InputError("Objective has no global maximum attached")
    start = np.full(objective.dim, 0.5) if start is None else np.asarray(start, dtype=float)
    denominator = objective.f_star - objective(start)
    if not abs(denominator) >= NORMALIZATION_TOL:
        raise NormalizationError(f"f* - J(x0) = {denominator:.3e}")
    guesses = best_guesses(objective, history, mode)
    return (objective.f_star - objective.values(guesses)) / denominator
