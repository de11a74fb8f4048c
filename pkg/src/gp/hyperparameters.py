# src/gp/hyperparameters.py

"""
Hyperpriors and maximum a posteriori (MAP) fitting of SE-kernel hyperparameters.

Priors are placed on the lengthscales, the signal standard deviation sf and the noise
standard deviation sn. Fitting maximizes

    log p(y | X, theta) + log p(theta)

over the log of every free parameter with L-BFGS-B and a fixed number of seeded starts.
Uniform priors become box bounds in log space; normal priors are truncated below at
NORMAL_PRIOR_FLOOR; fixed priors (and names listed in `fixed`) are never touched.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.stats import norm

from src.config.constants import NORMAL_PRIOR_FLOOR, VALID_PRIOR_KINDS
from src.utils import logger as logger_utils
from src.utils.exceptions import ConditioningError, FittingError, InputError
from src.utils.rng import SeedLike, make_rng
from .kernels import KernelParams, kernel_matrix
from .posterior import Dataset, factorize

logger = logging.getLogger("GIBO.GP")

PARAMETER_NAMES = ("lengthscale", "signal_std", "noise_std")

# Objective value handed to L-BFGS-B where the kernel matrix cannot be factored
_PENALTY = 1e25


@dataclass(frozen=True)
class UniformPrior:
    low: float
    high: float

    def __post_init__(self):
        if not 0 < self.low < self.high:
            raise InputError(f"Uniform prior needs 0 < low < high, got ({self.low}, {self.high})")

    def log_density(self, value: float) -> float:
        # exp(log(bound)) may land an ulp outside the box
        if self.low * (1 - 1e-9) <= value <= self.high * (1 + 1e-9):
            return -float(np.log(self.high - self.low))
        return -np.inf

    def grad_log_density(self, value: float) -> float:
        return 0.0

    def mode(self) -> float:
        return 0.5 * (self.low + self.high)

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.low, self.high))

    def log_bounds(self) -> Tuple[Optional[float], Optional[float]]:
        return float(np.log(self.low)), float(np.log(self.high))


@dataclass(frozen=True)
class NormalPrior:
    """
    Normal prior truncated below at `floor`; the density is normalized on [floor, inf).
    """

    mean: float
    std: float
    floor: float = NORMAL_PRIOR_FLOOR

    def __post_init__(self):
        if self.std <= 0:
            raise InputError(f"Normal prior needs std > 0, got {self.std}")

    def log_density(self, value: float) -> float:
        if value < self.floor * (1 - 1e-9):
            return -np.inf
        z = (value - self.mean) / self.std
        log_mass = norm.logsf((self.floor - self.mean) / self.std)
        return float(norm.logpdf(z) - np.log(self.std) - log_mass)

    def grad_log_density(self, value: float) -> float:
        return -(value - self.mean) / self.std**2

    def mode(self) -> float:
        return max(self.mean, self.floor)

    def sample(self, rng: np.random.Generator) -> float:
        return max(float(rng.normal(self.mean, self.std)), self.floor)

    def log_bounds(self) -> Tuple[Optional[float], Optional[float]]:
        return float(np.log(self.floor)), None


@dataclass(frozen=True)
class FixedPrior:
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise InputError(f"Fixed value must be non-negative, got {self.value}")

    def log_density(self, value: float) -> float:
        return 0.0

    def grad_log_density(self, value: float) -> float:
        return 0.0

    def mode(self) -> float:
        return self.value


Prior = Union[UniformPrior, NormalPrior, FixedPrior]


def parse_prior(text: str) -> Prior:
    """
    Parses "uniform:low,high", "normal:mean,std" or "fixed:value".

    Raises:
        InputError: On an unknown kind or malformed numbers.
    """
    kind, _, args = str(text).strip().partition(":")
    kind = kind.strip().lower()
    if kind not in VALID_PRIOR_KINDS:
        raise InputError(f"Unknown prior '{text}'. Choose from {VALID_PRIOR_KINDS}")
    try:
        values = [float(v) for v in args.split(",")]
    except ValueError:
        raise InputError(f"Malformed prior arguments in '{text}'")
    expected = 1 if kind == "fixed" else 2
    if len(values) != expected:
        raise InputError(f"Prior '{kind}' takes {expected} argument(s), got {len(values)}")
    if kind == "uniform":
        return UniformPrior(*values)
    if kind == "normal":
        return NormalPrior(*values)
    return FixedPrior(values[0])


@dataclass(frozen=True)
class Hyperpriors:
    """Prior bundle: lengthscales, signal std and noise std."""

    lengthscale: Prior
    signal_std: Prior
    noise_std: Prior

    def get(self, name: str) -> Prior:
        return getattr(self, name)

    def mode_params(self, dim: int) -> KernelParams:
        """Kernel parameters at the prior modes (uniform: midpoint, normal: mean)."""
        return KernelParams(
            np.full(dim, self.lengthscale.mode()),
            self.signal_std.mode() ** 2,
            self.noise_std.mode() ** 2,
        )


def log_marginal_likelihood(
    X: np.ndarray, y: np.ndarray, params: KernelParams, with_gradient: bool = False
):
    """
    log p(y | X, params) of a zero-mean GP.

    With `with_gradient`, also returns a dict of derivatives w.r.t. the log parameters:
    "lengthscale" (per dimension), "signal_std" and "noise_std".
    """
    X = np.asarray(X, dtype=float).reshape(-1, params.dim)
    y = np.asarray(y, dtype=float).reshape(-1)
    n = y.shape[0]
    factor = factorize(X, params)
    alpha = factor.solve(y)
    value = -0.5 * float(y @ alpha) - 0.5 * factor.log_determinant() - 0.5 * n * np.log(2.0 * np.pi)
    if not with_gradient:
        return value

    K = kernel_matrix(X, X, params)
    inner = np.outer(alpha, alpha) - factor.solve(np.eye(n))
    grad_lengthscale = np.empty(params.dim)
    for i in range(params.dim):
        sq = (X[:, i : i + 1] - X[:, i : i + 1].T) ** 2 * params.precision[i]
        grad_lengthscale[i] = 0.5 * np.sum(inner * K * sq)
    gradient = {
        "lengthscale": grad_lengthscale,
        "signal_std": float(np.sum(inner * K)),
        "noise_std": float(np.trace(inner) * params.noise_variance),
    }
    return value, gradient


def log_prior(params: KernelParams, hyperpriors: Hyperpriors, ard: bool = True) -> float:
    lengthscales = params.lengthscales if ard else params.lengthscales[:1]
    total = sum(hyperpriors.lengthscale.log_density(ls) for ls in lengthscales)
    total += hyperpriors.signal_std.log_density(np.sqrt(params.signal_variance))
    total += hyperpriors.noise_std.log_density(np.sqrt(params.noise_variance))
    return float(total)


def log_posterior(
    X: np.ndarray, y: np.ndarray, params: KernelParams, hyperpriors: Hyperpriors, ard: bool = True
) -> float:
    """Unnormalized log posterior of the hyperparameters: LML + log hyperprior."""
    prior = log_prior(params, hyperpriors, ard)
    if not np.isfinite(prior):
        return -np.inf
    return log_marginal_likelihood(X, y, params) + prior


class _Packing:
    """Maps the free hyperparameters to and from an unconstrained log-space vector."""

    def __init__(self, dim: int, hyperpriors: Hyperpriors, fixed: FrozenSet[str], ard: bool):
        self.dim = dim
        self.ard = ard
        self.hyperpriors = hyperpriors
        self.free: List[str] = [
            name
            for name in PARAMETER_NAMES
            if name not in fixed and not isinstance(hyperpriors.get(name), FixedPrior)
        ]

    def width(self, name: str) -> int:
        return (self.dim if self.ard else 1) if name == "lengthscale" else 1

    def _values(self, params: KernelParams) -> Dict[str, np.ndarray]:
        return {
            "lengthscale": params.lengthscales if self.ard else params.lengthscales[:1],
            "signal_std": np.array([np.sqrt(params.signal_variance)]),
            "noise_std": np.array([np.sqrt(params.noise_variance)]),
        }

    def pack(self, params: KernelParams) -> np.ndarray:
        values = self._values(params)
        return np.concatenate([np.log(values[name]) for name in self.free]) if self.free else np.zeros(0)

    def unpack(self, u: np.ndarray, base: KernelParams) -> KernelParams:
        values = self._values(base)
        offset = 0
        for name in self.free:
            width = self.width(name)
            values[name] = np.exp(u[offset : offset + width])
            offset += width
        lengthscales = values["lengthscale"] if self.ard else np.full(self.dim, values["lengthscale"][0])
        return KernelParams(lengthscales, values["signal_std"][0] ** 2, values["noise_std"][0] ** 2)

    def bounds(self) -> List[Tuple[Optional[float], Optional[float]]]:
        result = []
        for name in self.free:
            result.extend([self.hyperpriors.get(name).log_bounds()] * self.width(name))
        return result

    def clip(self, u: np.ndarray) -> np.ndarray:
        lows = np.array([-np.inf if lo is None else lo for lo, _ in self.bounds()])
        highs = np.array([np.inf if hi is None else hi for _, hi in self.bounds()])
        return np.clip(u, lows, highs)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        draws = []
        for name in self.free:
            prior = self.hyperpriors.get(name)
            draws.extend(np.log(prior.sample(rng)) for _ in range(self.width(name)))
        return np.array(draws)

    def chain(self, gradient: Dict, params: KernelParams) -> np.ndarray:
        """Log-space gradient of LML + log prior for the free parameters."""
        values = self._values(params)
        parts = []
        for name in self.free:
            grad = np.atleast_1d(gradient[name]).astype(float)
            if name == "lengthscale" and not self.ard:
                grad = np.array([grad.sum()])
            prior = self.hyperpriors.get(name)
            grad = grad + np.array([prior.grad_log_density(v) * v for v in values[name]])
            parts.append(grad)
        return np.concatenate(parts)


def fit_hyperparameters_map(
    data: Dataset,
    hyperpriors: Hyperpriors,
    fixed: Iterable[str] = (),
    initial: Optional[KernelParams] = None,
    seed: SeedLike = 0,
    ard: bool = True,
    restarts: int = 8,
    max_iterations: int = 200,
    experiment_id: str = "N/A",
) -> KernelParams:
    """
    MAP estimate of the kernel hyperparameters on `data`.

    Args:
        data (Dataset): At least two observations.
        hyperpriors (Hyperpriors): Priors on lengthscale, signal std and noise std.
        fixed (Iterable[str]): Parameter names frozen at their value in `initial`
            (or at the prior mode when `initial` is None).
        initial (KernelParams, optional): Warm start, used as the first start point.
        seed: Seed or generator for the additional prior-drawn starts.
        ard (bool): One lengthscale per dimension if True, a shared one otherwise.
        restarts (int): Total number of start points.
        max_iterations (int): L-BFGS-B iteration cap per start.
        experiment_id (str): Identifier used in log records.

    Returns:
        KernelParams: The best parameters found; never worse than any start point.

    Raises:
        InputError: If fewer than two points are given or `fixed` names are unknown.
        FittingError: If no start point has a finite objective.
    """
    if len(data) < 2:
        raise InputError(f"MAP fitting needs at least 2 points, got {len(data)}")
    fixed = frozenset(fixed)
    unknown = fixed - set(PARAMETER_NAMES)
    if unknown:
        raise InputError(f"Unknown parameter names in fixed: {sorted(unknown)}")

    base = initial if initial is not None else hyperpriors.mode_params(data.dim)
    if base.dim != data.dim:
        raise InputError(f"Initial parameters have dimension {base.dim}, data has {data.dim}")
    # fixed priors pin their parameter regardless of the warm start
    base = KernelParams(
        base.lengthscales
        if not isinstance(hyperpriors.lengthscale, FixedPrior)
        else np.full(data.dim, hyperpriors.lengthscale.value),
        base.signal_variance
        if not isinstance(hyperpriors.signal_std, FixedPrior)
        else hyperpriors.signal_std.value**2,
        base.noise_variance
        if not isinstance(hyperpriors.noise_std, FixedPrior)
        else hyperpriors.noise_std.value**2,
    )
    packing = _Packing(data.dim, hyperpriors, fixed, ard)
    if not packing.free:
        return base

    X, y = data.X, data.y

    def negative(u: np.ndarray) -> Tuple[float, np.ndarray]:
        params = packing.unpack(u, base)
        prior = log_prior(params, hyperpriors, ard)
        if not np.isfinite(prior):
            return np.inf, np.zeros_like(u)
        try:
            value, gradient = log_marginal_likelihood(X, y, params, with_gradient=True)
        except ConditioningError:
            return np.inf, np.zeros_like(u)
        total = value + prior
        if not np.isfinite(total):
            return np.inf, np.zeros_like(u)
        return -total, -packing.chain(gradient, params)

    def bounded(u: np.ndarray) -> Tuple[float, np.ndarray]:
        value, gradient = negative(u)
        return (value, gradient) if np.isfinite(value) else (_PENALTY, gradient)

    rng = make_rng(seed)
    starts = [packing.clip(packing.pack(base))]
    starts.extend(packing.clip(packing.sample(rng)) for _ in range(max(restarts, 1) - 1))

    best_value, best_u = np.inf, None
    for u0 in starts:
        f0, _ = negative(u0)
        if not np.isfinite(f0):
            continue
        candidate_value, candidate_u = f0, u0
        result = minimize(
            bounded,
            u0,
            jac=True,
            method="L-BFGS-B",
            bounds=packing.bounds(),
            options={"maxiter": max_iterations},
        )
        final_value, _ = negative(result.x)
        if np.isfinite(final_value) and final_value < candidate_value:
            candidate_value, candidate_u = final_value, result.x
        if candidate_value < best_value:
            best_value, best_u = candidate_value, candidate_u

    if best_u is None:
        raise FittingError(f"No finite log posterior from any of {len(starts)} starts")

    fitted = packing.unpack(best_u, base)
    logger_utils.log_with_experiment_id(
        logger,
        "debug",
        f"MAP fit on {len(data)} points: log posterior {-best_value:.4f}",
        experiment_id,
        extra_info=fitted.as_dict(),
    )
    return fitted
