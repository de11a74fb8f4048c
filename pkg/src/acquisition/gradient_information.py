# src/acquisition/gradient_information.py

"""
Gradient Information (GI) acquisition.

For an anchor theta_t and window points X, the value of a candidate theta is

    gi(theta) = Tr( dK(theta_t, Xh) (K(Xh, Xh) + s2 I)^{-1} dK(theta_t, Xh)^T ),   Xh = [X, theta]

which equals the trace of the prior Jacobian covariance at theta_t minus the trace of the
posterior Jacobian covariance after observing theta. Targets never enter.

Appending theta to the factored window splits the trace into a candidate-independent part
and a rank-one term:

    gi(theta) = ||V0||_F^2 + ||u||^2 / s
    l = L^{-1} k(X, theta),  s = k(theta, theta) + s2 - l^T l,  u = dk(theta_t, theta) - V0^T l

where V0 = L^{-1} dK(theta_t, X)^T. The analytic gradient below differentiates this form.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from src.gp.cholesky import CholeskyFactor, cholesky_append
from src.gp.kernels import KernelParams, kernel_grad1_matrix, kernel_vector, se_kernel_hess12
from src.gp.posterior import factorize
from src.utils.exceptions import ConditioningError, InputError
from src.utils.rng import SeedLike, make_rng

logger = logging.getLogger("GIBO.Acquisition")

VALID_JAC_MODES = ["analytic", "finite-difference"]


@dataclass(frozen=True, eq=False)
class GIContext:
    """
    Everything the GI acquisition needs besides the candidate.

    Attributes:
        anchor (np.ndarray): Current iterate theta_t, shape (d,).
        window_points (np.ndarray): Local window X, shape (n, d).
        params (KernelParams): Kernel hyperparameters.
        bound (float): Half-width delta_b of the search box around the anchor.
    """

    anchor: np.ndarray
    window_points: np.ndarray
    params: KernelParams
    bound: float

    def __post_init__(self):
        anchor = np.atleast_1d(np.asarray(self.anchor, dtype=float))
        if anchor.shape != (self.params.dim,):
            raise InputError(f"Anchor has shape {anchor.shape}, kernel expects ({self.params.dim},)")
        points = np.asarray(self.window_points, dtype=float).reshape(-1, self.params.dim)
        if not self.bound > 0:
            raise InputError(f"Search box half-width must be positive, got {self.bound}")
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "window_points", points)
        object.__setattr__(self, "bound", float(self.bound))

    @property
    def lower(self) -> np.ndarray:
        return self.anchor - self.bound

    @property
    def upper(self) -> np.ndarray:
        return self.anchor + self.bound

    @cached_property
    def factor(self) -> CholeskyFactor:
        return factorize(self.window_points, self.params)

    @cached_property
    def v0(self) -> np.ndarray:
        """L^{-1} dK(theta_t, X)^T, shape (n, d)."""
        grads = kernel_grad1_matrix(self.anchor, self.window_points, self.params)
        return self.factor.solve_lower(grads.T)

    @cached_property
    def base_trace(self) -> float:
        return float(np.sum(self.v0 * self.v0))

    @cached_property
    def prior_trace(self) -> float:
        return float(self.params.signal_variance * np.sum(self.params.precision))


def _check_candidate(theta, ctx: GIContext) -> np.ndarray:
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    if theta.shape != (ctx.params.dim,):
        raise InputError(f"Candidate has shape {theta.shape}, expected ({ctx.params.dim},)")
    return theta


def _rank_one_terms(theta: np.ndarray, ctx: GIContext):
    params = ctx.params
    cross = kernel_vector(theta, ctx.window_points, params)
    l = ctx.factor.solve_lower(cross)
    s = params.signal_variance + params.noise_variance - float(l @ l)
    if not s > 0:
        raise ConditioningError(f"Candidate nearly duplicates the window (Schur complement {s:.3e})")
    diff = ctx.anchor - theta
    k_anchor = params.signal_variance * np.exp(-0.5 * np.dot(diff * params.precision, diff))
    g = -params.precision * diff * k_anchor
    u = g - ctx.v0.T @ l
    return cross, l, s, u


def gi_value(theta, ctx: GIContext) -> float:
    """
    GI acquisition value of a candidate; always >= 0 and independent of observed targets.

    Raises:
        ConditioningError: If K(Xh, Xh) + s2 I cannot be factored.
    """
    theta = _check_candidate(theta, ctx)
    params = ctx.params
    cross = kernel_vector(theta, ctx.window_points, params)
    grown = cholesky_append(ctx.factor, cross, params.signal_variance + params.noise_variance)
    points = np.vstack([ctx.window_points, theta[None, :]])
    grads = kernel_grad1_matrix(ctx.anchor, points, params)
    V = grown.solve_lower(grads.T)
    return float(np.sum(V * V))


def gi_gain(theta, ctx: GIContext) -> float:
    """Expected drop of Tr(Jacobian covariance at the anchor) from observing `theta`."""
    theta = _check_candidate(theta, ctx)
    _, _, s, u = _rank_one_terms(theta, ctx)
    return float(u @ u) / s


def gi_value_and_gradient(theta, ctx: GIContext) -> Tuple[float, np.ndarray]:
    """GI value and its analytic gradient w.r.t. the candidate."""
    theta = _check_candidate(theta, ctx)
    params = ctx.params
    cross, l, s, u = _rank_one_terms(theta, ctx)

    X = ctx.window_points
    # d k(X_j, theta) / d theta, one row per window point
    d_cross = (params.precision[None, :] * (X - theta[None, :])) * cross[:, None]
    weights = ctx.factor.solve(cross)
    d_s = -2.0 * d_cross.T @ weights
    # V0^T L^{-1} d_cross
    d_u = se_kernel_hess12(ctx.anchor, theta, params) - ctx.v0.T @ ctx.factor.solve_lower(d_cross)

    uu = float(u @ u)
    value = ctx.base_trace + uu / s
    gradient = 2.0 * d_u.T @ u / s - uu * d_s / s**2
    return value, gradient


def maximize_gi(
    ctx: GIContext,
    restarts: int = 5,
    rng: SeedLike = None,
    raw_samples: Optional[int] = None,
    jac: str = "analytic",
    max_iterations: int = 100,
) -> np.ndarray:
    """
    Maximizes gi_value over the box [anchor - bound, anchor + bound].

    Start candidates are the 2d axis points anchor +- bound/2 followed by `raw_samples`
    uniform draws in the box; the `restarts` best of them seed bounded L-BFGS-B ascents.
    The point returned has the highest value of every point evaluated along the way
    (earliest wins ties).

    Args:
        ctx (GIContext): Acquisition context.
        restarts (int): Number of local ascents, >= 1.
        rng: Seed or generator for the raw samples.
        raw_samples (int, optional): Number of uniform candidates; defaults to 32 * d.
        jac (str): "analytic" or "finite-difference".
        max_iterations (int): Iteration cap per local ascent.

    Returns:
        np.ndarray: The next query point, inside the box.

    Raises:
        InputError: On restarts < 1 or an unknown jac mode.
        ConditioningError: Propagated from the acquisition.
    """
    if restarts < 1:
        raise InputError(f"restarts must be >= 1, got {restarts}")
    if jac not in VALID_JAC_MODES:
        raise InputError(f"Unknown jac mode '{jac}'. Choose from {VALID_JAC_MODES}")
    rng = make_rng(rng)
    dim = ctx.params.dim
    raw_samples = 32 * dim if raw_samples is None else raw_samples
    lower, upper = ctx.lower, ctx.upper

    offsets = 0.5 * ctx.bound * np.eye(dim)
    axis = np.vstack([ctx.anchor + sign * offsets[i] for i in range(dim) for sign in (1.0, -1.0)])
    raw = rng.uniform(lower, upper, size=(raw_samples, dim))
    candidates = np.vstack([axis, raw])

    best = {"value": -np.inf, "point": None}

    def record(point: np.ndarray, value: float) -> None:
        if value > best["value"]:
            best["value"] = value
            best["point"] = np.array(point, dtype=float)

    values = np.empty(len(candidates))
    for i, candidate in enumerate(candidates):
        values[i] = ctx.base_trace + gi_gain(candidate, ctx)
        record(candidate, values[i])

    def objective(theta: np.ndarray):
        theta = np.clip(theta, lower, upper)
        if jac == "analytic":
            value, gradient = gi_value_and_gradient(theta, ctx)
            record(theta, value)
            return -value, -gradient
        value = ctx.base_trace + gi_gain(theta, ctx)
        record(theta, value)
        return -value

    order = np.argsort(-values, kind="stable")[:restarts]
    bounds = list(zip(lower, upper))
    for index in order:
        minimize(
            objective,
            candidates[index],
            jac=(jac == "analytic"),
            method="L-BFGS-B",
            bounds=bounds,
            options={"maxiter": max_iterations, "ftol": 1e-12, "gtol": 1e-8},
        )

    return np.clip(best["point"], lower, upper)
