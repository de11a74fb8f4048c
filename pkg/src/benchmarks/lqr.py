# src/benchmarks/lqr.py

"""
Average-cost LQR benchmark.

Dynamics x_{t+1} = A x_t + B u_t + w_t with w_t ~ N(0, W) and a static linear policy
u_t = K x_t. The optimizer sees K flattened row-major and a rollout return built from the
stage rewards -log(1 + cost); its progress is scored with the exact relative cost gap.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, solve_discrete_are, solve_discrete_lyapunov

from src.utils import logger as logger_utils
from src.utils.exceptions import InputError, SolverError, StabilityError
from src.utils.rng import SeedLike, make_rng

logger = logging.getLogger("GIBO.Benchmarks")

DARE_TOLERANCE = 1e-8
DARE_MAX_ITERATIONS = 100_000


def spectral_radius(matrix) -> float:
    """Largest absolute eigenvalue of a square matrix."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    if matrix.shape[0] != matrix.shape[1]:
        raise InputError(f"Matrix must be square, got shape {matrix.shape}")
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def _riccati_rhs(P, A, B, Q, R) -> np.ndarray:
    BtPA = B.T @ P @ A
    return A.T @ P @ A - BtPA.T @ np.linalg.solve(R + B.T @ P @ B, BtPA) + Q


def _optimal_gain(P, A, B, R) -> np.ndarray:
    return -np.linalg.solve(R + B.T @ P @ B, B.T @ P @ A)


def dare_residual(P, A, B, Q, R) -> float:
    return float(np.max(np.abs(_riccati_rhs(P, A, B, Q, R) - P)))


def solve_dare(A, B, Q, R) -> Tuple[np.ndarray, np.ndarray]:
    """
    Stabilizing solution P of the discrete algebraic Riccati equation and the optimal gain
    K = -(R + B^T P B)^{-1} B^T P A.

    The Schur-based scipy solver is tried first; if it fails or misses the residual tolerance,
    the fixed-point Riccati recursion from P = Q takes over.

    Raises:
        SolverError: If neither route reaches the residual tolerance with a stable closed loop.
    """
    A, B, Q, R = (np.atleast_2d(np.asarray(M, dtype=float)) for M in (A, B, Q, R))
    P = None
    try:
        P = solve_discrete_are(A, B, Q, R)
        P = 0.5 * (P + P.T)
    except (LinAlgError, ValueError) as e:
        logger.debug(f"scipy DARE solver failed ({e}); falling back to iteration")

    if P is None or dare_residual(P, A, B, Q, R) >= DARE_TOLERANCE:
        P = Q.copy()
        for _ in range(DARE_MAX_ITERATIONS):
            P_next = _riccati_rhs(P, A, B, Q, R)
            P_next = 0.5 * (P_next + P_next.T)
            if not np.all(np.isfinite(P_next)):
                break
            converged = np.max(np.abs(P_next - P)) < 1e-14 * max(1.0, np.max(np.abs(P_next)))
            P = P_next
            if converged:
                break

    if not np.all(np.isfinite(P)) or dare_residual(P, A, B, Q, R) >= DARE_TOLERANCE:
        raise SolverError("Riccati equation did not converge; (A, B) may not be stabilizable")
    K = _optimal_gain(P, A, B, R)
    if spectral_radius(A + B @ K) >= 1.0:
        raise SolverError("Riccati solution does not stabilize the closed loop")
    return P, K


def solve_dlyap(A_cl, W) -> np.ndarray:
    """
    Stationary covariance Sigma = A_cl Sigma A_cl^T + W.

    Raises:
        StabilityError: If spectral_radius(A_cl) >= 1.
    """
    A_cl = np.atleast_2d(np.asarray(A_cl, dtype=float))
    W = np.atleast_2d(np.asarray(W, dtype=float))
    rho = spectral_radius(A_cl)
    if rho >= 1.0:
        raise StabilityError(f"Closed loop is not stable (spectral radius {rho:.6f})")
    sigma = solve_discrete_lyapunov(A_cl, W)
    return 0.5 * (sigma + sigma.T)


@dataclass(frozen=True, eq=False)
class LQRInstance:
    """
    Attributes:
        A (np.ndarray): n x n dynamics.
        B (np.ndarray): n x p input matrix.
        Q (np.ndarray): n x n state cost, PSD.
        R (np.ndarray): p x p input cost, PD.
        W (np.ndarray): n x n process-noise covariance, PSD.
    """

    A: np.ndarray
    B: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    W: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "Q", "R", "W"):
            object.__setattr__(self, name, np.atleast_2d(np.asarray(getattr(self, name), dtype=float)))
        n, p = self.B.shape
        expected = {"A": (n, n), "Q": (n, n), "R": (p, p), "W": (n, n)}
        for name, shape in expected.items():
            if getattr(self, name).shape != shape:
                raise InputError(f"{name} has shape {getattr(self, name).shape}, expected {shape}")
        if not np.allclose(self.R, self.R.T):
            raise InputError("R must be symmetric")
        try:
            np.linalg.cholesky(self.R)
        except np.linalg.LinAlgError:
            raise InputError("R must be positive definite")

    @property
    def state_dim(self) -> int:
        return self.A.shape[0]

    @property
    def input_dim(self) -> int:
        return self.B.shape[1]

    @property
    def gain_size(self) -> int:
        return self.state_dim * self.input_dim

    @cached_property
    def riccati(self) -> Tuple[np.ndarray, np.ndarray]:
        return solve_dare(self.A, self.B, self.Q, self.R)

    @property
    def riccati_solution(self) -> np.ndarray:
        return self.riccati[0]

    @property
    def optimal_gain(self) -> np.ndarray:
        return self.riccati[1]

    @cached_property
    def optimal_cost(self) -> float:
        """J* = Tr(W P)."""
        return float(np.trace(self.W @ self.riccati_solution))

    @cached_property
    def noise_factor(self) -> np.ndarray:
        """F with F F^T = W; also valid for singular W."""
        eigenvalues, eigenvectors = np.linalg.eigh(self.W)
        return eigenvectors * np.sqrt(np.clip(eigenvalues, 0.0, None))[None, :]

    def save(self, path: str) -> None:
        np.savez(
            path,
            kind="lqr",
            A=self.A, B=self.B, Q=self.Q, R=self.R, W=self.W,
            P=self.riccati_solution,
            K=self.optimal_gain,
            optimal_cost=self.optimal_cost,
        )

    @classmethod
    def load(cls, path: str) -> "LQRInstance":
        with np.load(path) as data:
            if str(data["kind"]) != "lqr":
                raise InputError(f"{path} does not hold an LQR instance")
            instance = cls(data["A"], data["B"], data["Q"], data["R"], data["W"])
            instance.__dict__["riccati"] = (data["P"], data["K"])
            instance.__dict__["optimal_cost"] = float(data["optimal_cost"])
        return instance


def benchmark_instance() -> LQRInstance:
    """
    Three coupled, marginally unstable states with full actuation (open-loop spectral
    radius about 1.024) and unit process noise.
    """
    A = np.array([[1.01, 0.01, 0.0], [0.01, 1.01, 0.01], [0.0, 0.01, 1.01]])
    return LQRInstance(A=A, B=np.eye(3), Q=1e-3 * np.eye(3), R=np.eye(3), W=np.eye(3))


def flatten_gain(K) -> np.ndarray:
    return np.asarray(K, dtype=float).reshape(-1)


def unflatten_gain(theta, instance: LQRInstance) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.size != instance.gain_size:
        raise InputError(f"Gain vector has {theta.size} entries, expected {instance.gain_size}")
    return theta.reshape(instance.input_dim, instance.state_dim)


def _as_gain(K, instance: LQRInstance) -> np.ndarray:
    K = np.asarray(K, dtype=float)
    return unflatten_gain(K, instance) if K.ndim == 1 else K


def is_stabilizing(theta, instance: LQRInstance) -> bool:
    K = _as_gain(theta, instance)
    return spectral_radius(instance.A + instance.B @ K) < 1.0


def average_cost(K, instance: LQRInstance) -> float:
    """Exact infinite-horizon average cost Tr(Sigma_K (Q + K^T R K)); inf if unstable."""
    K = _as_gain(K, instance)
    try:
        sigma = solve_dlyap(instance.A + instance.B @ K, instance.W)
    except StabilityError:
        return np.inf
    return float(np.trace(sigma @ (instance.Q + K.T @ instance.R @ K)))


def cost_to_go(K, instance: LQRInstance) -> float:
    """Average cost in value form Tr(W P_K), P_K solving P = Q + K^T R K + A_K^T P A_K; inf if unstable."""
    K = _as_gain(K, instance)
    A_cl = instance.A + instance.B @ K
    try:
        P = solve_dlyap(A_cl.T, instance.Q + K.T @ instance.R @ K)
    except StabilityError:
        return np.inf
    return float(np.trace(instance.W @ P))


class RelativeError(NamedTuple):
    value: float
    stable: bool


def relative_error(K_hat, instance: LQRInstance) -> RelativeError:
    """
    (J(K_hat) - J*) / J*, evaluated through Tr(Sigma (K_hat - K*)^T (R + B^T P B) (K_hat - K*)).
    Non-stabilizing gains give (inf, False).
    """
    K_hat = _as_gain(K_hat, instance)
    try:
        sigma = solve_dlyap(instance.A + instance.B @ K_hat, instance.W)
    except StabilityError:
        return RelativeError(np.inf, False)
    delta = K_hat - instance.optimal_gain
    P = instance.riccati_solution
    curvature = instance.R + instance.B.T @ P @ instance.B
    gap = float(np.trace(sigma @ delta.T @ curvature @ delta))
    return RelativeError(max(gap, 0.0) / instance.optimal_cost, True)


@dataclass(frozen=True)
class RolloutConfig:
    """
    Attributes:
        trajectory_length (int): Steps per trajectory, >= 1.
        trajectories (int): Independent trajectories per oracle call, >= 1.
        initial_state (np.ndarray, optional): Start state of every trajectory; zero if None.
        overflow_threshold (float): State norm at which a trajectory is truncated.
    """

    trajectory_length: int = 300
    trajectories: int = 1
    initial_state: Optional[np.ndarray] = None
    overflow_threshold: float = 1e12

    def __post_init__(self):
        if self.trajectory_length < 1:
            raise InputError(f"trajectory_length must be >= 1, got {self.trajectory_length}")
        if self.trajectories < 1:
            raise InputError(f"trajectories must be >= 1, got {self.trajectories}")

    @property
    def timesteps(self) -> int:
        return self.trajectory_length * self.trajectories


def transformed_reward(cost):
    """-log(1 + cost), i.e. -log(1 - r) for the raw reward r = -cost."""
    return -np.log1p(cost)


def lqr_oracle(
    theta,
    instance: LQRInstance,
    config: RolloutConfig,
    rng: np.random.Generator,
    normalizer=None,
) -> float:
    """
    Mean transformed reward over config.trajectories rollouts of the policy u = K x.

    With a `normalizer` the policy acts on normalizer(x) and every visited state is passed to
    normalizer.observe. A trajectory whose state norm exceeds the overflow threshold is cut;
    its remaining steps take the worst reward it observed.
    """
    K = unflatten_gain(theta, instance)
    n = instance.state_dim
    M, N = config.trajectories, config.trajectory_length
    x0 = np.zeros(n) if config.initial_state is None else np.asarray(config.initial_state, dtype=float)
    X = np.tile(x0, (M, 1))
    rewards = np.empty((M, N))
    worst = np.full(M, np.inf)
    alive = np.ones(M, dtype=bool)
    A_t, B_t, F_t = instance.A.T, instance.B.T, instance.noise_factor.T

    for t in range(N):
        if normalizer is not None:
            normalizer.observe(X[alive])
            U = normalizer(X) @ K.T
        else:
            U = X @ K.T
        cost = np.einsum("ij,jk,ik->i", X, instance.Q, X) + np.einsum("ij,jk,ik->i", U, instance.R, U)
        reward = transformed_reward(cost)
        rewards[:, t] = np.where(alive, reward, worst)
        worst = np.where(alive, np.minimum(worst, reward), worst)
        noise = rng.standard_normal((M, n)) @ F_t
        X = X @ A_t + U @ B_t + noise
        alive &= np.linalg.norm(X, axis=1) <= config.overflow_threshold
        X[~alive] = 0.0

    return float(np.mean(rewards))


class LQROracle:
    """
    Seeded rollout oracle that counts the timesteps it consumed.
    """

    def __init__(
        self,
        instance: LQRInstance,
        config: RolloutConfig,
        rng: SeedLike = None,
        normalizer=None,
        experiment_id: str = "N/A",
    ):
        self.instance = instance
        self.config = config
        self.rng = make_rng(rng)
        self.normalizer = normalizer
        self.experiment_id = experiment_id
        self.calls = 0
        self.timesteps = 0
        # normalizer std in effect for each call
        self.state_scales = []

    def __call__(self, theta) -> float:
        if self.normalizer is not None:
            self.state_scales.append(self.normalizer.std.copy())
        value = lqr_oracle(theta, self.instance, self.config, self.rng, self.normalizer)
        self.calls += 1
        self.timesteps += self.config.timesteps
        if self.calls % 100 == 0:
            logger_utils.log_with_experiment_id(
                logger, "debug",
                f"LQR oracle: {self.calls} calls, {self.timesteps} timesteps",
                self.experiment_id,
            )
        return value
