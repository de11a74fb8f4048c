# src/runstats/welford.py

"""
Welford's online mean/variance (diagonal only) and the state-normalization transform for
linear policies.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.config.constants import STATE_STD_FLOOR
from src.utils.exceptions import InputError


@dataclass(frozen=True, eq=False)
class WelfordState:
    """
    Attributes:
        count (int): Number of samples seen.
        mean (np.ndarray): Running mean M_n.
        m2 (np.ndarray): Sum of squared distances S_n, element-wise >= 0.
    """

    count: int
    mean: np.ndarray
    m2: np.ndarray

    @classmethod
    def empty(cls, dim: int) -> "WelfordState":
        return cls(0, np.zeros(dim), np.zeros(dim))

    @property
    def dim(self) -> int:
        return self.mean.shape[0]


def welford_update(state: WelfordState, x) -> WelfordState:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != state.mean.shape:
        raise InputError(f"Sample has shape {x.shape}, running statistics have {state.mean.shape}")
    count = state.count + 1
    delta = x - state.mean
    mean = state.mean + delta / count
    m2 = state.m2 + delta * (x - mean)
    return WelfordState(count, mean, m2)


def welford_update_batch(state: WelfordState, samples) -> WelfordState:
    """Feeds the rows of `samples` through welford_update in order."""
    for x in np.atleast_2d(np.asarray(samples, dtype=float)):
        state = welford_update(state, x)
    return state


def welford_finalize(state: WelfordState) -> Tuple[np.ndarray, np.ndarray]:
    """
    Mean and sample variance S_n / (n - 1). Fewer than two samples give unit variance.
    """
    if state.count < 2:
        return state.mean.copy(), np.ones_like(state.mean)
    return state.mean.copy(), state.m2 / (state.count - 1)


def _floored(std) -> np.ndarray:
    std = np.asarray(std, dtype=float)
    return np.where(std < STATE_STD_FLOOR, 1.0, std)


def normalize_state(s, mean, std) -> np.ndarray:
    """(s - mean) / std element-wise; std entries below the floor count as 1."""
    return (np.asarray(s, dtype=float) - np.asarray(mean, dtype=float)) / _floored(std)


def rescale_linear_policy(gain, bias, mean, std) -> Tuple[np.ndarray, np.ndarray]:
    """
    Rewrites u = K (s - mean) / std + b as u = K' s + b'.

    Returns:
        Tuple[np.ndarray, np.ndarray]: K' = K / std (column-wise) and b' = b - K (mean / std).
    """
    gain = np.atleast_2d(np.asarray(gain, dtype=float))
    std = _floored(std)
    mean = np.asarray(mean, dtype=float)
    return gain / std[None, :], np.asarray(bias, dtype=float) - gain @ (mean / std)


class StateNormalizer:
    """
    Running state statistics for a policy oracle.

    States observed during rollouts accumulate in `pending`; `commit()` publishes them, so
    every rollout between two commits is normalized with the same (mean, std).
    """

    def __init__(self, dim: int):
        self.pending = WelfordState.empty(dim)
        self.mean = np.zeros(dim)
        self.std = np.ones(dim)

    def observe(self, states) -> None:
        self.pending = welford_update_batch(self.pending, states)

    def commit(self) -> None:
        mean, variance = welford_finalize(self.pending)
        self.mean = mean
        self.std = _floored(np.sqrt(variance))

    def normalize(self, s) -> np.ndarray:
        return normalize_state(s, self.mean, self.std)

    __call__ = normalize
