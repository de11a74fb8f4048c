# src/benchmarks/lqr_benchmark.py

from typing import Dict, Optional

import numpy as np

from src.optimizers.base_optimizer import RunHistory
from src.runstats.welford import StateNormalizer, rescale_linear_policy
from .base_benchmark import BaseBenchmark, TrialScore
from .lqr import LQRInstance, LQROracle, RelativeError, RolloutConfig, benchmark_instance, relative_error


class LQRBenchmark(BaseBenchmark):
    """
    Policy search on an LQR instance from the zero gain. Rows are indexed by cumulative
    timesteps and scored by the relative error of the iterate current at each call.

    With state normalization the scored gain is the effective one, K / std, using the
    statistics that were in effect for that call; the offset -K mean / std is not scored.
    """

    name = "lqr"

    def __init__(
        self,
        instance: Optional[LQRInstance] = None,
        rollout: Optional[RolloutConfig] = None,
        experiment_id: str = "N/A",
    ):
        self.instance = instance or benchmark_instance()
        super().__init__(self.instance.gain_size, experiment_id)
        self.rollout = rollout or RolloutConfig()

    def start_point(self) -> np.ndarray:
        return np.zeros(self.dim)

    def make_oracle(self, rng: np.random.Generator, state_normalization: bool = False) -> LQROracle:
        normalizer = StateNormalizer(self.instance.state_dim) if state_normalization else None
        return LQROracle(self.instance, self.rollout, rng, normalizer, self.experiment_id)

    def _effective_gain(self, theta: np.ndarray, scale: Optional[np.ndarray]) -> np.ndarray:
        K = theta.reshape(self.instance.input_dim, self.instance.state_dim)
        if scale is None:
            return K
        gain, _ = rescale_linear_policy(K, np.zeros(K.shape[0]), np.zeros(K.shape[1]), scale)
        return gain

    def score(self, history: RunHistory, oracle: Optional[LQROracle] = None) -> TrialScore:
        scales = oracle.state_scales if oracle is not None and oracle.normalizer is not None else None
        cache: Dict[bytes, RelativeError] = {}
        metric = np.empty(len(history))
        stable = np.empty(len(history), dtype=bool)
        for k, record in enumerate(history):
            scale = scales[k] if scales is not None else None
            gain = self._effective_gain(record.iterate, scale)
            key = gain.tobytes()
            if key not in cache:
                cache[key] = relative_error(gain, self.instance)
            metric[k], stable[k] = cache[key]
        timesteps = self.rollout.timesteps * np.arange(1, len(history) + 1)
        return TrialScore(timesteps, metric, stable)
