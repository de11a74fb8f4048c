# src/optimizers/base_optimizer.py

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterator, List, Optional

import numpy as np

from src.gp.kernels import KernelParams
from src.utils import logger as logger_utils

logger = logging.getLogger("GIBO.Optimizers")

# An oracle maps a parameter vector to one noisy scalar observation.
Oracle = Callable[[np.ndarray], float]


@dataclass(frozen=True, eq=False)
class EvaluationRecord:
    """One oracle call, with the iterate that was current when it was made."""

    index: int
    point: np.ndarray
    y: float
    iterate: np.ndarray
    best_y: float
    best_point: np.ndarray


@dataclass
class RunHistory:
    """
    Per-evaluation record shared by every optimizer.

    Attributes:
        records (List[EvaluationRecord]): One entry per oracle call, in call order.
        metadata (Dict): Optimizer-specific run information (e.g. step lengths).
    """

    records: List[EvaluationRecord] = field(default_factory=list)
    metadata: Dict = field(default_factory=dict)

    def append(self, point, y: float, iterate) -> EvaluationRecord:
        point = np.array(point, dtype=float)
        iterate = np.array(iterate, dtype=float)
        y = float(y)
        if self.records and self.records[-1].best_y >= y:
            best_y, best_point = self.records[-1].best_y, self.records[-1].best_point
        else:
            best_y, best_point = y, point
        record = EvaluationRecord(len(self.records), point, y, iterate, best_y, best_point)
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[EvaluationRecord]:
        return iter(self.records)

    def __getitem__(self, index: int) -> EvaluationRecord:
        return self.records[index]

    @property
    def points(self) -> np.ndarray:
        return np.array([r.point for r in self.records])

    @property
    def ys(self) -> np.ndarray:
        return np.array([r.y for r in self.records])

    @property
    def iterates(self) -> np.ndarray:
        return np.array([r.iterate for r in self.records])

    @property
    def best_ys(self) -> np.ndarray:
        return np.array([r.best_y for r in self.records])


class BaseOptimizer:
    """
    Base class for all optimizers, providing a template for a budgeted run.

    Attributes:
        config: Optimizer-specific configuration dataclass.
        experiment_id (str): Identifier used in log records.
    """

    name = "base"

    def __init__(self, config, experiment_id: str = "N/A"):
        self.config = config
        self.experiment_id = experiment_id

    @property
    def evaluations_per_step(self) -> int:
        """Oracle calls consumed by one optimizer step."""
        raise NotImplementedError("Subclasses must implement evaluations_per_step")

    def run(
        self,
        oracle: Oracle,
        theta0: np.ndarray,
        budget: int,
        rng: np.random.Generator,
        params: Optional[KernelParams] = None,
    ) -> RunHistory:
        """
        Runs the optimizer until the evaluation budget is spent.

        Args:
            oracle (Oracle): Noisy objective.
            theta0 (np.ndarray): Start point.
            budget (int): Maximum number of oracle calls.
            rng (np.random.Generator): Source of all randomness of the run.
            params (KernelParams, optional): Known GP hyperparameters, for model-based optimizers.

        Raises:
            NotImplementedError: If the subclass does not implement this method.
        """
        raise NotImplementedError("Subclasses must implement run()")

    def log_run(self, history: RunHistory, extra_info: Optional[dict] = None) -> None:
        """
        Logs the end of a run using structured logging.
        """
        base_info = {"optimizer": self.name, "evaluations": len(history)}
        if len(history):
            base_info["best_y"] = history[-1].best_y
        if extra_info:
            base_info.update(extra_info)
        logger_utils.log_with_experiment_id(
            logger, "info",
            f"{self.name} finished after {len(history)} evaluations",
            self.experiment_id,
            extra_info=base_info,
        )
