# src/run_experiment.py

"""
Run benchmark experiments: every (dimension, trial, optimizer) combination of a validated
configuration, scored and flattened into result rows.

One task covers one (dimension, trial) pair: the objective or LQR instance is built once
and every configured optimizer runs on it with its own oracle and optimizer streams.
Tasks are independent, so they can run in worker processes; rows are reassembled in
(dimension, trial, optimizer) order whatever the completion order.
"""

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from src.benchmarks import create_benchmark
from src.benchmarks.base_benchmark import BaseBenchmark
from src.config import config as resolution
from src.optimizers import create_optimizer
from src.optimizers.base_optimizer import RunHistory
from src.utils import logger as logger_utils
from src.utils.results import ResultRow
from src.utils.rng import STREAM_OBJECTIVE, STREAM_OPTIMIZER, STREAM_ORACLE, derive_seed, make_rng

logger = logging.getLogger("GIBO.RunExperiment")


@dataclass
class TrialOutcome:
    """Rows and failures of one (dimension, trial) task."""

    dimension: int
    trial: int
    rows: List[ResultRow] = field(default_factory=list)
    failures: List[Dict] = field(default_factory=list)


@dataclass
class ExperimentResult:
    """Rows and failures of a whole experiment; `runs` counts (dimension, trial, optimizer) runs."""

    rows: List[ResultRow]
    failures: List[Dict]
    runs: int


class TimedOracle:
    """Oracle wrapper recording the elapsed time of each call; other attributes pass through."""

    def __init__(self, oracle, start: float):
        self._oracle = oracle
        self._start = start
        self.elapsed: List[float] = []

    def __call__(self, theta) -> float:
        y = self._oracle(theta)
        self.elapsed.append(time.perf_counter() - self._start)
        return y

    def __getattr__(self, name):
        return getattr(self._oracle, name)


def trial_seeds(master_seed: int, dimension: int, trial: int, optimizer_index: int) -> Tuple[int, int]:
    """(oracle seed, optimizer seed) of one run."""
    return (
        derive_seed(master_seed, STREAM_ORACLE, dimension, trial, optimizer_index),
        derive_seed(master_seed, STREAM_OPTIMIZER, dimension, trial, optimizer_index),
    )


def history_rows(
    experiment_id: str,
    optimizer: str,
    dimension: int,
    trial: int,
    history: RunHistory,
    benchmark: BaseBenchmark,
    oracle=None,
    elapsed: Optional[List[float]] = None,
) -> List[ResultRow]:
    """Scores a run and flattens it into one row per oracle call."""
    score = benchmark.score(history, oracle)
    rows = []
    for k, record in enumerate(history):
        stable = "" if score.stable is None else ("1" if score.stable[k] else "0")
        rows.append(
            ResultRow(
                experiment_id=experiment_id,
                optimizer=optimizer,
                dimension=dimension,
                trial=trial,
                evaluation=int(score.evaluations[k]),
                y=float(record.y),
                best_so_far=float(record.best_y),
                metric=float(score.metric[k]),
                stable=stable,
                wall_clock=float(elapsed[k]) if elapsed else 0.0,
            )
        )
    benchmark.log_score(score, optimizer)
    return rows


def run_trial(cfg: Dict, dimension: int, trial: int, experiment_id: str = "N/A") -> TrialOutcome:
    """
    Runs every configured optimizer on the benchmark of one (dimension, trial) pair.

    A failure of one optimizer is recorded and the next one runs; a failure while building
    the benchmark is recorded once per optimizer.

    Args:
        cfg (Dict): Validated configuration.
        dimension (int): Search-space dimension.
        trial (int): Trial index.
        experiment_id (str): Identifier written to every row.

    Returns:
        TrialOutcome: Rows in optimizer order plus failure records.
    """
    experiment = cfg["experiment"]
    kind = experiment["kind"]
    master_seed = experiment["seed"]
    trial_id = logger_utils.trial_log_id(experiment_id, dimension, trial)
    outcome = TrialOutcome(dimension, trial)
    section = cfg["lqr"] if kind == "lqr" else cfg["synthetic"]

    try:
        benchmark = create_benchmark(
            kind, dimension, derive_seed(master_seed, STREAM_OBJECTIVE, dimension, trial), section, trial_id
        )
    except Exception as e:
        logger_utils.log_with_experiment_id(
            logger, "error", f"Benchmark construction failed: {e}", trial_id,
            extra_info={"dimension": dimension, "trial": trial},
        )
        for name in experiment["optimizers"]:
            outcome.failures.append(_failure(name, dimension, trial, e))
        return outcome

    budget = resolution.oracle_budget(cfg)
    params = benchmark.true_params if kind == "synthetic-within" else None

    for index, name in enumerate(experiment["optimizers"]):
        oracle_seed, optimizer_seed = trial_seeds(master_seed, dimension, trial, index)
        start = time.perf_counter()
        try:
            settings = resolution.optimizer_settings(cfg, name, dimension)
            state_normalization = bool(settings.get("state_normalization", False))
            optimizer = create_optimizer(name, settings, benchmark.bounds, trial_id)
            oracle = benchmark.make_oracle(make_rng(oracle_seed), state_normalization)
            timed = TimedOracle(oracle, start)
            history = optimizer.run(timed, benchmark.start_point(), budget, make_rng(optimizer_seed), params)
            rows = history_rows(
                experiment_id, name, dimension, trial, history, benchmark, oracle,
                timed.elapsed if experiment["record_timing"] else None,
            )
        except Exception as e:
            logger_utils.log_with_experiment_id(
                logger, "error", f"{name} failed: {e}", trial_id,
                extra_info={"optimizer": name, "dimension": dimension, "trial": trial, "error": type(e).__name__},
            )
            outcome.failures.append(_failure(name, dimension, trial, e))
            continue
        outcome.rows.extend(rows)
        logger_utils.log_with_experiment_id(
            logger, "info",
            f"{name} completed {len(history)} evaluations in {time.perf_counter() - start:.3f} seconds",
            trial_id,
            extra_info={"optimizer": name, "final_metric": rows[-1].metric if rows else None},
        )
    return outcome


def _failure(optimizer: str, dimension: int, trial: int, error: Exception) -> Dict:
    return {
        "optimizer": optimizer,
        "dimension": dimension,
        "trial": trial,
        "error": f"{type(error).__name__}: {error}",
    }


def _run_task(task: Tuple[Dict, int, int, str]) -> TrialOutcome:
    cfg, dimension, trial, experiment_id = task
    return run_trial(cfg, dimension, trial, experiment_id)


def run_experiment(cfg: Dict, experiment_id: str = "N/A", progress: bool = True) -> ExperimentResult:
    """
    Runs a validated experiment configuration.

    Args:
        cfg (Dict): Output of `src.config.params.load_experiment_config`.
        experiment_id (str): Identifier written to every row; keep it deterministic for
            reproducible files.
        progress (bool): Whether to show a tqdm progress bar.

    Returns:
        ExperimentResult: Rows in (dimension, trial, optimizer) order and failure records.
    """
    experiment = cfg["experiment"]
    dimensions = resolution.experiment_dimensions(cfg)
    tasks = [(cfg, d, t, experiment_id) for d in dimensions for t in range(experiment["trials"])]
    workers = min(experiment["workers"], len(tasks))

    logger_utils.log_with_experiment_id(
        logger, "info",
        f"Running {len(tasks)} trial(s) of {experiment['kind']} with {workers} worker(s)",
        experiment_id,
        extra_info={
            "dimensions": dimensions,
            "trials": experiment["trials"],
            "optimizers": experiment["optimizers"],
            "oracle_budget": resolution.oracle_budget(cfg),
            "seed": experiment["seed"],
        },
    )

    bar = tqdm(total=len(tasks), desc="Running trials", disable=not progress)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = []
            for outcome in pool.map(_run_task, tasks):
                outcomes.append(outcome)
                bar.update(1)
    else:
        outcomes = []
        for task in tasks:
            outcomes.append(_run_task(task))
            bar.update(1)
    bar.close()

    outcomes.sort(key=lambda o: (dimensions.index(o.dimension), o.trial))
    rows = [row for outcome in outcomes for row in outcome.rows]
    failures = [failure for outcome in outcomes for failure in outcome.failures]

    logger_utils.log_with_experiment_id(
        logger, "info" if not failures else "warning",
        f"Experiment finished with {len(rows)} rows and {len(failures)} failed run(s)",
        experiment_id,
        extra_info={"rows": len(rows), "failures": len(failures)},
    )
    return ExperimentResult(rows, failures, len(tasks) * len(experiment["optimizers"]))
