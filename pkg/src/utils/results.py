# src/utils/results.py

"""
Result rows, the per-optimizer summary and plot-ready curve aggregates.

Rows are written as UTF-8 CSV with a header and "\\n" line endings; floats use repr so
reruns with the same seed produce byte-identical files.
"""

import csv
import json
import logging
import math
import os
from dataclasses import astuple, dataclass, fields
from datetime import datetime
from typing import Dict, Iterable, List, Optional, Sequence

import numpy as np

from .exceptions import ParseError

logger = logging.getLogger("GIBO.Utils")

SUMMARY_QUANTILES = (2, 25, 50, 75, 98)


@dataclass(frozen=True)
class ResultRow:
    """
    One oracle call of one trial.

    Attributes:
        experiment_id (str): Identifier of the experiment.
        optimizer (str): Optimizer name.
        dimension (int): Search-space dimension.
        trial (int): Trial index.
        evaluation (int): Evaluation index, or cumulative timesteps for LQR.
        y (float): Observed value.
        best_so_far (float): Best observed value up to this call.
        metric (float): Normalized regret or relative error.
        stable (str): "1"/"0" for LQR rows, empty otherwise.
        wall_clock (float): Seconds since the trial started (0.0 unless timing is recorded).
    """

    experiment_id: str
    optimizer: str
    dimension: int
    trial: int
    evaluation: int
    y: float
    best_so_far: float
    metric: float
    stable: str = ""
    wall_clock: float = 0.0


ROW_COLUMNS = [f.name for f in fields(ResultRow)]
_INT_COLUMNS = ("dimension", "trial", "evaluation")
_FLOAT_COLUMNS = ("y", "best_so_far", "metric", "wall_clock")


def _format(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(rows: Iterable[ResultRow], filename: str) -> int:
    """
    Writes result rows to `filename`, creating parent directories.

    Returns:
        int: Number of rows written.
    """
    directory = os.path.dirname(filename)
    if directory:
        os.makedirs(directory, exist_ok=True)
    count = 0
    with open(filename, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(ROW_COLUMNS)
        for row in rows:
            writer.writerow([_format(v) for v in astuple(row)])
            count += 1
    logger.info(f"Saved {count} rows to {filename}", extra={"experiment_id": "N/A"})
    return count


def load_rows(filename: str) -> List[ResultRow]:
    """
    Reads a rows file written by write_rows.

    Raises:
        FileNotFoundError: If the file does not exist.
        ParseError: On a wrong header or a malformed row, with its 1-based line number.
    """
    if not os.path.exists(filename):
        raise FileNotFoundError(f"Error: {filename} not found.")

    rows = []
    with open(filename, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header != ROW_COLUMNS:
            raise ParseError(f"expected header {ROW_COLUMNS}, got {header}", line_number=1)
        for line_number, record in enumerate(reader, start=2):
            if len(record) != len(ROW_COLUMNS):
                raise ParseError(f"expected {len(ROW_COLUMNS)} fields, got {len(record)}", line_number)
            values = dict(zip(ROW_COLUMNS, record))
            try:
                for column in _INT_COLUMNS:
                    values[column] = int(values[column])
                for column in _FLOAT_COLUMNS:
                    values[column] = float(values[column])
            except ValueError as e:
                raise ParseError(str(e), line_number) from e
            if values["stable"] not in ("", "0", "1"):
                raise ParseError(f"stable must be empty, 0 or 1, got '{values['stable']}'", line_number)
            rows.append(ResultRow(**values))
    return rows


def _group(rows: Sequence[ResultRow]) -> Dict[tuple, Dict[int, List[ResultRow]]]:
    """(optimizer, dimension) -> trial -> rows in file order."""
    groups: Dict[tuple, Dict[int, List[ResultRow]]] = {}
    for row in rows:
        groups.setdefault((row.optimizer, row.dimension), {}).setdefault(row.trial, []).append(row)
    return groups


def _finite_stats(values: np.ndarray) -> Dict:
    finite = values[np.isfinite(values)]
    stats = {"trials": int(values.size), "finite": int(finite.size)}
    if finite.size == 0:
        return stats
    stats.update(
        mean=float(np.mean(finite)),
        median=float(np.median(finite)),
        std=float(np.std(finite)),
    )
    stats["quantiles"] = {f"q{q:02d}": float(np.percentile(finite, q)) for q in SUMMARY_QUANTILES}
    return stats


def summarize(rows: Sequence[ResultRow], failures: Optional[List[Dict]] = None) -> Dict:
    """
    Per (optimizer, dimension): statistics of the final metric over trials and, when rows
    carry stability flags, how many trials stabilized and when they first did.
    """
    summary = {"generated": datetime.now().strftime("%Y-%m-%d %H:%M:%S"), "groups": [], "failures": failures or []}
    for (optimizer, dimension), trials in sorted(_group(rows).items()):
        final = np.array([trial_rows[-1].metric for trial_rows in trials.values()])
        entry = {"optimizer": optimizer, "dimension": dimension, "final_metric": _finite_stats(final)}
        if any(r.stable for trial_rows in trials.values() for r in trial_rows):
            first = []
            for trial_rows in trials.values():
                hit = next((r.evaluation for r in trial_rows if r.stable == "1"), None)
                first.append(hit)
            found = [f for f in first if f is not None]
            entry["stabilized_trials"] = len(found)
            entry["stabilized_fraction"] = len(found) / len(first)
            entry["median_first_stable"] = float(np.median(found)) if found else None
        summary["groups"].append(entry)
    return summary


def write_summary(summary: Dict, filename: str) -> None:
    directory = os.path.dirname(filename)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(filename, "w", encoding="utf-8", newline="\n") as f:
        json.dump(summary, f, indent=4, allow_nan=False, default=_json_safe)
    logger.info(f"Saved summary to {filename}", extra={"experiment_id": "N/A"})


def _json_safe(obj):
    if hasattr(obj, "tolist"):
        return obj.tolist()
    raise TypeError(f"Object of type {type(obj).__name__} is not JSON serializable")


CURVE_COLUMNS = ["optimizer", "dimension", "evaluation", "trials", "mean", "median", "std", "p02", "p98"]


def curve_aggregates(rows: Sequence[ResultRow], lower: float = 2.0, upper: float = 98.0) -> List[List]:
    """
    Per optimizer, dimension and evaluation index: mean, median, std and the lower/upper
    percentile band of the metric across trials. Infinite metrics (unstable LQR gains) are
    kept, so bands may be infinite. Bands are nearest-rank order statistics (the lower band
    rounds down, the upper band rounds up), so they bracket the median even in columns that
    are entirely infinite.
    """
    aggregates = []
    for (optimizer, dimension), trials in sorted(_group(rows).items()):
        by_evaluation: Dict[int, List[float]] = {}
        for trial_rows in trials.values():
            for row in trial_rows:
                by_evaluation.setdefault(row.evaluation, []).append(row.metric)
        for evaluation in sorted(by_evaluation):
            values = np.array(by_evaluation[evaluation])
            with np.errstate(invalid="ignore"):
                mean = float(np.mean(values))
                std = float(np.std(values)) if np.all(np.isfinite(values)) else math.inf
            aggregates.append(
                [
                    optimizer,
                    dimension,
                    evaluation,
                    values.size,
                    mean,
                    float(np.median(values)),
                    std,
                    float(np.percentile(values, lower, method="lower")),
                    float(np.percentile(values, upper, method="higher")),
                ]
            )
    return aggregates


def export_curves(rows_file: str, out_file: str, lower: float = 2.0, upper: float = 98.0) -> int:
    """
    Writes plot-ready curve aggregates of a rows file as CSV.

    Returns:
        int: Number of aggregate rows written.
    """
    aggregates = curve_aggregates(load_rows(rows_file), lower, upper)
    directory = os.path.dirname(out_file)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(out_file, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CURVE_COLUMNS)
        for entry in aggregates:
            writer.writerow([_format(v) for v in entry])
    logger.info(f"Saved {len(aggregates)} curve rows to {out_file}", extra={"experiment_id": "N/A"})
    return len(aggregates)
