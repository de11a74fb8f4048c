#!/usr/bin/env python3
# main.py

"""
Command-line runner for the GIBO benchmark suite.

Commands:
- run: executes an experiment INI file and writes `rows.csv` and `summary.json` to the
  output directory.
- export: turns a rows file into plot-ready per-evaluation aggregates.

Exit codes: 0 on success, 2 on configuration or input errors, 3 when some trials failed.

Example usage:
    python main.py run experiments/within_d8.ini --seed 1 --workers 4 --out results/within_d8
    python main.py export results/within_d8/rows.csv --out results/within_d8/curves.csv
"""

import logging
import os
import sys
import warnings
from typing import Dict, List, Optional

import click
from rich.console import Console
from rich.table import Table

from src.config import config as resolution
from src.config.constants import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_PARTIAL_FAILURE
from src.config.params import load_experiment_config
from src.run_experiment import run_experiment
from src.utils import ExperimentUtils
from src.utils import logger as logger_utils
from src.utils.exceptions import ConfigError, ParseError
from src.utils.messages import MESSAGES

# scipy's Sobol sampler warns about non-power-of-two sample counts
warnings.filterwarnings("ignore", category=UserWarning, module="scipy.stats")

console = Console()
logger = logging.getLogger("GIBO.CLI")

ROWS_FILE = "rows.csv"
SUMMARY_FILE = "summary.json"


def print_message(key: str, **kwargs) -> None:
    """
    Prints a console message from the MESSAGES lookup table, formatting it with provided kwargs.
    """
    message = MESSAGES.get(key, f"[bold red]Missing message for key: {key}[/bold red]")
    console.print(message.format(**kwargs))


def apply_overrides(raw: Dict[str, Dict], seed: Optional[int], workers: Optional[int], out: Optional[str]) -> Dict:
    """Command-line options win over the [experiment] section of the file."""
    experiment = raw.setdefault("experiment", {})
    if seed is not None:
        experiment["seed"] = str(seed)
    if workers is not None:
        experiment["workers"] = str(workers)
    if out is not None:
        experiment["out"] = out
    return raw


def experiment_name(config_path: str, seed: int) -> str:
    """Deterministic experiment identifier, so identical runs write identical rows."""
    stem = os.path.splitext(os.path.basename(config_path))[0]
    return f"{stem}-seed{seed}"


def display_summary(summary: Dict, kind: str) -> None:
    metric = "relative error" if kind == "lqr" else "normalized regret"
    table = Table(title=MESSAGES["summary_title"].format(metric=metric), show_header=True, header_style="bold magenta")
    table.add_column("Optimizer", style="cyan")
    table.add_column("Dimension", justify="right")
    table.add_column("Trials", justify="right")
    table.add_column("Mean", justify="right", style="green")
    table.add_column("Median", justify="right", style="green")
    table.add_column("Std", justify="right")
    if kind == "lqr":
        table.add_column("Stabilized", justify="right")
        table.add_column("Median first stable", justify="right")

    for group in summary["groups"]:
        stats = group["final_metric"]
        cells: List[str] = [
            group["optimizer"],
            str(group["dimension"]),
            f"{stats['finite']}/{stats['trials']}",
            f"{stats['mean']:.4g}" if "mean" in stats else "-",
            f"{stats['median']:.4g}" if "median" in stats else "-",
            f"{stats['std']:.4g}" if "std" in stats else "-",
        ]
        if kind == "lqr":
            first = group.get("median_first_stable")
            cells.append(f"{group.get('stabilized_fraction', 0.0):.0%}")
            cells.append("-" if first is None else f"{first:.0f}")
        table.add_row(*cells)
    console.print(table)


@click.group()
def cli():
    """
    GIBO benchmark runner

    Runs seeded comparisons of gradient-informative Bayesian optimization against ARS and
    vanilla BO on GP-sampled objectives and on LQR policy search.
    """


@cli.command()
@click.argument("config_path", type=click.Path(dir_okay=False))
@click.option("--seed", type=int, help="Master seed (overrides [experiment] seed)")
@click.option("--workers", type=int, help="Number of worker processes (overrides [experiment] workers)")
@click.option("--out", type=click.Path(file_okay=False), help="Output directory (overrides [experiment] out)")
@click.option("--quiet", is_flag=True, default=False, help="Log to files only and hide the progress bar")
def run(config_path: str, seed: Optional[int], workers: Optional[int], out: Optional[str], quiet: bool):
    """Run the experiment described by CONFIG_PATH."""
    print_message("loading_config", path=config_path)
    try:
        raw = ExperimentUtils.load_config(config_path)
        cfg = load_experiment_config(apply_overrides(raw, seed, workers, out))
    except FileNotFoundError:
        print_message("file_not_found", path=config_path)
        sys.exit(EXIT_CONFIG_ERROR)
    except ConfigError as e:
        print_message("config_error", error=e)
        sys.exit(EXIT_CONFIG_ERROR)

    experiment = cfg["experiment"]
    out_dir = experiment["out"]
    ExperimentUtils.setup_logger(
        log_level=experiment["log_level"],
        log_to_file=True,
        log_to_console=not quiet,
        structured_log_file=os.path.join(out_dir, "structured_logs.json"),
        log_dir=os.path.join(out_dir, "logs"),
    )
    experiment_id = experiment_name(config_path, experiment["seed"])
    dimensions = resolution.experiment_dimensions(cfg)
    print_message(
        "experiment_header",
        experiment_id=experiment_id,
        kind=experiment["kind"],
        dimensions=dimensions,
        trials=experiment["trials"],
        optimizers=experiment["optimizers"],
    )
    print_message("budget_info", budget=experiment["budget"], calls=resolution.oracle_budget(cfg))

    try:
        result = run_experiment(cfg, experiment_id, progress=not quiet)
    except KeyboardInterrupt:
        print_message("interrupted")
        raise

    rows_path = os.path.join(out_dir, ROWS_FILE)
    summary_path = os.path.join(out_dir, SUMMARY_FILE)
    ExperimentUtils.write_rows(result.rows, rows_path)
    summary = ExperimentUtils.summarize(result.rows, result.failures)
    summary.update(
        experiment_id=experiment_id,
        kind=experiment["kind"],
        seed=experiment["seed"],
        budget=experiment["budget"],
        oracle_budget=resolution.oracle_budget(cfg),
        runs=result.runs,
    )
    ExperimentUtils.write_summary(summary, summary_path)
    display_summary(summary, experiment["kind"])

    for failure in result.failures:
        print_message(
            "trial_failed",
            trial=failure["trial"],
            optimizer=failure["optimizer"],
            dimension=failure["dimension"],
            error=failure["error"],
        )
    if result.failures:
        print_message("partial_failure", failed=len(result.failures), total=result.runs, summary=summary_path)
        logger_utils.log_with_experiment_id(
            logger, "warning",
            f"{len(result.failures)} of {result.runs} run(s) failed",
            experiment_id,
        )
        sys.exit(EXIT_PARTIAL_FAILURE)

    print_message("experiment_completed", rows=rows_path, summary=summary_path)
    sys.exit(EXIT_OK)


@cli.command()
@click.argument("rows_file", type=click.Path(dir_okay=False))
@click.option("--out", "out_file", required=True, type=click.Path(dir_okay=False), help="Curves CSV to write")
@click.option("--lower", type=float, default=2.0, show_default=True, help="Lower percentile of the band")
@click.option("--upper", type=float, default=98.0, show_default=True, help="Upper percentile of the band")
def export(rows_file: str, out_file: str, lower: float, upper: float):
    """Aggregate ROWS_FILE into per-evaluation curves."""
    if not 0.0 <= lower <= upper <= 100.0:
        print_message("config_error", error=f"need 0 <= lower <= upper <= 100, got {lower}, {upper}")
        sys.exit(EXIT_CONFIG_ERROR)
    try:
        count = ExperimentUtils.export_curves(rows_file, out_file, lower, upper)
    except FileNotFoundError:
        print_message("file_not_found", path=rows_file)
        sys.exit(EXIT_CONFIG_ERROR)
    except ParseError as e:
        print_message("parse_error", path=rows_file, error=e)
        sys.exit(EXIT_CONFIG_ERROR)
    print_message("export_completed", count=count, out=out_file)
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    cli()
