# src/utils/logger.py

import os
import logging
import json
from datetime import datetime
from typing import Optional
from rich.console import Console
from rich.text import Text

console = Console()

LOGGER_NAME = "GIBO"


class RichHandler(logging.Handler):
    """
    A logging handler that renders console output with rich markup.
    """

    def __init__(self, level: int = logging.NOTSET):
        super().__init__(level)
        self.console = console

    def emit(self, record):
        try:
            msg = self.format(record)
            self.console.print(Text.from_markup(msg))
        except Exception:
            self.handleError(record)


class StructuredFormatter(logging.Formatter):
    """
    Formats records either as rich markup (console) or as one JSON object per line (files).
    The experiment id and the optional `extra_info` dict travel with every record.
    """

    LEVEL_COLORS = {
        "INFO": "green",
        "WARNING": "yellow",
        "ERROR": "red",
        "DEBUG": "cyan",
    }

    def __init__(self, is_rich_handler: bool = False):
        super().__init__()
        self.is_rich_handler = is_rich_handler

    def format(self, record):
        log_entry = {
            "timestamp": self.formatTime(record, "%Y-%m-%d %H:%M:%S"),
            "name": record.name,
            "level": record.levelname,
            "message": record.getMessage(),
            "filename": record.filename,
            "lineno": record.lineno,
            "experiment_id": getattr(record, "experiment_id", "N/A"),
        }
        if hasattr(record, "extra_info"):
            log_entry["extra_info"] = record.extra_info

        if not self.is_rich_handler:
            return json.dumps(log_entry, default=_json_default)

        color = self.LEVEL_COLORS.get(record.levelname, "white")
        message = (
            f"[bold {color}]{log_entry['timestamp']} - {log_entry['name']} - "
            f"{log_entry['level']} - {log_entry['message']} "
            f"(Experiment ID: {log_entry['experiment_id']})"
        )
        if record.levelname in ("DEBUG", "ERROR"):
            message += f" [{log_entry['filename']}:{log_entry['lineno']}]"
        message += f"[/bold {color}]"
        if hasattr(record, "extra_info"):
            message += f" [dim](Extra: {json.dumps(log_entry['extra_info'], default=_json_default)})[/dim]"
        return message


def _json_default(obj):
    # numpy scalars and arrays show up in extra_info
    if hasattr(obj, "tolist"):
        return obj.tolist()
    return str(obj)


def setup_logger(
    log_level: str = "INFO",
    log_to_file: bool = True,
    log_to_console: bool = True,
    structured_log_file: Optional[str] = None,
    log_dir: str = "logs",
) -> logging.Logger:
    """
    Configures the package logger with file, console and structured JSON output.

    Args:
        log_level (str): Logging level ("DEBUG", "INFO", "WARNING", "ERROR").
        log_to_file (bool): Whether to log to a timestamped file in `log_dir`.
        log_to_console (bool): Whether to log to the console through rich.
        structured_log_file (str, optional): Extra JSON-lines file.
        log_dir (str): Directory for the timestamped log file.

    Returns:
        logging.Logger: The configured "GIBO" logger.
    """
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(getattr(logging, log_level.upper(), logging.INFO))
    logger.handlers.clear()

    handlers = []
    if log_to_file:
        os.makedirs(log_dir, exist_ok=True)
        timestamp = datetime.now().strftime("%Y-%m-%d_%H-%M-%S")
        file_handler = logging.FileHandler(os.path.join(log_dir, f"{timestamp}_experiment.log"))
        file_handler.setFormatter(StructuredFormatter(is_rich_handler=False))
        handlers.append(file_handler)

    if log_to_console:
        console_handler = RichHandler()
        console_handler.setFormatter(StructuredFormatter(is_rich_handler=True))
        handlers.append(console_handler)

    if structured_log_file:
        directory = os.path.dirname(structured_log_file)
        if directory:
            os.makedirs(directory, exist_ok=True)
        structured_handler = logging.FileHandler(structured_log_file)
        structured_handler.setFormatter(StructuredFormatter(is_rich_handler=False))
        handlers.append(structured_handler)

    for handler in handlers:
        logger.addHandler(handler)

    logger.debug("Logger configured", extra={"experiment_id": "N/A"})
    return logger


def log_with_experiment_id(
    logger: logging.Logger,
    level: str,
    message: str,
    experiment_id: str,
    extra_info: Optional[dict] = None,
):
    """
    Logs a message with an experiment ID and optional extra info.

    Args:
        logger: Logger instance.
        level: Log level ("debug", "info", "warning", "error").
        message: Log message.
        experiment_id: Identifier of the experiment or trial.
        extra_info: Optional dictionary with additional metadata.
    """
    log_method = getattr(logger, level.lower())
    if not logger.isEnabledFor(getattr(logging, level.upper())):
        return
    extra = {"experiment_id": experiment_id}
    if extra_info:
        extra["extra_info"] = extra_info
    log_method(message, extra=extra)


def trial_log_id(experiment_id: str, dimension: int, trial: int) -> str:
    """Log identifier of one (dimension, trial) task, e.g. ``within_model-seed0/d8/t3``."""
    return f"{experiment_id}/d{dimension}/t{trial}"
