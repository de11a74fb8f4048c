# src/utils/__init__.py

from .logger import setup_logger
from .results import export_curves, load_rows, summarize, write_rows, write_summary
from .config_loader import load_config


class ExperimentUtils:
    setup_logger = staticmethod(setup_logger)
    load_config = staticmethod(load_config)
    write_rows = staticmethod(write_rows)
    load_rows = staticmethod(load_rows)
    summarize = staticmethod(summarize)
    write_summary = staticmethod(write_summary)
    export_curves = staticmethod(export_curves)
