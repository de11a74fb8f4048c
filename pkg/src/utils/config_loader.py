# src/utils/config_loader.py

import configparser
import logging
import os
from typing import Dict

from .exceptions import ConfigError

logger = logging.getLogger("GIBO.Utils")

CONFIG_SECTIONS = ("experiment", "synthetic", "lqr", "gibo", "ars", "vbo")


def load_config(config_file: str) -> Dict[str, Dict[str, str]]:
    """
    Loads an experiment configuration from an INI file.

    Section and key names are case-insensitive; values stay raw strings and are typed by
    `src.config.params.validate_parameters`.

    Args:
        config_file (str): Path to the INI file.

    Returns:
        Dict[str, Dict[str, str]]: One dict per section present in the file.

    Raises:
        FileNotFoundError: If the file does not exist.
        ConfigError: On syntax errors or unknown sections.
    """
    if not os.path.exists(config_file):
        raise FileNotFoundError(f"Error: {config_file} not found.")

    parser = configparser.ConfigParser(default_section="__none__", interpolation=None)
    try:
        with open(config_file, "r", encoding="utf-8") as f:
            parser.read_file(f)
    except configparser.Error as e:
        raise ConfigError(f"Cannot parse {config_file}: {e}") from e

    config = {}
    for section in parser.sections():
        name = section.strip().lower()
        if name not in CONFIG_SECTIONS:
            raise ConfigError(f"Unknown section. Choose from {list(CONFIG_SECTIONS)}", field_path=name)
        config[name] = {key.lower(): value.strip() for key, value in parser[section].items()}

    logger.debug(
        f"Loaded configuration from {config_file}",
        extra={"experiment_id": "N/A", "extra_info": config},
    )
    return config
