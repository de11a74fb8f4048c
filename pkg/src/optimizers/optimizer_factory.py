# src/optimizers/optimizer_factory.py

import logging
from typing import Optional

import numpy as np

from src.utils import logger as logger_utils
from src.utils.exceptions import InputError
from .ars import ArsConfig, ARSOptimizer
from .base_optimizer import BaseOptimizer
from .gibo import GiboConfig, GIBOOptimizer
from .vanilla_bo import EiConfig, VanillaBOOptimizer

logger = logging.getLogger("GIBO.Optimizers")

OPTIMIZER_CLASSES = {
    "gibo": (GIBOOptimizer, GiboConfig),
    "ars": (ARSOptimizer, ArsConfig),
    "vbo": (VanillaBOOptimizer, EiConfig),
}


def create_optimizer(
    name: str,
    settings: dict,
    bounds: Optional[np.ndarray] = None,
    experiment_id: str = "N/A",
) -> BaseOptimizer:
    """
    Builds an optimizer from resolved settings.

    Args:
        name (str): One of OPTIMIZER_CLASSES.
        settings (dict): Keyword arguments of the optimizer's config dataclass. For "vbo"
            an optional "hyperpriors" entry is passed to the optimizer instead.
        bounds (np.ndarray, optional): Domain box of shape (d, 2), required by "vbo".
        experiment_id (str): Unique identifier for this experiment run.

    Returns:
        BaseOptimizer: Configured optimizer.

    Raises:
        InputError: If the name is unknown or the settings are invalid.
    """
    if name not in OPTIMIZER_CLASSES:
        raise InputError(f"Invalid optimizer: {name}. Choose from {list(OPTIMIZER_CLASSES.keys())}")
    optimizer_class, config_class = OPTIMIZER_CLASSES[name]
    settings = dict(settings)

    try:
        if name == "vbo":
            if bounds is None:
                raise InputError("Vanilla BO needs domain bounds")
            hyperpriors = settings.pop("hyperpriors", None)
            optimizer = optimizer_class(config_class(**settings), bounds, hyperpriors, experiment_id)
        else:
            optimizer = optimizer_class(config_class(**settings), experiment_id)
    except TypeError as e:
        raise InputError(f"Invalid settings for optimizer '{name}': {e}") from e

    logger_utils.log_with_experiment_id(
        logger, "debug",
        f"Created optimizer '{name}'",
        experiment_id,
        extra_info={"settings": {k: v for k, v in settings.items() if k != "hyperpriors"}},
    )
    return optimizer
