# src/optimizers/__init__.py
"""
Black-box optimizers sharing one oracle contract and one RunHistory schema.
"""

from .base_optimizer import BaseOptimizer, EvaluationRecord, Oracle, RunHistory
from .gibo import (
    GiboConfig,
    GIBOOptimizer,
    OptimizerState,
    gibo_iteration,
    mahalanobis_norm,
    normalize_gradient,
    run_gibo,
    select_local_window,
)
from .ars import ArsConfig, ARSOptimizer, ars_step, ars_update, run_ars
from .vanilla_bo import EiConfig, VanillaBOOptimizer, expected_improvement, run_vanilla_bo, suggest_ei
from .optimizer_factory import OPTIMIZER_CLASSES, create_optimizer

__all__ = [
    "BaseOptimizer",
    "EvaluationRecord",
    "Oracle",
    "RunHistory",
    "GiboConfig",
    "GIBOOptimizer",
    "OptimizerState",
    "gibo_iteration",
    "mahalanobis_norm",
    "normalize_gradient",
    "run_gibo",
    "select_local_window",
    "ArsConfig",
    "ARSOptimizer",
    "ars_step",
    "ars_update",
    "run_ars",
    "EiConfig",
    "VanillaBOOptimizer",
    "expected_improvement",
    "run_vanilla_bo",
    "suggest_ei",
    "OPTIMIZER_CLASSES",
    "create_optimizer",
]
