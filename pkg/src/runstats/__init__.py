# src/runstats/__init__.py

from .welford import (
    StateNormalizer,
    WelfordState,
    normalize_state,
    rescale_linear_policy,
    welford_finalize,
    welford_update,
    welford_update_batch,
)

__all__ = [
    "StateNormalizer",
    "WelfordState",
    "normalize_state",
    "rescale_linear_policy",
    "welford_finalize",
    "welford_update",
    "welford_update_batch",
]
