# src/config/constants.py

"""
Constants for the GIBO experiment runner.
"""

# Valid experiment kinds and optimizer names
VALID_EXPERIMENT_KINDS = ["synthetic-within", "synthetic-out", "lqr"]
VALID_OPTIMIZERS = ["gibo", "ars", "vbo"]
VALID_BEST_GUESS_MODES = ["noiseless", "noisy"]
VALID_PRIOR_KINDS = ["uniform", "normal", "fixed"]

# One-letter shortcuts for experiment kinds (case-insensitive)
EXPERIMENT_SHORTCUTS = {
    "w": "synthetic-within",
    "o": "synthetic-out",
    "l": "lqr",
}

# Synthetic benchmark dimensions covered by the Sobol direction numbers
MAX_SYNTHETIC_DIMENSION = 36

# Numerical tolerances
JITTER = 1e-8
DEGENERATE_GRADIENT_TOL = 1e-12
RETURN_STD_FLOOR = 1e-8
STATE_STD_FLOOR = 1e-8
NORMALIZATION_TOL = 1e-12
NORMAL_PRIOR_FLOOR = 1e-3

# Exit codes of the CLI
EXIT_OK = 0
EXIT_CONFIG_ERROR = 2
EXIT_PARTIAL_FAILURE = 3
