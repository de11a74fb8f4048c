# src/config/params.py

from typing import Callable, Dict, List

from rich.console import Console

from src.acquisition.gradient_information import VALID_JAC_MODES
from src.gp.hyperparameters import parse_prior
from src.optimizers.optimizer_factory import OPTIMIZER_CLASSES
from src.utils.exceptions import ConfigError, InputError
from . import config as resolution
from .constants import (
    EXPERIMENT_SHORTCUTS,
    MAX_SYNTHETIC_DIMENSION,
    VALID_BEST_GUESS_MODES,
    VALID_EXPERIMENT_KINDS,
    VALID_OPTIMIZERS,
)
from .defaults import (
    DEFAULT_BEST_GUESS,
    DEFAULT_BUDGET,
    DEFAULT_DIMENSIONS,
    DEFAULT_EXPERIMENT_KIND,
    DEFAULT_GLOBAL_MAX_ITERATIONS,
    DEFAULT_LENGTHSCALE_SPREAD,
    DEFAULT_LOG_LEVEL,
    DEFAULT_LQR_TIMESTEPS,
    DEFAULT_NOISE_STD,
    DEFAULT_OPTIMIZERS,
    DEFAULT_OVERFLOW_THRESHOLD,
    DEFAULT_RECORD_TIMING,
    DEFAULT_RESULTS_DIR,
    DEFAULT_SEED,
    DEFAULT_SIGNAL_VARIANCE,
    DEFAULT_START_COORDINATE,
    DEFAULT_SUPPORT_POINTS,
    DEFAULT_TRAJECTORIES_PER_CALL,
    DEFAULT_TRAJECTORY_LENGTH,
    DEFAULT_TRIALS,
    DEFAULT_WORKERS,
    HYPERPARAMETER_TABLES,
)

console = Console()

VALID_LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

# Oracle calls of one optimizer step, from its config dataclass
STEP_EVALUATIONS = {
    "gibo": lambda c: c.evaluations_per_iteration,
    "ars": lambda c: c.evaluations_per_update,
    "vbo": lambda c: 1,
}

# Hyperparameter table per (section, experiment kind)
TABLES = {
    "gibo": {"synthetic-within": "GIBO_SYNTHETIC", "synthetic-out": "GIBO_SYNTHETIC", "lqr": "GIBO_LQR"},
    "ars": {"synthetic-within": "ARS_WITHIN", "synthetic-out": "ARS_OUT", "lqr": "ARS_LQR"},
    "vbo": {"synthetic-within": "VBO", "synthetic-out": "VBO", "lqr": "VBO"},
}


def _fail(message: str, path: str):
    console.print(f"[bold red]Error: {path}: {message}[/bold red]")
    raise ConfigError(message, field_path=path)


def normalize_kind(kind: str) -> str:
    """Resolves one-letter shortcuts (w/o/l) and validates the experiment kind."""
    value = str(kind).strip().lower()
    value = EXPERIMENT_SHORTCUTS.get(value, value)
    if value not in VALID_EXPERIMENT_KINDS:
        _fail(f"Invalid experiment kind '{kind}'. Choose from {VALID_EXPERIMENT_KINDS}", "experiment.kind")
    return value


def _defaults(kind: str) -> Dict[str, Dict]:
    return {
        "experiment": {
            "kind": kind,
            "dimensions": DEFAULT_DIMENSIONS,
            "trials": DEFAULT_TRIALS,
            "budget": DEFAULT_LQR_TIMESTEPS if kind == "lqr" else DEFAULT_BUDGET,
            "seed": DEFAULT_SEED,
            "workers": DEFAULT_WORKERS,
            "optimizers": DEFAULT_OPTIMIZERS,
            "out": DEFAULT_RESULTS_DIR,
            "log_level": DEFAULT_LOG_LEVEL,
            "record_timing": DEFAULT_RECORD_TIMING,
        },
        "synthetic": {
            "support_points": DEFAULT_SUPPORT_POINTS,
            "noise_std": DEFAULT_NOISE_STD,
            "signal_variance": DEFAULT_SIGNAL_VARIANCE,
            "lengthscale_spread": DEFAULT_LENGTHSCALE_SPREAD,
            "start_coordinate": DEFAULT_START_COORDINATE,
            "global_max_iterations": DEFAULT_GLOBAL_MAX_ITERATIONS,
            "best_guess": DEFAULT_BEST_GUESS,
        },
        "lqr": {
            "trajectory_length": DEFAULT_TRAJECTORY_LENGTH,
            "trajectories_per_call": DEFAULT_TRAJECTORIES_PER_CALL,
            "overflow_threshold": DEFAULT_OVERFLOW_THRESHOLD,
        },
        **{section: dict(HYPERPARAMETER_TABLES[tables[kind]]) for section, tables in TABLES.items()},
    }


def apply_defaults(args: Dict[str, Dict]) -> Dict[str, Dict]:
    """
    Fills every section with the defaults of the configured experiment kind.

    Hyperparameter sections take their defaults from the table matching the kind, so an
    LQR experiment gets the LQR column and a synthetic one the synthetic column.

    Raises:
        ConfigError: On an invalid kind or keys that no section knows.
    """
    kind = normalize_kind(args.get("experiment", {}).get("kind", DEFAULT_EXPERIMENT_KIND))
    merged = _defaults(kind)
    for section, values in args.items():
        if section not in merged:
            _fail(f"Unknown section. Choose from {list(merged)}", section)
        for key, value in values.items():
            if key not in merged[section]:
                _fail(f"Unknown key. Choose from {sorted(merged[section])}", f"{section}.{key}")
            merged[section][key] = value
    merged["experiment"]["kind"] = kind
    return merged


# --- converters: (value, field path) -> typed value ---


def _auto(convert: Callable) -> Callable:
    def wrapped(value, path):
        return resolution.AUTO if resolution.is_auto(value) else convert(value, path)

    return wrapped


def _int(minimum: int = None, maximum: int = None) -> Callable:
    def convert(value, path):
        try:
            number = int(str(value).strip())
        except ValueError:
            number = None
        if number is None or isinstance(value, bool):
            _fail(f"must be an integer, got '{value}'", path)
        if minimum is not None and number < minimum:
            _fail(f"must be >= {minimum}, got {number}", path)
        if maximum is not None and number > maximum:
            _fail(f"must be <= {maximum}, got {number}", path)
        return number

    return convert


def _float(positive: bool = False, non_negative: bool = False, below: float = None) -> Callable:
    def convert(value, path):
        try:
            number = float(value)
        except (TypeError, ValueError):
            _fail(f"must be a number, got '{value}'", path)
        if number != number or number in (float("inf"), float("-inf")):
            _fail(f"must be finite, got {value}", path)
        if positive and not number > 0:
            _fail(f"must be positive, got {number}", path)
        if non_negative and number < 0:
            _fail(f"must be non-negative, got {number}", path)
        if below is not None and not number < below:
            _fail(f"must be < {below}, got {number}", path)
        return number

    return convert


def _bool(value, path) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("y", "yes", "t", "true", "1", "on"):
        return True
    if text in ("n", "no", "f", "false", "0", "off"):
        return False
    _fail(f"must be a boolean, got '{value}'", path)


def _choice(options: List[str], transform: Callable = str.lower) -> Callable:
    def convert(value, path):
        text = transform(str(value).strip())
        if text not in options:
            _fail(f"Invalid value '{value}'. Choose from {options}", path)
        return text

    return convert


def _list(convert: Callable) -> Callable:
    def wrapped(value, path):
        items = value if isinstance(value, (list, tuple)) else [v for v in str(value).split(",") if v.strip()]
        if not items:
            _fail("must not be empty", path)
        return [convert(item.strip() if isinstance(item, str) else item, path) for item in items]

    return wrapped


def _prior(value, path) -> str:
    try:
        parse_prior(value)
    except InputError as e:
        _fail(str(e), path)
    return str(value).strip()


def _text(value, path) -> str:
    text = str(value).strip()
    if not text:
        _fail("must not be empty", path)
    return text


SCHEMA: Dict[str, Dict[str, Callable]] = {
    "experiment": {
        "kind": _choice(VALID_EXPERIMENT_KINDS),
        "dimensions": _list(_int(1, MAX_SYNTHETIC_DIMENSION)),
        "trials": _int(1),
        "budget": _int(1),
        "seed": _int(0),
        "workers": _int(1),
        "optimizers": _list(_choice(VALID_OPTIMIZERS)),
        "out": _text,
        "log_level": _choice(VALID_LOG_LEVELS, str.upper),
        "record_timing": _bool,
    },
    "synthetic": {
        "support_points": _int(2),
        "noise_std": _float(non_negative=True),
        "signal_variance": _float(positive=True),
        "lengthscale_spread": _float(non_negative=True, below=1.0),
        "start_coordinate": _float(non_negative=True),
        "global_max_iterations": _int(1),
        "best_guess": _choice(VALID_BEST_GUESS_MODES),
    },
    "lqr": {
        "trajectory_length": _int(1),
        "trajectories_per_call": _int(1),
        "overflow_threshold": _float(positive=True),
    },
    "gibo": {
        "stepsize": _float(positive=True),
        "samples_per_step": _auto(_int(1)),
        "window": _auto(_int(2)),
        "delta_b": _float(positive=True),
        "normalize_gradient": _bool,
        "restarts": _int(1),
        "raw_samples": _auto(_int(1)),
        "acquisition_jac": _choice(VALID_JAC_MODES),
        "refit": _auto(_bool),
        "lengthscale_prior": _auto(_prior),
        "signal_std_prior": _prior,
        "noise_std_prior": _prior,
    },
    "ars": {
        "stepsize": _float(positive=True),
        "perturbation": _auto(_float(positive=True)),
        "directions": _auto(_int(1)),
        "elite": _int(0),
        "state_normalization": _bool,
    },
    "vbo": {
        "xi": _float(non_negative=True),
        "restarts": _int(1),
        "raw_samples": _int(1),
        "refit_every": _int(1),
    },
}


def validate_parameters(args: Dict[str, Dict]) -> Dict[str, Dict]:
    """
    Types and validates a configuration produced by apply_defaults.

    Besides per-field checks, every optimizer is resolved for every dimension so that
    invalid combinations (e.g. window < samples per step + 1, or a budget smaller than one
    optimizer step) are reported before any trial runs.

    Args:
        args (Dict): Configuration with all sections present.

    Returns:
        Dict: Typed configuration.

    Raises:
        ConfigError: With the dotted field path of the first offending entry.
    """
    validated = {}
    for section, fields in SCHEMA.items():
        values = args.get(section, {})
        missing = [key for key in fields if key not in values or values[key] is None]
        if missing:
            _fail(f"Missing required parameters: {missing}", section)
        validated[section] = {key: convert(values[key], f"{section}.{key}") for key, convert in fields.items()}

    experiment = validated["experiment"]
    kind = experiment["kind"]
    if kind == "lqr" and "vbo" in experiment["optimizers"]:
        _fail("vanilla BO is only available for synthetic experiments", "experiment.optimizers")
    if len(set(experiment["optimizers"])) != len(experiment["optimizers"]):
        _fail("optimizers must not repeat", "experiment.optimizers")

    calls = resolution.oracle_budget(validated)
    if calls < 1:
        _fail(f"budget allows no oracle call ({resolution.timesteps_per_call(validated)} timesteps per call)", "experiment.budget")
    for dim in resolution.experiment_dimensions(validated):
        for name in experiment["optimizers"]:
            settings = resolution.optimizer_settings(validated, name, dim)
            if name == "vbo":
                settings.pop("hyperpriors", None)
            _, config_class = OPTIMIZER_CLASSES[name]
            try:
                optimizer_config = config_class(**settings)
            except InputError as e:
                _fail(f"{e} (dimension {dim})", name)
            unit = STEP_EVALUATIONS[name](optimizer_config)
            if calls < unit:
                _fail(
                    f"{calls} oracle calls per trial are fewer than one {name} step ({unit}) at dimension {dim}",
                    "experiment.budget",
                )
    return validated


def load_experiment_config(args: Dict[str, Dict]) -> Dict[str, Dict]:
    """apply_defaults followed by validate_parameters."""
    return validate_parameters(apply_defaults(args))
