# src/config/config.py

"""
Resolution of validated experiment configurations into optimizer settings.

The hyperparameter tables in config.ini hold a few "auto" entries that depend on the
dimension or the experiment kind:

- GIBO samples per step M = d and window N_m = 5d (synthetic tables).
- GIBO lengthscale prior: uniform over the lengthscale interval of the synthetic generator.
- GIBO refitting: off for within-model experiments, on otherwise.
- ARS perturbation nu = 0.1 * 2 * delta_sub(d) (within-model) and N = 1 + d // 8 directions.

Within-model runs hand the generating kernel to the model-based optimizers; every other kind
starts from the prior modes and refits by MAP.
"""

from typing import Dict, Optional

from src.benchmarks.lqr import benchmark_instance
from src.benchmarks.synthetic import delta_sub, lengthscale_bounds
from src.gp.hyperparameters import Hyperpriors, parse_prior

AUTO = "auto"


def is_auto(value) -> bool:
    return isinstance(value, str) and value.strip().lower() == AUTO


def hyperpriors_for(cfg: Dict, dim: int) -> Hyperpriors:
    """GIBO/vanilla-BO hyperpriors of the configured experiment at dimension `dim`."""
    gibo = cfg["gibo"]
    lengthscale = gibo["lengthscale_prior"]
    if is_auto(lengthscale):
        low, high = lengthscale_bounds(dim, cfg["synthetic"]["lengthscale_spread"])
        lengthscale = f"uniform:{low!r},{high!r}"
    return Hyperpriors(
        parse_prior(lengthscale),
        parse_prior(gibo["signal_std_prior"]),
        parse_prior(gibo["noise_std_prior"]),
    )


def refits_hyperparameters(cfg: Dict) -> bool:
    refit = cfg["gibo"]["refit"]
    if is_auto(refit):
        return cfg["experiment"]["kind"] != "synthetic-within"
    return bool(refit)


def gibo_settings(cfg: Dict, dim: int) -> Dict:
    """Keyword arguments of GiboConfig."""
    gibo = cfg["gibo"]
    return {
        "stepsize": gibo["stepsize"],
        "samples_per_step": dim if is_auto(gibo["samples_per_step"]) else gibo["samples_per_step"],
        "window": 5 * dim if is_auto(gibo["window"]) else gibo["window"],
        "delta_b": gibo["delta_b"],
        "normalize_gradient": gibo["normalize_gradient"],
        "refit": refits_hyperparameters(cfg),
        "hyperpriors": hyperpriors_for(cfg, dim),
        "restarts": gibo["restarts"],
        "raw_samples": None if is_auto(gibo["raw_samples"]) else gibo["raw_samples"],
        "acquisition_jac": gibo["acquisition_jac"],
    }


def ars_settings(cfg: Dict, dim: int) -> Dict:
    """Keyword arguments of ArsConfig."""
    ars = cfg["ars"]
    return {
        "stepsize": ars["stepsize"],
        "perturbation": 0.1 * 2.0 * delta_sub(dim) if is_auto(ars["perturbation"]) else ars["perturbation"],
        "directions": 1 + dim // 8 if is_auto(ars["directions"]) else ars["directions"],
        "elite": ars["elite"],
        "state_normalization": ars["state_normalization"],
    }


def vbo_settings(cfg: Dict, dim: int) -> Dict:
    """Keyword arguments of EiConfig, plus the hyperpriors when refitting."""
    vbo = cfg["vbo"]
    settings = {
        "xi": vbo["xi"],
        "restarts": vbo["restarts"],
        "raw_samples": vbo["raw_samples"],
        "refit_every": vbo["refit_every"],
    }
    if refits_hyperparameters(cfg):
        settings["hyperpriors"] = hyperpriors_for(cfg, dim)
    return settings


OPTIMIZER_SETTINGS = {
    "gibo": gibo_settings,
    "ars": ars_settings,
    "vbo": vbo_settings,
}


def optimizer_settings(cfg: Dict, name: str, dim: int) -> Dict:
    return OPTIMIZER_SETTINGS[name](cfg, dim)


def timesteps_per_call(cfg: Dict) -> Optional[int]:
    """Timesteps one LQR oracle call consumes; None for synthetic experiments."""
    if cfg["experiment"]["kind"] != "lqr":
        return None
    return cfg["lqr"]["trajectory_length"] * cfg["lqr"]["trajectories_per_call"]


def oracle_budget(cfg: Dict) -> int:
    """Oracle calls per trial: the budget itself, or timesteps // timesteps per call (LQR)."""
    per_call = timesteps_per_call(cfg)
    budget = cfg["experiment"]["budget"]
    return budget if per_call is None else budget // per_call


def experiment_dimensions(cfg: Dict):
    """Dimensions swept by the experiment; LQR has the single gain dimension p * n."""
    if cfg["experiment"]["kind"] == "lqr":
        return [benchmark_instance().gain_size]
    return list(cfg["experiment"]["dimensions"])
