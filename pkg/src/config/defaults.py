# src/config/defaults.py

import configparser
import os

# Ensure config.ini exists
CONFIG_PATH = os.path.join(os.path.dirname(__file__), "config.ini")
if not os.path.exists(CONFIG_PATH):
    raise FileNotFoundError(f"Configuration file not found at {CONFIG_PATH}")

# Load configuration
_config = configparser.ConfigParser()
_config.read(CONFIG_PATH)

# Experiment defaults
DEFAULT_EXPERIMENT_KIND = _config["DEFAULT"]["EXPERIMENT_KIND"]
DEFAULT_DIMENSIONS = [int(d) for d in _config["DEFAULT"]["DIMENSIONS"].split(",")]
DEFAULT_TRIALS = _config["DEFAULT"].getint("TRIALS")
DEFAULT_BUDGET = _config["DEFAULT"].getint("BUDGET")
DEFAULT_SEED = _config["DEFAULT"].getint("SEED")
DEFAULT_WORKERS = _config["DEFAULT"].getint("WORKERS")
DEFAULT_OPTIMIZERS = [o.strip() for o in _config["DEFAULT"]["OPTIMIZERS"].split(",")]
DEFAULT_RESULTS_DIR = _config["DEFAULT"]["RESULTS_DIR"]
DEFAULT_LOGS_DIR = _config["DEFAULT"]["LOGS_DIR"]
DEFAULT_LOG_LEVEL = _config["DEFAULT"]["LOG_LEVEL"]
DEFAULT_RECORD_TIMING = _config["DEFAULT"].getboolean("RECORD_TIMING")

# Synthetic benchmark
DEFAULT_SUPPORT_POINTS = _config["SYNTHETIC"].getint("SUPPORT_POINTS")
DEFAULT_NOISE_STD = _config["SYNTHETIC"].getfloat("NOISE_STD")
DEFAULT_SIGNAL_VARIANCE = _config["SYNTHETIC"].getfloat("SIGNAL_VARIANCE")
DEFAULT_LENGTHSCALE_SPREAD = _config["SYNTHETIC"].getfloat("LENGTHSCALE_SPREAD")
DEFAULT_START_COORDINATE = _config["SYNTHETIC"].getfloat("START_COORDINATE")
DEFAULT_GLOBAL_MAX_ITERATIONS = _config["SYNTHETIC"].getint("GLOBAL_MAX_ITERATIONS")
DEFAULT_BEST_GUESS = _config["SYNTHETIC"]["BEST_GUESS"]

# LQR benchmark
DEFAULT_TRAJECTORY_LENGTH = _config["LQR"].getint("TRAJECTORY_LENGTH")
DEFAULT_TRAJECTORIES_PER_CALL = _config["LQR"].getint("TRAJECTORIES_PER_CALL")
DEFAULT_OVERFLOW_THRESHOLD = _config["LQR"].getfloat("OVERFLOW_THRESHOLD")
DEFAULT_LQR_TIMESTEPS = _config["LQR"].getint("TIMESTEPS")

# Hyperparameter tables, kept as raw strings; "auto" entries are resolved in config.py
HYPERPARAMETER_TABLES = {
    section: {
        key: value
        for key, value in _config[section].items()
        if key not in _config.defaults()
    }
    for section in ("GIBO_SYNTHETIC", "GIBO_LQR", "ARS_WITHIN", "ARS_OUT", "ARS_LQR", "VBO")
}
