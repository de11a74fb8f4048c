# src/tests/conftest.py

import numpy as np
import pytest
from unittest.mock import MagicMock
from rich.console import Console

from src.gp.kernels import KernelParams
from src.gp.posterior import Dataset
from src.utils.rng import make_rng


@pytest.fixture
def mock_console(monkeypatch):
    """
    Fixture to mock rich.console.Console for capturing output.
    """
    mock = MagicMock(spec=Console)
    monkeypatch.setattr("src.config.params.console", mock)
    return mock


@pytest.fixture
def rng():
    return make_rng(1234)


@pytest.fixture
def params_2d():
    """Anisotropic 2-d kernel with a little observation noise."""
    return KernelParams(np.array([0.3, 0.5]), signal_variance=1.3, noise_variance=0.01)


@pytest.fixture
def dataset_2d(rng, params_2d):
    """Twelve random points in the unit square with smooth targets."""
    X = rng.uniform(0.0, 1.0, size=(12, 2))
    y = np.sin(3.0 * X[:, 0]) + np.cos(2.0 * X[:, 1])
    return Dataset.from_arrays(X, y)


@pytest.fixture
def write_ini(tmp_path):
    """
    Writes an experiment INI file from a {section: {key: value}} dict and returns its path.
    """

    def write(sections, name="experiment.ini"):
        lines = []
        for section, values in sections.items():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in values.items())
            lines.append("")
        path = tmp_path / name
        path.write_text("\n".join(lines), encoding="utf-8")
        return str(path)

    return write


@pytest.fixture
def small_within_config(tmp_path):
    """Raw configuration of a fast within-model run."""
    return {
        "experiment": {
            "kind": "synthetic-within",
            "dimensions": "2",
            "trials": "2",
            "budget": "12",
            "seed": "7",
            "optimizers": "gibo, ars",
            "out": str(tmp_path / "results"),
        },
        "synthetic": {"support_points": "64", "global_max_iterations": "200"},
        "gibo": {"restarts": "2", "raw_samples": "16"},
    }
