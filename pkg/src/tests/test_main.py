# src/tests/test_main.py

import json
import os

import pytest
from click.testing import CliRunner
from unittest.mock import patch

from main import cli, experiment_name
from src.config.constants import EXIT_CONFIG_ERROR, EXIT_OK, EXIT_PARTIAL_FAILURE
from src.optimizers.ars import ARSOptimizer
from src.utils.exceptions import SolverError


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def config_path(write_ini, small_within_config):
    small_within_config["experiment"]["trials"] = "1"
    return write_ini(small_within_config, name="small.ini")


def _out(config_path):
    return os.path.join(os.path.dirname(config_path), "results")


def test_experiment_name_is_deterministic():
    """Test the experiment id is the config stem plus the seed."""
    assert experiment_name("experiments/within_model.ini", 3) == "within_model-seed3"


def test_run_writes_rows_and_summary(runner, config_path):
    """Test a successful run exits 0 and writes rows.csv and summary.json."""
    result = runner.invoke(cli, ["run", config_path, "--quiet"])
    assert result.exit_code == EXIT_OK, result.output
    out = _out(config_path)
    with open(os.path.join(out, "rows.csv"), encoding="utf-8") as f:
        assert len(f.read().splitlines()) == 1 + 24
    with open(os.path.join(out, "summary.json"), encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["experiment_id"] == "small-seed7"
    assert summary["runs"] == 2
    assert summary["failures"] == []
    assert {g["optimizer"] for g in summary["groups"]} == {"gibo", "ars"}


def test_run_options_override_file(runner, config_path, tmp_path):
    """Test --seed and --out take precedence over the configuration file."""
    out = tmp_path / "elsewhere"
    result = runner.invoke(cli, ["run", config_path, "--seed", "11", "--out", str(out), "--quiet"])
    assert result.exit_code == EXIT_OK, result.output
    with open(out / "summary.json", encoding="utf-8") as f:
        assert json.load(f)["experiment_id"] == "small-seed11"


def test_run_rows_are_byte_identical(runner, config_path, tmp_path):
    """Test two runs with the same seed write identical rows files."""
    contents = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert runner.invoke(cli, ["run", config_path, "--out", str(out), "--quiet"]).exit_code == EXIT_OK
        contents.append((out / "rows.csv").read_bytes())
    assert contents[0] == contents[1]


def test_run_config_error_exits_2(runner, write_ini, small_within_config):
    """Test an invalid configuration exits with code 2 before any trial runs."""
    small_within_config["experiment"]["budget"] = "2"
    path = write_ini(small_within_config, name="bad.ini")
    result = runner.invoke(cli, ["run", path, "--quiet"])
    assert result.exit_code == EXIT_CONFIG_ERROR
    assert "experiment.budget" in result.output
    assert not os.path.exists(os.path.join(_out(path), "rows.csv"))


def test_run_missing_config_exits_2(runner, tmp_path):
    """Test a missing configuration file exits with code 2."""
    result = runner.invoke(cli, ["run", str(tmp_path / "missing.ini")])
    assert result.exit_code == EXIT_CONFIG_ERROR
    assert "File not found" in result.output


def test_run_partial_failure_exits_3(runner, config_path):
    """Test failed runs are written to the summary and exit with code 3."""
    with patch.object(ARSOptimizer, "run", side_effect=SolverError("boom")):
        result = runner.invoke(cli, ["run", config_path, "--quiet"])
    assert result.exit_code == EXIT_PARTIAL_FAILURE
    with open(os.path.join(_out(config_path), "summary.json"), encoding="utf-8") as f:
        summary = json.load(f)
    assert summary["failures"][0]["error"] == "SolverError: boom"
    assert [g["optimizer"] for g in summary["groups"]] == ["gibo"]


def test_export_writes_curves(runner, config_path, tmp_path):
    """Test export turns a rows file into curve aggregates."""
    assert runner.invoke(cli, ["run", config_path, "--quiet"]).exit_code == EXIT_OK
    curves = tmp_path / "curves.csv"
    result = runner.invoke(cli, ["export", os.path.join(_out(config_path), "rows.csv"), "--out", str(curves)])
    assert result.exit_code == EXIT_OK, result.output
    assert len(curves.read_text(encoding="utf-8").splitlines()) == 1 + 24


def test_export_rejects_bad_input(runner, tmp_path):
    """Test export exits 2 on a missing file, a malformed file and an invalid band."""
    missing = runner.invoke(cli, ["export", str(tmp_path / "none.csv"), "--out", str(tmp_path / "c.csv")])
    assert missing.exit_code == EXIT_CONFIG_ERROR

    broken = tmp_path / "broken.csv"
    broken.write_text("not,a,rows,file\n", encoding="utf-8")
    parsed = runner.invoke(cli, ["export", str(broken), "--out", str(tmp_path / "c.csv")])
    assert parsed.exit_code == EXIT_CONFIG_ERROR

    band = runner.invoke(cli, ["export", str(broken), "--out", str(tmp_path / "c.csv"), "--lower", "90", "--upper", "10"])
    assert band.exit_code == EXIT_CONFIG_ERROR
