"""Experiment runner and CLI: config parsing, output format,
determinism, and exit codes."""

import json
import math

import numpy as np
import pytest

from latticedecay import cli, experiments
from latticedecay.experiments import (ConfigError, ExperimentConfig,
                                      ToleranceError, config_from_strings,
                                      load_config_file, load_profile_table,
                                      write_table)
from latticedecay.propagator import IntegrationError


def test_config_defaults_and_validation():
    cfg = ExperimentConfig()
    assert cfg.delta == 0.3 and cfg.profile == "sudden"
    with pytest.raises(ConfigError):
        ExperimentConfig(delta=1.2)
    with pytest.raises(ConfigError):
        ExperimentConfig(profile="linear")          # missing rise time
    with pytest.raises(ConfigError):
        ExperimentConfig(profile="custom")          # missing path
    with pytest.raises(ConfigError):
        ExperimentConfig(format="xml")
    with pytest.raises(ConfigError):
        ExperimentConfig(tolerance_profile="loose")


def test_config_file_roundtrip(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# comment\n"
        "delta = 0.25\n"
        "profile = linear\n"
        "rise_time = 1.5   # trailing comment\n"
        "t_max = 10\n")
    cfg = load_config_file(path)
    assert cfg.delta == 0.25
    assert cfg.rise_time == 1.5
    # flag overrides win
    cfg2 = load_config_file(path, {"delta": "0.4"})
    assert cfg2.delta == 0.4


def test_unknown_config_key_is_error(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("delta = 0.3\nstepsize = 0.1\n")
    with pytest.raises(ConfigError, match="unknown key"):
        load_config_file(path)
    with pytest.raises(ConfigError):
        config_from_strings({"delta": "0.3", "bogus": "1"})


def test_malformed_config_line(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("delta 0.3\n")
    with pytest.raises(ConfigError, match="key = value"):
        load_config_file(path)


def test_profile_table_loading(tmp_path):
    path = tmp_path / "ramp.txt"
    t = np.linspace(0.0, 1.0, 51)
    v = 0.3 * np.sin(0.5 * math.pi * t) ** 2
    np.savetxt(path, np.column_stack([t, v]))
    prof = load_profile_table(path, 0.3)
    assert prof.rise_time == 1.0
    assert prof.average == pytest.approx(0.15, abs=1e-3)


def test_profile_table_must_end_at_delta(tmp_path):
    path = tmp_path / "ramp.txt"
    np.savetxt(path, [[0.0, 0.0], [1.0, 0.2]])
    with pytest.raises(ConfigError, match="end at the coupling"):
        load_profile_table(path, 0.3)


def test_csv_format_fifteen_digits(tmp_path):
    out = write_table(tmp_path / "tab", ["a", "b"],
                      [[1.0 / 3.0, 2], [1e-17, 3]], "csv")
    lines = out.read_text().splitlines()
    assert lines[0] == "a,b"
    assert lines[1].split(",")[0] == "0.333333333333333"
    assert len(lines) == 3


def test_json_format(tmp_path):
    out = write_table(tmp_path / "tab", ["a"], [[0.5], [1.5]], "json")
    doc = json.loads(out.read_text())
    assert doc["columns"] == ["a"]
    assert doc["rows"] == [[0.5], [1.5]]


def test_propagate_run_deterministic(tmp_path):
    cfg = ExperimentConfig(t_max=5.0, out=str(tmp_path / "a"))
    first = experiments.run_propagate(cfg).files[0].read_bytes()
    cfg2 = ExperimentConfig(t_max=5.0, out=str(tmp_path / "b"))
    second = experiments.run_propagate(cfg2).files[0].read_bytes()
    assert first == second


def test_cli_propagate_and_exit_codes(tmp_path):
    rc = cli.main(["propagate", "--delta", "0.3", "--t-max", "5",
                   "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "propagate.csv").exists()
    # config errors -> 1
    assert cli.main(["propagate", "--delta", "2.0",
                     "--out", str(tmp_path)]) == 1
    assert cli.main(["propagate", "--profile", "triangle",
                     "--out", str(tmp_path)]) == 1


def test_cli_custom_profile(tmp_path):
    table = tmp_path / "ramp.txt"
    t = np.linspace(0.0, 1.0, 51)
    np.savetxt(table, np.column_stack([t, 0.3 * t]))
    rc = cli.main(["propagate", "--delta", "0.3",
                   "--profile", f"custom:{table}",
                   "--t-max", "4", "--out", str(tmp_path)])
    assert rc == 0


def test_cli_identities(tmp_path):
    rc = cli.main(["identities", "--out", str(tmp_path),
                   "--format", "json"])
    assert rc == 0
    assert (tmp_path / "identities.json").exists()


def test_cli_diagrams(tmp_path):
    rc = cli.main(["diagrams", "--out", str(tmp_path)])
    assert rc == 0
    header, first, *_ = (tmp_path / "diagrams.csv").read_text().splitlines()
    assert header == "lines,site,formula,bruteforce"
    assert first == "0,1,1,1"


def test_cli_sweep(tmp_path):
    rc = cli.main(["sweep", "--rise-times", "0.5,1.0",
                   "--t-max", "8", "--out", str(tmp_path)])
    assert rc == 0
    assert (tmp_path / "sweep_T0.5.csv").exists()
    assert (tmp_path / "sweep_T1.0.csv").exists()
    assert (tmp_path / "sweep_summary.csv").exists()


def test_cli_sweep_bad_list(tmp_path):
    assert cli.main(["sweep", "--rise-times", "0.5,abc",
                     "--out", str(tmp_path)]) == 1


def test_cli_tolerance_exceeded_exit_code(tmp_path, monkeypatch):
    monkeypatch.setitem(experiments.TOLERANCES["fig8"], "strict", 1e-9)
    rc = cli.main(["reproduce", "fig8", "--out", str(tmp_path),
                   "--tolerance-profile", "strict"])
    assert rc == 3


def test_cli_numeric_failure_exit_code(tmp_path, monkeypatch):
    def boom(config):
        raise IntegrationError("norm drift")
    monkeypatch.setattr(experiments, "run_propagate", boom)
    assert cli.main(["propagate", "--out", str(tmp_path)]) == 2


def test_regimes_metadata(tmp_path):
    rc = cli.main(["regimes", "--delta", "0.3", "--profile", "linear",
                   "--rise-time", "1", "--t-max", "15",
                   "--out", str(tmp_path)])
    assert rc == 0
    meta = json.loads((tmp_path / "regimes.meta.json").read_text())
    assert meta["phase"] == pytest.approx(1.0, abs=0.02)
    assert meta["gamma"] == pytest.approx(0.18869127, abs=1e-6)


def test_analytic_cross_check(tmp_path):
    rc = cli.main(["analytic", "--delta", "0.3", "--t-max", "10",
                   "--out", str(tmp_path)])
    assert rc == 0
    lines = (tmp_path / "analytic.csv").read_text().splitlines()
    assert lines[0] == "t,p1_series,p1_tdse"
    last = [float(x) for x in lines[-1].split(",")]
    assert last[1] == pytest.approx(last[2], abs=1e-7)
