import json

import pytest

from parksim.cli import EXIT_CONFIG, EXIT_OK, main

SCENARIO = """
schema_version: 1
scenario:
  population: 10
  bad_fraction: 0.2
  parks_per_vehicle: 4
  off_system_stops: 1
  entry_spread: 60
  runs: 2
  seed: 5
"""

EXPERIMENT = """
schema_version: 1
experiment:
  kind: population_sweep
  population_values: [10, 12]
  strategies:
    - {kind: static, size: 0}
    - {kind: dynamic}
  base:
    population: 10
    parks_per_vehicle: 4
    off_system_stops: 1
    entry_spread: 60
    runs: 2
    seed: 5
"""


@pytest.fixture
def scenario_file(tmp_path):
    path = tmp_path / "scenario.yaml"
    path.write_text(SCENARIO, encoding="utf-8")
    return path


@pytest.fixture
def experiment_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(EXPERIMENT, encoding="utf-8")
    return path


def test_run_writes_outputs(scenario_file, tmp_path):
    out = tmp_path / "out"
    rc = main(["run", "--spec", str(scenario_file), "--out", str(out)])
    assert rc == EXIT_OK
    assert (out / "runs.csv").exists()
    assert (out / "summary.csv").exists()
    meta = json.loads((out / "run_metadata.json").read_text())
    assert meta["seed"] == 5
    assert "generator" in meta
    lines = (out / "runs.csv").read_text().splitlines()
    assert len(lines) == 1 + 2  # header + one row per run


def test_run_event_logs_opt_in(scenario_file, tmp_path):
    out = tmp_path / "out"
    rc = main(["run", "--spec", str(scenario_file), "--out", str(out),
               "--log-events"])
    assert rc == EXIT_OK
    log = out / "events_run0.jsonl"
    assert log.exists()
    first = json.loads(log.read_text().splitlines()[0])
    assert set(first) == {"time", "kind", "vehicle", "area", "outcome"}


def test_run_seed_override_changes_results(scenario_file, tmp_path):
    main(["run", "--spec", str(scenario_file), "--out", str(tmp_path / "a")])
    main(["run", "--spec", str(scenario_file), "--out", str(tmp_path / "b"),
          "--seed", "99"])
    meta_a = json.loads((tmp_path / "a" / "run_metadata.json").read_text())
    meta_b = json.loads((tmp_path / "b" / "run_metadata.json").read_text())
    assert meta_a["seed"] == 5
    assert meta_b["seed"] == 99


def test_sweep_outputs_and_determinism(experiment_file, tmp_path):
    rc1 = main(["sweep", "--spec", str(experiment_file), "--out", str(tmp_path / "s1")])
    rc2 = main(["sweep", "--spec", str(experiment_file), "--out", str(tmp_path / "s2")])
    assert rc1 == rc2 == EXIT_OK
    for name in ("results.csv", "series_no_park.csv", "series_no_reservation.csv",
                 "runs.csv"):
        a = (tmp_path / "s1" / name).read_bytes()
        b = (tmp_path / "s2" / name).read_bytes()
        assert a == b, name


def test_output_dir_from_environment(scenario_file, tmp_path, monkeypatch):
    monkeypatch.setenv("PARKSIM_OUT", str(tmp_path / "envout"))
    rc = main(["run", "--spec", str(scenario_file)])
    assert rc == EXIT_OK
    assert (tmp_path / "envout" / "summary.csv").exists()


def test_validate_accepts_both_kinds(scenario_file, experiment_file):
    assert main(["validate", "--spec", str(scenario_file)]) == EXIT_OK
    assert main(["validate", "--spec", str(experiment_file)]) == EXIT_OK


def test_validate_rejects_bad_file(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("schema_version: 1\nscenario: {poppulation: 1}\n")
    assert main(["validate", "--spec", str(bad)]) == EXIT_CONFIG


def test_run_with_bad_spec_exits_config(tmp_path):
    bad = tmp_path / "bad.yaml"
    bad.write_text("schema_version: 1\nscenario: {runs: 0}\n")
    assert main(["run", "--spec", str(bad), "--out", str(tmp_path / "x")]) == EXIT_CONFIG
