"""Command-line interface: subcommands, exit codes, batch reports."""

import json

import numpy as np
import pytest

from rigidform import builtin, save_scenario
from rigidform.cli import EXIT_CLEAN, EXIT_ERROR, EXIT_VIOLATION, main, run_batch


def test_list_builtins(capsys):
    assert main(["list-builtins"]) == EXIT_CLEAN
    out = capsys.readouterr().out
    for name in ("tetra_acquisition", "pentagon_case1", "pentagon_case2",
                 "pentagon_case3", "pentagon_maneuver"):
        assert name in out


def test_validate_builtin(capsys):
    assert main(["validate", "tetra_acquisition"]) == EXIT_CLEAN
    out = capsys.readouterr().out
    assert "valid" in out
    assert "edge (1,2)" in out


def test_validate_missing_file_exits_2(capsys):
    assert main(["validate", "no_such_scenario.json"]) == EXIT_ERROR
    assert "error:" in capsys.readouterr().err


def test_validate_bad_json_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["validate", str(bad)]) == EXIT_ERROR
    assert "bad.json" in capsys.readouterr().err


def test_run_writes_csv_and_exits_clean(tmp_path, capsys):
    code = main(["run", "tetra_acquisition", "--duration", "0.05",
                 "--out", str(tmp_path)])
    assert code == EXIT_CLEAN
    csv_path = tmp_path / "tetra_acquisition.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.startswith("t,q[1].x")
    out = capsys.readouterr().out
    assert "tetra_acquisition" in out and "ok" in out


def test_run_scenario_file(tmp_path):
    path = tmp_path / "custom.json"
    save_scenario(builtin("tetra_acquisition").with_overrides(duration=0.05), path)
    assert main(["run", str(path), "--out", str(tmp_path / "out")]) == EXIT_CLEAN
    assert (tmp_path / "out" / "tetra_acquisition.csv").exists()


def test_run_determinism_byte_identical(tmp_path):
    codes = [main(["run", "pentagon_case1", "--dt", "1e-3", "--duration", "0.2",
                   "--variant", "robust_conventional", "--out", str(tmp_path / sub)])
             for sub in ("a", "b")]
    assert codes[0] == codes[1]
    a = (tmp_path / "a" / "pentagon_case1.csv").read_bytes()
    b = (tmp_path / "b" / "pentagon_case1.csv").read_bytes()
    assert a == b


def test_violation_run_exits_1(tmp_path, capsys):
    # the baseline law ignores the funnel, so a scaled-up disturbance trips it
    code = main(["run", "pentagon_case3", "--variant", "robust_conventional",
                 "--dt", "1e-3", "--duration", "4.0", "--out", str(tmp_path)])
    assert code == EXIT_VIOLATION
    out = capsys.readouterr().out
    assert "ppb" in out


def test_halted_run_exits_1(tmp_path, capsys):
    # deliberately unstable step: the funnel run halts with a diagnostic
    code = main(["run", "pentagon_case1", "--dt", "1e-3", "--out", str(tmp_path)])
    assert code == EXIT_VIOLATION
    out = capsys.readouterr().out
    assert "halted" in out
    assert "modulated error" in out


def test_batch_summary(tmp_path, capsys):
    sc_file = tmp_path / "short.json"
    save_scenario(builtin("tetra_acquisition").with_overrides(duration=0.05), sc_file)
    code = main(["batch", str(sc_file), "pentagon_case1",
                 "--dt", "1e-3", "--duration", "0.05", "--out", str(tmp_path / "out")])
    assert code == EXIT_CLEAN
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert {row["name"] for row in summary["outcomes"]} == {"tetra_acquisition", "pentagon_case1"}
    for row in summary["outcomes"]:
        assert row["status"] == "ok"
        assert (tmp_path / "out" / f"{row['name']}.csv").exists()
    table = capsys.readouterr().out
    assert "pentagon_case1" in table


def test_batch_continues_after_bad_scenario(tmp_path):
    class Broken:
        name = "bad"

        def prepare(self):
            from rigidform.errors import ScenarioError
            raise ScenarioError("agents: missing required field")

    good = builtin("tetra_acquisition").with_overrides(duration=0.05)
    outcomes, code = run_batch([("bad", Broken()), ("tetra_acquisition", good)],
                               tmp_path / "out")
    assert code == EXIT_ERROR
    by_name = {o.name: o for o in outcomes}
    assert by_name["bad"].status == "error"
    assert "missing required field" in by_name["bad"].message
    assert by_name["tetra_acquisition"].status == "ok"


def test_maneuver_summary_reports_centroid_tracking(tmp_path):
    _, code = run_batch(
        [("pentagon_maneuver", builtin("pentagon_maneuver").with_overrides(duration=0.5))],
        tmp_path)
    assert code == EXIT_CLEAN
    summary = json.loads((tmp_path / "summary.json").read_text())
    row = summary["outcomes"][0]
    assert row["max_centroid_tracking_error"] is not None
    assert row["max_centroid_tracking_error"] < 1e-6
    # non-maneuvering scenarios carry no tracking figure
    _, _ = run_batch(
        [("tetra_acquisition", builtin("tetra_acquisition").with_overrides(duration=0.05))],
        tmp_path / "t")
    summary2 = json.loads((tmp_path / "t" / "summary.json").read_text())
    assert summary2["outcomes"][0]["max_centroid_tracking_error"] is None


def test_bench_runs(capsys):
    assert main(["bench", "tetra_acquisition", "--repeat", "1",
                 "--duration", "0.05"]) == EXIT_CLEAN
    out = capsys.readouterr().out
    assert "tetra_acquisition" in out
    assert "active backend" in out
