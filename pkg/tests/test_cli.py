import csv
import json
import math
import os

import pytest

from shearlattice import Params
from shearlattice.cli import (
    CASCADE_COLUMNS,
    SWEEP_COLUMNS,
    TRAJECTORY_COLUMNS,
    main,
    parse_config,
    run,
    sweep,
    write_csv,
)
from shearlattice.errors import ConfigError


def write_cfg(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(path)


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


# --- parsing ----------------------------------------------------------------------


def test_minimal_cascade_config_defaults():
    cfg = parse_config('{"command": "cascade", "c": 0.03, "L": 300, "J": 6}')
    assert cfg.params == Params(c=0.03, L=300.0)
    assert cfg.options["J"] == 6 and cfg.options["min_ratio"] == 5
    assert cfg.integrator["rel_tol"] == 1e-10
    assert cfg.integrator["window_radius"] == 16
    assert cfg.init["kind"] == "delta"


def test_consistent_k_and_L():
    cfg = parse_config('{"command": "classify", "c": 0.03, "k": "1/300", "L": 300}')
    assert cfg.params.k == pytest.approx(1 / 300)


def test_inconsistent_k_and_L():
    with pytest.raises(ConfigError, match="kL != 1"):
        parse_config('{"command": "classify", "c": 0.03, "k": 1, "L": 300}')


@pytest.mark.parametrize(
    "text",
    [
        '{"command": "cascade", "c": 0.03, "L": 300,}',
        '[1, 2]',
        '{"c": 0.03, "L": 300}',
        '{"command": "fly", "c": 0.03, "L": 300}',
        '{"command": "cascade", "c": 0.03, "L": 300, "speed": 3}',
        '{"command": "cascade", "c": 0.03, "L": 300, "integrator": {"rel_tol": -1}}',
        '{"command": "cascade", "c": 0.03, "L": 300, "J": 0}',
        '{"command": "pathsum", "c": 0.03, "k": 1, "t0": 2, "t1": 1}',
        '{"command": "sweep", "grid": {"c": [0.01]}}',
        '{"command": "cascade", "c": 0.6, "L": 300}',
    ],
)
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_malformed_json_position():
    with pytest.raises(ConfigError, match="line 2"):
        parse_config('{"command": "cascade",\n "c": }')


def test_subcommand_mismatch():
    with pytest.raises(ConfigError):
        parse_config('{"command": "cascade", "c": 0.03, "L": 300}', command="simulate")


def test_random_init_gets_seed():
    cfg = parse_config('{"command": "lyapunov", "c": 0.03, "k": 1}')
    assert cfg.seed == 0 and cfg.init["kind"] == "random"


# --- CSV ----------------------------------------------------------------------------


def test_write_csv_empty_header_only(tmp_path):
    path = tmp_path / "e.csv"
    write_csv([], str(path), ["a", "b"])
    assert path.read_text() == "a,b\n"
    with pytest.raises(ValueError):
        write_csv([], str(tmp_path / "x.csv"))


def test_write_csv_round_trip(tmp_path):
    path = tmp_path / "r.csv"
    write_csv([{"x": 0.1, "y": math.nan, "z": 3}], str(path))
    row = read_csv(path)[0]
    assert float(row["x"]) == 0.1
    assert row["y"] == "" and row["z"] == "3"


def test_write_csv_io_error(tmp_path):
    with pytest.raises(OSError):
        write_csv([{"a": 1}], str(tmp_path / "missing" / "dir" / "f.csv"))


# --- commands ------------------------------------------------------------------


def test_classify_unstable(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"command": "classify", "c": 0.03, "L": 300})
    out = tmp_path / "out"
    assert main(["classify", "--config", cfg, "--out", str(out)]) == 0
    report = (out / "classify_report.txt").read_text()
    assert "label: UNSTABLE" in report
    assert "label: UNSTABLE" in capsys.readouterr().out


def test_cascade_command(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "cascade", "c": 0.03, "L": 300, "J": 6})
    assert main(["cascade", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "cascade.csv")
    assert list(rows[0]) == CASCADE_COLUMNS
    ratios = [float(r["ratio"]) for r in rows if r["ratio"]]
    assert len(ratios) == 6 and min(ratios) >= 5
    assert all(r["dominance"] == "1" for r in rows)


def test_simulate_command(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "simulate", "c": 0.03, "k": 1, "tau_end": 5, "sample_step": 1})
    assert main(["simulate", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = read_csv(tmp_path / "trajectory.csv")
    assert list(rows[0]) == TRAJECTORY_COLUMNS
    assert sorted({float(r["tau"]) for r in rows}) == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
    report = (tmp_path / "simulate_report.txt").read_text()
    assert "PASS stability_envelope" in report and "status: PASS" in report


def test_lyapunov_and_pathsum_commands(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "lyapunov", "c": 0.03, "k": 1, "tau_end": 5, "seed": 3})
    assert main(["lyapunov", "--config", cfg, "--out", str(tmp_path)]) == 0
    cfg = write_cfg(tmp_path, {"command": "pathsum", "c": 0.03, "k": 1, "seed": 3}, "p.json")
    assert main(["pathsum", "--config", cfg, "--out", str(tmp_path)]) == 0
    assert "PASS tail_bound" in (tmp_path / "pathsum_report.txt").read_text()


def test_lyapunov_outside_regime_is_error(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "lyapunov", "c": 0.03, "L": 300, "tau_end": 1})
    assert main(["lyapunov", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "status: ERROR" in (tmp_path / "lyapunov_report.txt").read_text()


def test_failed_check_exit_one(tmp_path):
    # an unreachable ratio threshold makes the property check fail
    cfg = write_cfg(tmp_path, {"command": "cascade", "c": 0.03, "L": 300, "J": 2, "min_ratio": 100})
    assert main(["cascade", "--config", cfg, "--out", str(tmp_path)]) == 1
    assert "status: FAIL" in (tmp_path / "cascade_report.txt").read_text()


def test_malformed_config_exit_two(tmp_path, capsys):
    cfg = write_cfg(tmp_path, '{"command": "cascade", "c": 0.03,')
    assert main(["cascade", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "malformed" in capsys.readouterr().err
    assert main(["cascade", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path)]) == 2


def test_window_limit_exit_two(tmp_path):
    cfg = write_cfg(
        tmp_path,
        {"command": "cascade", "c": 0.03, "L": 300, "J": 6, "integrator": {"max_modes": 40}},
    )
    assert main(["cascade", "--config", cfg, "--out", str(tmp_path)]) == 2
    assert "WindowLimitError" in (tmp_path / "cascade_report.txt").read_text()


def test_seed_override(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "pathsum", "c": 0.03, "k": 1, "seed": 3, "J": 2})
    main(["pathsum", "--config", cfg, "--out", str(tmp_path / "a"), "--seed", "8"])
    assert '"seed": 8' in (tmp_path / "a" / "pathsum_report.txt").read_text()


# --- sweep -----------------------------------------------------------------------

GRID = {"c": [0.01, 0.03], "L": [1, 300]}


def test_sweep_rows():
    rows = sweep({"c": [0.01, 0.03], "L": [1.0, 300.0]}, J=6)
    assert [(r["c"], r["L"]) for r in rows] == [(0.01, 1.0), (0.01, 300.0), (0.03, 1.0), (0.03, 300.0)]
    labels = {(r["c"], r["L"]): r["label"] for r in rows}
    assert labels[(0.03, 300.0)] == "UNSTABLE"
    assert labels[(0.03, 1.0)] == "PATHSUM_STABLE"
    assert labels[(0.01, 1.0)] == "PATHSUM_STABLE"
    assert labels[(0.01, 300.0)] == "INDETERMINATE"
    assert all(r["status"] == "ok" for r in rows)


def test_sweep_error_rows_kept():
    rows = sweep({"c": [0.03, 0.7], "L": [1.0]}, J=2)
    assert rows[0]["status"] == "ok"
    assert rows[1]["status"] == "error" and "c must lie" in rows[1]["message"]


def test_sweep_command_deterministic_and_parallel(tmp_path):
    cfg = write_cfg(tmp_path, {"command": "sweep", "grid": GRID})
    for name, workers in (("a", "1"), ("b", "1"), ("c", "2")):
        assert main(["sweep", "--config", cfg, "--out", str(tmp_path / name), "--workers", workers]) == 0
    a = (tmp_path / "a" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "b" / "sweep.csv").read_bytes()
    assert a == (tmp_path / "c" / "sweep.csv").read_bytes()
    rows = read_csv(tmp_path / "a" / "sweep.csv")
    assert list(rows[0]) == SWEEP_COLUMNS and len(rows) == 4


def test_run_outputs_are_byte_identical(tmp_path):
    cfg = parse_config('{"command": "lyapunov", "c": 0.03, "k": 1, "tau_end": 3, "seed": 5}')
    run(cfg, str(tmp_path / "x"))
    run(cfg, str(tmp_path / "y"))
    for name in ("lyapunov.csv", "lyapunov_report.txt"):
        assert (tmp_path / "x" / name).read_bytes() == (tmp_path / "y" / name).read_bytes()
    assert not [f for f in os.listdir(tmp_path / "x") if f.startswith(".") or f.endswith(".tmp")]
