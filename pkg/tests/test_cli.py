import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drwkit.cli import config as cfgmod
from drwkit.cli.main import cmd_verify, main, tasks_for
from drwkit.cli.report import RunReport
from drwkit.cli.suites import task_seed, witt_suite
from drwkit.cli.witt_expr import evaluate_text, parse
from drwkit.errors import ConfigParse, IOFailure, ParseError

SMALL = {"primes": [2], "levels": {"2": [1, 2]}, "shapes": [[1, 1]], "box": 1, "seed": 7,
         "suites": ["basis", "kernel-lemmas", "compare"]}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# -- config --------------------------------------------------------------------------------

def test_default_config_file_matches_builtin():
    from pathlib import Path

    shipped = cfgmod.load(Path(__file__).parent.parent / "configs" / "default.json")
    assert shipped == cfgmod.default()
    assert shipped.levels_for(2) == (1, 2, 3) and shipped.levels_for(3) == (1, 2)


def test_config_validation():
    with pytest.raises(ConfigParse):
        cfgmod.from_dict({**SMALL, "suites": []})
    with pytest.raises(ConfigParse):
        cfgmod.from_dict({**SMALL, "suites": ["nope"]})
    with pytest.raises(ConfigParse):
        cfgmod.from_dict({**SMALL, "primes": [4]})
    with pytest.raises(ConfigParse):
        cfgmod.from_dict({**SMALL, "box": 0})
    with pytest.raises(ConfigParse):
        cfgmod.from_dict({**SMALL, "colour": "red"})
    with pytest.raises(ConfigParse):
        cfgmod.parse_shape("1,2")


def test_config_load_errors(tmp_path):
    with pytest.raises(IOFailure):
        cfgmod.load(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigParse):
        cfgmod.load(bad)


def test_overrides_keep_known_levels():
    cfg = cfgmod.with_overrides(cfgmod.default(), primes=[3])
    assert cfg.primes == (3,) and cfg.levels_for(3) == (1, 2)
    cfg = cfgmod.with_overrides(cfgmod.default(), primes=[2], levels=[2])
    assert cfg.levels_for(2) == (2,)


# -- verify -------------------------------------------------------------------------------

def test_verify_small_grid_passes_and_is_deterministic(tmp_path):
    cfg = cfgmod.from_dict({**SMALL, "output": str(tmp_path / "r.json")})
    a, b = cmd_verify(cfg), cmd_verify(cfg)
    assert a.passed
    assert a.digest == b.digest
    parallel = cmd_verify(cfgmod.with_overrides(cfg, jobs=2))
    assert parallel.digest == a.digest


def test_task_order_is_fixed():
    cfg = cfgmod.from_dict(SMALL)
    assert tasks_for(cfg) == tasks_for(cfgmod.from_dict(SMALL))
    assert task_seed(1, "a") == task_seed(1, "a") != task_seed(2, "a")


def test_report_round_trip(tmp_path):
    cfg = cfgmod.from_dict(SMALL)
    report = cmd_verify(cfg)
    path = tmp_path / "r.json"
    report.write(path, "json")
    again = RunReport.from_json(json.loads(path.read_text()))
    assert again.to_json()["suites"] == report.to_json()["suites"]
    assert again.digest == report.digest
    tampered = json.loads(path.read_text())
    tampered["suites"][0]["cases"][0]["status"] = "fail"
    with pytest.raises(ValueError):
        RunReport.from_json(tampered)


def test_report_schema_keys(tmp_path):
    path = tmp_path / "r.json"
    code = main(["verify", "--p", "2", "--n", "2", "--shape", "1,1", "--box", "2",
                 "--suite", "kernel-lemmas", "--out", str(path)])
    assert code == 0
    data = json.loads(path.read_text())
    assert {"config", "suites", "digest"} <= set(data)
    (suite,) = data["suites"]
    assert suite["name"] == "kernel-lemmas" and suite["cases"]
    for case in suite["cases"]:
        assert set(case) == {"params", "status", "lhs", "rhs", "witness"}
        assert case["status"] == "pass"
        assert "k=" in case["params"]["check"] or case["params"]["check"].startswith("p-Fil")


def test_csv_output(tmp_path):
    path = tmp_path / "r.csv"
    code = main(
        ["verify", "--p", "2", "--n", "1", "--shape", "1,1", "--box", "1", "--suite", "basis",
         "--format", "csv", "--out", str(path)]
    )
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("suite,params,status")
    assert lines[-1].startswith("#digest,")


def test_exit_codes(tmp_path, capsys):
    code, _, err = run(["verify", "--suite", ","], capsys)
    assert code == 2 and "suite" in err
    code, _, _ = run(["verify", "--config", str(tmp_path / "nope.json")], capsys)
    assert code == 2
    code, _, _ = run(["verify", "--p", "2", "--n", "1", "--shape", "1,1", "--box", "1", "--suite", "basis",
                      "--out", str(tmp_path / "no" / "dir" / "r.json")], capsys)
    assert code == 2


def test_failures_give_exit_one(tmp_path, monkeypatch, capsys):
    import importlib

    main_mod = importlib.import_module("drwkit.cli.main")

    def failing(task):
        return [{"name": task[0], "params": {}, "checks": [
            {"name": "forced", "status": "fail", "lhs": 1, "rhs": 2, "witness": None}]}]

    monkeypatch.setattr(main_mod, "run_task", failing)
    code, out, _ = run(["verify", "--p", "2", "--n", "1", "--shape", "1,1", "--box", "1",
                        "--suite", "basis", "--out", str(tmp_path / "r.json")], capsys)
    assert code == 1
    assert json.loads((tmp_path / "r.json").read_text())["status"] == "fail"


def test_witt_suite_finds_no_mismatch():
    reports = witt_suite(3, 2, 1, pairs=50)
    assert all(r.passed for r in reports)


# -- cohomology and witt subcommands -------------------------------------------------------

def test_cohomology_table(capsys):
    code, out, _ = run(["cohomology", "-p", "2", "-n", "2", "--shape", "2,1", "--weight", "2,2"], capsys)
    assert code == 0
    rows = [line.split() for line in out.splitlines()[2:]]
    assert rows == [["0", "Z/2", "Z/2", "Z/2"], ["1", "(Z/2)^2", "(Z/2)^2", "(Z/2)^2"], ["2", "Z/2", "Z/2", "Z/2"]]


def test_cohomology_unit_entry_and_box(capsys):
    code, out, _ = run(["cohomology", "-p", "3", "-n", "1", "--shape", "1,1", "--weight", "0,1", "--format", "json"], capsys)
    assert code == 0
    (table,) = json.loads(out)
    assert all(row[c] == "0" for row in table for c in ("symbolic", "koszul", "predicted"))
    code, out, _ = run(["cohomology", "-p", "2", "-n", "2", "--shape", "1,1", "--box", "1", "--format", "json"], capsys)
    tables = json.loads(out)
    assert len(tables) == len({t[0]["weight"] for t in tables}) > 1


def test_witt_examples(capsys):
    assert run(["witt", "-p", "2", "-n", "2", "[1]+[1]"], capsys)[1].splitlines()[0] == "(0, 1)"
    out = run(["witt", "-p", "3", "-n", "1", "F(V([1]))"], capsys)[1]
    assert out.splitlines() == ["(0)", "expansion: 0"]
    out = run(["witt", "-p", "2", "-n", "2", "V([t0])"], capsys)[1]
    assert out.splitlines()[1] == "expansion: (mu=1, eta=1, k=(1/2, 0))"


def test_witt_parse_error_position(capsys):
    code, _, err = run(["witt", "-p", "2", "-n", "2", "[1]+*"], capsys)
    assert code == 2 and "position 4" in err
    with pytest.raises(ParseError) as info:
        parse("V([1]")
    assert info.value.position == 5


def test_witt_grammar():
    a = evaluate_text("2*[t1] + [1]", 2, 2)
    b = evaluate_text("[t1] + [t1] + 1", 2, 2)
    assert a == b
    assert evaluate_text("-(1) + 1", 3, 2).is_zero()
    assert evaluate_text("F([t_1])", 3, 1) == evaluate_text("[t1]*[t1]*[t1]", 3, 1)
    assert evaluate_text("R(V(1))", 2, 2) == evaluate_text("V(1)", 2, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 30), st.integers(0, 30))
def test_witt_integers_add(a, b):
    assert evaluate_text(f"{a} + {b}", 2, 3) == evaluate_text(str(a + b), 2, 3)
    assert evaluate_text(f"{a} * {b}", 3, 2) == evaluate_text(str(a * b), 3, 2)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "drwkit.cli", "witt", "-p", "2", "-n", "2", "[1]+[1]"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("(0, 1)")
