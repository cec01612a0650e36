import json
import subprocess
import sys

import pytest

from ultrawelch import __version__
from ultrawelch.cli import fixtures_dir, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_fixture_by_name(capsys):
    code, out, _ = run(capsys, "check", "--config", "tight-2-3")
    assert code == 0
    data = json.loads(out)
    (report,) = data["reports"]
    assert report["verdict"] == "HoldsWithEquality"
    assert report["lhs"] == report["rhs"] == 0
    man = data["manifest"]
    assert man["command"] == "check" and man["input"] == "tight-2-3" and man["version"] == __version__


def test_check_violation_exits_2(capsys):
    code, out, _ = run(capsys, "check", "--config", "standard-basis-d2", "--m", "1,2")
    assert code == 2
    verdicts = [r["verdict"] for r in json.loads(out)["reports"]]
    assert verdicts == ["HoldsWithEquality", "Violated"]


def test_check_prime_override(capsys):
    code, out, _ = run(capsys, "check", "--config", "tight-2-3", "--prime", "2")
    assert code == 0
    (report,) = json.loads(out)["reports"]
    assert (report["lhs"], report["rhs"], report["verdict"]) == (-2, -1, "HoldsStrict")


def test_check_unital_and_laurent(capsys):
    code, out, _ = run(capsys, "check", "--config", "line-d1-n2", "--unital", "--m", "1,2,3")
    assert code == 0 and len(json.loads(out)["reports"]) == 3
    code, out, _ = run(capsys, "check", "--config", "tight-2-3-laurent", "--m", "1,2")
    assert code == 0
    assert all(r["rhs"] == 0 for r in json.loads(out)["reports"])


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["check", "--config", "no-such-fixture"], "no such file"),
        (["check", "--config", "tight-2-3", "--m", "0"], "positive"),
        (["check", "--config", "tight-2-3", "--m", "x"], "comma separated"),
        (["check", "--config", "tight-2-3", "--variant", "nonarch"], ""),
        (["check", "--config", "tight-2-3", "--prime", "4"], ""),
        (["search", "equality", "--prime", "5", "--d", "2"], "--n"),
        (["symdim", "0", "2"], "positive"),
    ],
)
def test_input_errors_exit_1(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert err.startswith("ultrawelch ") and needle in err


def test_usage_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as err:
        main(["check"])
    assert err.value.code == 1
    with pytest.raises(SystemExit) as err:
        main(["search", "lines", "--prime", "3", "--d", "2"])
    assert err.value.code == 1


def test_unital_rejects_non_unital_config(capsys, tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"backend": {"padic": 3}, "d": 1, "n": 2, "vectors": [["1"], ["2"]], "functionals": [["1"], ["1"]]}')
    code, _, err = run(capsys, "check", "--config", str(cfg), "--unital")
    assert code == 1 and "1" in err


def test_malformed_json_names_the_position(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"backend": {"padic": 5}, "d": 2,')
    code, _, err = run(capsys, "check", "--config", str(bad))
    assert code == 1 and "line 1" in err
    bad.write_text('{"backend": {"padic": 5}, "d": 1, "n": 1, "vectors": [["1.5"]], "functionals": [["1"]]}')
    code, _, err = run(capsys, "check", "--config", str(bad))
    assert code == 1 and "vectors[0][0]" in err


def test_fixture_override_env(capsys, tmp_path, monkeypatch):
    (tmp_path / "mine.json").write_text((fixtures_dir() / "line-d1-n2.json").read_text())
    monkeypatch.setenv("ULTRAWELCH_FIXTURES", str(tmp_path))
    assert fixtures_dir() == tmp_path
    code, _, _ = run(capsys, "check", "--config", "mine")
    assert code == 0
    code, _, _ = run(capsys, "check", "--config", "tight-2-3")
    assert code == 1


def test_out_file_round_trip(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "check", "--config", "tight-2-3", "--m", "1,2", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n" == text
    # the embedded config is itself a loadable input
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps(json.loads(text)["config"]))
    run(capsys, "check", "--config", str(cfg), "--m", "1,2", "--out", str(tmp_path / "again.json"))
    again = json.loads((tmp_path / "again.json").read_text())
    assert again["reports"] == json.loads(text)["reports"]


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["symdim", "4", "2"], {"d": 4, "m": 2, "dim": 10}),
        (["symdim", "2", "2", "--prime", "3"], {"d": 2, "m": 2, "dim": 3, "prime": 3, "valuation": 1}),
        (["symdim", "2", "1", "--prime", "2"], {"d": 2, "m": 1, "dim": 2, "prime": 2, "valuation": 1}),
    ],
)
def test_symdim(capsys, argv, expected):
    code, out, _ = run(capsys, *argv)
    assert code == 0 and json.loads(out) == expected


def test_search_commands(capsys):
    code, out, _ = run(
        capsys, "search", "equiangular", "--prime", "5", "--d", "2", "--gamma", "0", "--n-max", "3", "--seed", "7"
    )
    assert code == 0
    data = json.loads(out)
    assert data["result"]["best_n"] == 3 and data["manifest"]["seed"] == 7
    code, out, _ = run(capsys, "search", "zauner", "--prime", "3", "--d", "3", "--budget", "10")
    assert code == 3 and json.loads(out)["result"]["status"] == "Budget"
    code, out, _ = run(
        capsys, "search", "equality", "--prime", "5", "--d", "2", "--n", "3", "--values=-1/2,0,1/2,1"
    )
    assert code == 0 and json.loads(out)["result"]["certificates"]["b"] == "3/2"


def test_search_workers_do_not_change_output(capsys):
    base = ["search", "equiangular", "--prime", "5", "--d", "2", "--gamma", "0", "--seed", "7"]
    _, one, _ = run(capsys, *base)
    _, four, _ = run(capsys, *base, "--workers", "4")
    a, b = json.loads(one), json.loads(four)
    assert a["result"] == b["result"]


def test_demo_contains_curated_entries(capsys):
    code, out, _ = run(capsys, "demo")
    assert code == 0
    entries = json.loads(out)["entries"]
    assert entries["standard-basis-equality"]["verdict"] == "HoldsWithEquality"
    assert entries["tight-2-3-p5"]["verdict"] == "HoldsWithEquality"
    assert entries["hypothesis-violation-p3-m2"]["verdict"] == "Violated"
    assert entries["field-condition-counterexample-p5"] == [1, 2]
    assert [4, 2, 10] in entries["symdim-table"]


def test_demo_byte_stable_across_processes():
    cmd = [sys.executable, "-m", "ultrawelch", "demo"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first.endswith(b"\n")
