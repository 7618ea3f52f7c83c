import csv
import io
import json
import subprocess
import sys

import pytest

from hznlib import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_eval(capsys):
    code, out = run(capsys, "eval", "--k", "2", "--x", "1", "--alpha", "0.5", "--beta", "0.5")
    assert code == 0
    d = json.loads(out)
    assert d["status"] == "ok" and "wall_time_ms" not in d
    assert abs(d["outputs"][0]["re"] - (-0.5822405264650125)) < 1e-14


def test_seventeen_digits():
    assert cli.to_json(0.1) == "0.10000000000000001"
    assert cli.to_json({"b": 1, "a": [1.5, True, None]}) == '{"b": 1, "a": [1.5, true, null]}'


def test_eval_complex_x_and_timing(capsys):
    code, out = run(capsys, "eval", "--k", "3", "--x", "2,0.5", "--alpha", "0.3", "--beta", "0.7",
                    "--route", "integral", "--timing")
    d = json.loads(out)
    assert code == 0 and isinstance(d["wall_time_ms"], int)


def test_zq_routes(capsys):
    args = ["zq", "--k", "2", "--w", "3.3", "--wp", "0.2", "--alpha", "0.3", "--beta", "0.6"]
    _, o1 = run(capsys, *args)
    _, o2 = run(capsys, *args, "--route", "hzn")
    a, b = json.loads(o1)["outputs"][0], json.loads(o2)["outputs"][0]
    assert abs(complex(a["re"], a["im"]) - complex(b["re"], b["im"])) < 1e-9


def test_reduce(capsys):
    code, out = run(capsys, "reduce", "--discriminant", "12")
    d = json.loads(out)
    assert code == 0 and d["outputs"][0]["class_count"] == 2


def test_table_twist_file(capsys, tmp_path):
    f = tmp_path / "tw.txt"
    f.write_text("# principal twist\n0.5 0.5   # half-half\n\n")
    code, out = run(capsys, "table", "--twists", str(f))
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert list(rows[0])[:8] == ["class_id", "alpha", "beta", "zcal_re", "zcal_im",
                                 "rhs_hklf_re", "rhs_hklf_im", "abs_diff"]
    assert abs(float(rows[0]["rhs_hklf_re"]) + 11.12741223912) < 1e-7
    assert float(rows[0]["abs_diff"]) <= 1e-9


def test_bad_twist_file(capsys, tmp_path):
    f = tmp_path / "tw.txt"
    f.write_text("0.5\n")
    with pytest.raises(SystemExit) as e:
        cli.main(["table", "--twists", str(f)])
    assert e.value.code == 2


def test_check_ok(capsys):
    code, out = run(capsys, "check", "--suite", "fe2", "--samples", "10", "--tol", "1e-10", "--seed", "1")
    assert code == 0 and json.loads(out)["status"] == "ok"


def test_check_failure_exit_one(capsys):
    code, out = run(capsys, "check", "--suite", "fe2", "--samples", "3", "--tol", "1e-30", "--seed", "1")
    assert code == 1 and json.loads(out)["status"] == "failed"


def test_check_env_tol(capsys, monkeypatch):
    monkeypatch.setenv("HZN_TOL", "1e-30")
    code, _ = run(capsys, "check", "--suite", "fe2", "--samples", "2")
    assert code == 1


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["eval", "--k", "2"],
    ["eval", "--k", "2", "--x", "a,b", "--alpha", "0.3", "--beta", "0.2"],
    ["eval", "--k", "2", "--x", "-1", "--alpha", "0.3", "--beta", "0.2"],
    ["check", "--suite", "fe2", "--samples", "0"],
])
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(argv)
    assert e.value.code == 2


def test_bad_env_max_terms(capsys, monkeypatch):
    monkeypatch.setenv("HZN_MAX_TERMS", "many")
    with pytest.raises(SystemExit) as e:
        cli.main(["reduce", "--discriminant", "12"])
    assert e.value.code == 2


def test_determinism_subprocess():
    cmd = [sys.executable, "-m", "hznlib.cli", "check", "--suite", "cocycle", "--samples", "4", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True).stdout
    b = subprocess.run(cmd, capture_output=True).stdout
    assert a == b and a
