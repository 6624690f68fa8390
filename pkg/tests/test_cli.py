"""Tests for the command-line interface: output formats, determinism, and
exit codes."""

import json
import math
import subprocess
import sys

import pytest

from sl3rep.cli import main


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "sl3rep.cli", *argv],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_wigner_value():
    code, out, _ = run_cli("wigner", "--l", "1", "--m1", "0", "--m2", "0",
                           "--alpha", "0", "--beta", "1.0", "--gamma", "0",
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"][0] == pytest.approx(math.cos(1.0))
    assert doc["value"][1] == pytest.approx(0.0)


def test_cg_json_and_table():
    code, out, _ = run_cli("cg", "--k", "0", "--j", "0", "--l", "1", "--m", "1",
                           "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["float"] == pytest.approx(1 / math.sqrt(10))
    assert doc["exact"] == {"terms": [[10, "1/10"]]}
    code, out, _ = run_cli("cg", "--k", "0", "--j", "0", "--l", "1", "--m", "1")
    assert code == 0 and "√10" in out


def test_sl2_compose_exit_codes():
    code, out, _ = run_cli("sl2", "compose", "--nu", "1/2", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["kind"] == "discrete-sub" and doc["k"] == 2
    code, out, _ = run_cli("sl2", "compose", "--nu", "1/3", "--format", "json")
    assert code == 0 and json.loads(out)["irreducible"]


def test_series_listing():
    code, out, _ = run_cli("series", "--delta", "0,0,0", "--lambda", "0,0",
                           "--lmax", "2")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "l,m1,m2"
    assert "0,0,0" in lines[1:]
    assert "l,multiplicity" in lines


def test_action_json_deterministic(tmp_path):
    args = ("action", "--lambda", "1/2,0", "--delta", "0,0,0",
            "--gen", "Z1", "--lmax", "3", "--format", "json")
    code1, out1, _ = run_cli(*args)
    code2, out2, _ = run_cli(*args)
    assert code1 == code2 == 0
    assert out1 == out2
    doc = json.loads(out1)
    assert doc["metadata"]["generator"] == "Z1"
    assert doc["metadata"]["lmax"] == 3
    # --out writes the same bytes to a file
    target = tmp_path / "m.json"
    code3, out3, _ = run_cli(*args, "--out", str(target))
    assert code3 == 0 and out3 == ""
    assert json.loads(target.read_text()) == doc


def test_action_csv():
    code, out, _ = run_cli("action", "--lambda", "0,0", "--delta", "0,0,0",
                           "--gen", "Y1", "--lmax", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0].startswith(",v(0;0;0)")


def test_compose_preset_exit_code():
    code, out, _ = run_cli("compose", "--preset", "degenerate", "--s", "1/4",
                           "--lmax", "6", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["metadata"]["quarter_integral"] is True


def test_verify_suite_pass_and_fields():
    code, out, _ = run_cli("verify", "--suite", "cg", "--lmax", "3",
                           "--samples", "10")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"] is True
    assert doc["max_deviation"] < doc["tolerance"]


def test_usage_errors_exit_2():
    assert run_cli("cg", "--k", "0")[0] == 2
    assert run_cli("no-such-command")[0] == 2
    assert run_cli("series", "--delta", "2,0,0", "--lambda", "0,0")[0] == 2


def test_main_callable_in_process(capsys):
    assert main(["cg", "--k", "2", "--j", "2", "--l", "3", "--m", "3",
                 "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["float"] == pytest.approx(1.0)
