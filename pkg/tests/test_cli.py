import io
import json
import subprocess
import sys

import pytest

from cs_obstruct.cli import run


def call(*argv, stdin=None, monkeypatch=None):
    out, err = io.StringIO(), io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_certify_family():
    code, out, _ = call("certify", "2,3", "2,7", "2,15")
    assert code == 0 and "verdict: Certified" in out


def test_certify_rejected():
    code, out, _ = call("certify", "2,5", "2,7")
    assert code == 1 and "Rejected" in out
    assert "378" in out and "390" in out and "<=" in out


@pytest.mark.parametrize("argv", [
    ["certify", "2,4"], ["certify", "2"], ["certify", "1,3"], ["certify"],
    ["tau-bound"], ["nope"], ["snf", "--format", "xml"],
])
def test_usage_errors(argv, capsys):
    code = run(argv)
    assert code == 2
    assert "usage:" in capsys.readouterr().err


def test_domain_error_is_usage(capsys):
    code, _, err = call("cs-invariants", "2", "4", "1")
    assert code == 2 and "usage:" in err


def test_tau_bound():
    assert call("tau-bound", "--whitehead", "2", "3")[1] == "1/138\n"
    assert call("tau-bound", "--denominator", "120")[1] == "1/120\n"


@pytest.mark.parametrize("argv", [
    ["certify", "2,3", "2,7", "2,15", "2,31"],
    ["certify", "2,5", "2,7"],
    ["cs-invariants", "2", "3", "2"],
    ["tau-bound", "--whitehead", "2", "7"],
    ["sequence", "--power", "6"],
    ["sequence", "--kn", "2,2"],
    ["char-classes", "--diag=-1,-1,-2", "--e=1,1,0"],
    ["block", "--whitehead", "2", "3"],
    ["rep-search", "--seeds", "5", "--seed", "1"],
])
def test_json_round_trip_and_determinism(argv):
    _, a, _ = call(*argv, "--format", "json")
    _, b, _ = call(*argv, "--format", "json")
    assert a == b
    assert json.dumps(json.loads(a), indent=2) + "\n" == a
    for fmt in ("table", "tsv"):
        assert call(*argv, "--format", fmt)[1] == call(*argv, "--format", fmt)[1]


def test_certificate_json_fields():
    doc = json.loads(call("certify", "2,3", "2,7", "--format", "json")[1])
    assert doc["verdict"] == "Certified"
    assert doc["checks"] == [{"i": 1, "j": 0, "lhs": "378", "rhs": "138", "pass": True}]


def test_cs_invariants_rows():
    code, out, _ = call("cs-invariants", "2", "3", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["manifold"] == "-Sigma(2,3,5)"
    assert sorted(r["cs_su2"] for r in doc["classes"]) == ["1/120", "49/120"]


def test_snf_stdin(monkeypatch):
    code, out, _ = call("snf", stdin="2 2\n-11 12\n12 -11\n", monkeypatch=monkeypatch)
    assert code == 0 and "invariant factors: 1 23" in out and "Z/23" in out


def test_snf_bad_input(monkeypatch):
    code, _, err = call("snf", stdin="2 2\n1 2 3\n", monkeypatch=monkeypatch)
    assert code == 2 and "usage:" in err


def test_char_classes_example():
    doc = json.loads(call("char-classes", "--diag=-1,-1", "--e=1,0", "--format", "json")[1])
    assert doc["count"] == 1 and doc["square"] == -1


def test_char_classes_indefinite_is_error():
    code, _, err = call("char-classes", "--diag=-1,1", "--e=1,0")
    assert code == 2


def test_sequence_exit_codes():
    assert call("sequence", "--power", "8")[0] == 0
    assert call("sequence", "--kn", "2,2")[0] == 1


def test_block_summary():
    doc = json.loads(call("block", "--whitehead", "2", "3", "--format", "json")[1])
    assert doc["e_square"] == "-1/66" and doc["property_I"] is True
    assert doc["partition"]["gl"] == ["-Sigma(D(T(2,3)))"]


def test_rep_search(monkeypatch):
    monkeypatch.setenv("CS_OBSTRUCT_THREADS", "2")
    code, out, _ = call("rep-search", "--seeds", "10", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["mechanism_verified"] and doc["converged"] >= 9


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "cs_obstruct.cli", "tau-bound",
                        "--whitehead", "2", "3"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == "1/138\n"
