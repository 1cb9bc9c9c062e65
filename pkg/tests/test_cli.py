import csv
import functools
import io
import json
import subprocess
import sys

import pytest

from qsigma import cli
from qsigma.identities import get_record, verify_all
from qsigma.identities.records import perturb


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


def test_list():
    code, text = run("list")
    assert code == 0
    rows = text.strip().splitlines()
    assert len(rows) == 26
    ids = [r.split()[0] for r in rows]
    assert ids == sorted(ids)
    assert "sigma1" in ids and "nineparam" in ids


def test_list_json():
    code, text = run("list", "--json")
    data = json.loads(text)
    assert code == 0 and isinstance(data, list) and len(data) == 26
    assert {"id", "title", "backends"} <= set(data[0])


def test_verify_sigma1(tmp_path):
    path = tmp_path / "r.json"
    code, text = run("verify", "sigma1", "--order", "25", "--json", str(path))
    assert code == 0
    report = json.loads(path.read_text())
    assert report["status"] == "pass" and report["order"] == 25
    assert json.loads(text) == report


def test_domain_violation_exit_code():
    code, text = run("verify", "qbin", "--param", "z=3/2")
    assert code == 2
    assert json.loads(text)["status"] == "precondition-error"


def test_unknown_id_rejected_before_work():
    assert run("verify", "nosuch")[0] == 2
    assert run("verify", "nineparam", "--backend", "formal")[0] == 2


def test_bad_arguments():
    assert run("verify", "sigma1", "--order", "0")[0] == 2
    assert run("verify", "sigma1", "--precision", "32")[0] == 2
    assert run("verify", "sigma1", "--param", "c")[0] == 2
    assert run("coeffs", "sigma", "--upto", "201")[0] == 2
    assert run("coeffs", "tau", "--upto", "3")[0] == 2
    assert run()[0] == 2


def _table(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "coefficient"]
    return [(int(n), c) for n, c in rows[1:]]


def test_coeffs_sigma(tmp_path):
    path = tmp_path / "s.csv"
    code, text = run("coeffs", "sigma", "--upto", "4", "--csv", str(path))
    assert code == 0
    assert [c for _, c in _table(text)] == ["1", "1", "-1", "2", "-2"]
    assert path.read_text() == text


def test_coeffs_d_and_s():
    assert [c for _, c in _table(run("coeffs", "D", "--upto", "4")[1])] == ["-1/2", "1", "2", "2", "3"]
    assert [c for _, c in _table(run("coeffs", "S", "--upto", "5")[1])] == ["1", "1", "1", "2", "2", "3"]


def test_coeffs_sigma_star():
    rows = _table(run("coeffs", "sigma-star", "--upto", "4")[1])
    assert rows[0] == (1, "-2") and rows[-1] == (4, "0")


def test_coeffs_t():
    rows = dict(_table(run("coeffs", "T", "--upto", "3")[1]))
    assert rows[1] == "1" and rows[-23] == "-2" and rows[25] == "1"
    assert sorted(rows) == [1 - 24 * m for m in range(3, 0, -1)] + [24 * m + 1 for m in range(4)]
    assert all(n % 24 == 1 for n in rows)


def test_json_round_trip(tmp_path):
    path = tmp_path / "r.json"
    code, _ = run("verify", "heine", "--backend", "numeric", "--samples", "1", "--seed", "4",
                  "--json", str(path))
    first = json.loads(path.read_text())
    args = ["verify", first["identity_id"], "--backend", first["backend"],
            "--precision", str(first["precision"]), "--samples", "1"]
    for k, v in first["params"].items():
        args += ["--param", f"{k}={v}"]
    code2, _ = run(*args, "--json", str(path))
    second = json.loads(path.read_text())
    assert code == code2 == 0
    for key in ("status", "residual", "params", "first_mismatch"):
        assert first[key] == second[key]


def test_failure_exit_code(monkeypatch, tmp_path):
    subset = [get_record(i) for i in ("euler", "rsi1")]
    monkeypatch.setattr(cli, "verify_all", functools.partial(verify_all, records=subset))
    assert run("verify-all", "--order", "8")[0] == 0
    broken = [subset[0], perturb(subset[1], 8)]
    monkeypatch.setattr(cli, "verify_all", functools.partial(verify_all, records=broken))
    path = tmp_path / "all.json"
    code, _ = run("verify-all", "--order", "8", "--json", str(path))
    assert code == 1
    statuses = {r["identity_id"]: r["status"] for r in json.loads(path.read_text())}
    assert statuses == {"euler": "pass", "rsi1": "fail"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qsigma", "coeffs", "sigma", "--upto", "2"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1:] == ["0,1", "1,1", "2,-1"]


@pytest.mark.slow
def test_nineparam_numeric_seed7():
    code, text = run("verify", "nineparam", "--backend", "numeric", "--precision", "256",
                     "--samples", "3", "--seed", "7")
    assert code == 0
    assert [json.loads(line)["status"] for line in text.splitlines()] == ["pass"] * 3
