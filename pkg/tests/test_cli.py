import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from sidonlab import acceptance
from sidonlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--set", "0,1,2,3")
    doc = json.loads(out)
    assert code == 0
    assert doc["bound"] == pytest.approx(np.sqrt(3), abs=1e-15)
    assert doc["chain_report"]["ordered"]


def test_bound_with_polynomial(capsys):
    poly = json.dumps({"frequencies": [0, 1], "coefficients": [[0.5, 0], [0.5, 0]]})
    code, out, _ = run(capsys, "bound", "--set", "0,1", "--poly", poly)
    assert code == 0 and json.loads(out)["chain_report"]["sup_sq"] == pytest.approx(1)


def test_family_tau(capsys):
    code, out, _ = run(capsys, "family", "--tau", "1.5707963")
    doc = json.loads(out)
    coeffs = [complex(*c) for c in doc["polynomial"]["coefficients"]]
    np.testing.assert_allclose(coeffs, [-4 / 15, 2 / 5, 1 / 5, 2 / 15], atol=1e-7)
    assert [p["kind"] for p in doc["critical_points"]].count("global-max") == 3


def test_family_scan_csv(capsys):
    code, out, _ = run(capsys, "family", "--scan", "5")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and set(rows[0]) == {"tau", "t", "phi", "kind"}
    assert {r["kind"] for r in rows} >= {"global-max", "global-min", "local-min"}
    assert all(float(r["phi"]) <= 9 / 25 + 1e-9 for r in rows)


def test_phi_grid(capsys):
    code, out, _ = run(capsys, "phi-grid", "--nt", "3", "--ntau", "2")
    lines = out.strip().splitlines()
    assert lines[0] == "t,tau,phi" and len(lines) == 7
    # row-major over t, then tau
    assert [float(l.split(",")[0]) for l in lines[1:3]] == [0.0, 0.0]
    assert float(lines[1].split(",")[2]) == pytest.approx(0.36)


def test_critical_points(capsys):
    code, out, _ = run(capsys, "critical-points")
    kinds = [p["kind"] for p in json.loads(out)["special_points"]]
    assert kinds == ["global-min", "local-min", "saddle"]
    code, out, _ = run(capsys, "critical-points", "--tau", "0.5")
    assert len(json.loads(out)["critical_points"]) == 3


def test_lift(capsys):
    code, out, _ = run(capsys, "lift", "--values", "1,-1,-1,1", "--N", "3")
    doc = json.loads(out)
    assert code == 0 and doc["represents"]
    assert doc["measure"]["total_variation"] == pytest.approx(5 / 3, abs=1e-12)


def test_lift_inconsistent_is_usage_error(capsys):
    code, _, err = run(capsys, "lift", "--values", "1,1,1,-1", "--N", "3")
    assert code == 2 and "mod 3" in err


def test_unconditional(capsys):
    code, out, _ = run(capsys, "unconditional", "--set", "0,1,2,3")
    doc = json.loads(out)
    assert doc["lower"] == pytest.approx(5 / 3, abs=1e-9) and doc["upper"] == pytest.approx(5 / 3, abs=1e-9)


def test_biuni(capsys):
    code, out, _ = run(capsys, "biuni", "--n", "6")
    doc = json.loads(out)
    assert doc["biunimodular"] and doc["hadamard_residual"] < 1e-10
    np.testing.assert_allclose(doc["transform_moduli"], 1, atol=1e-10)


def test_minimax_small(capsys):
    code, out, _ = run(capsys, "minimax", "--set", "0,1,2", "--starts", "4", "--iters", "400", "--seed", "3")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) >= {"value", "sidon_lower", "witness_polynomial", "per_start_values"}
    assert len(doc["per_start_values"]) == 4
    assert doc["sidon_lower"] == pytest.approx(1 / doc["value"])


def test_sidon(capsys):
    code, out, _ = run(capsys, "sidon", "--set", "0,1", "--starts", "1")
    doc = json.loads(out)
    assert code == 0 and doc["upper"] == 1.0 and "witness" in doc


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as err:
        main(["nope"])
    assert err.value.code == 2
    with pytest.raises(SystemExit) as err:
        main(["bound", "--set", "0,1", "--unknown"])
    assert err.value.code == 2
    code, _, err_text = run(capsys, "bound", "--set", "1,x")
    assert code == 2 and "bad frequency set" in err_text


def test_float_precision(capsys):
    _, out, _ = run(capsys, "bound", "--set", "0,1,2,3")
    assert "1.7320508075688772" in out


def test_verify_all_failure_exit(capsys, monkeypatch):
    monkeypatch.setattr(acceptance, "CRITERIA", {"always fails": lambda: (False, {"x": 1.0})})
    code, out, _ = run(capsys, "verify-all")
    assert code == 1 and json.loads(out)["passed"] is False


@pytest.mark.slow
def test_verify_all_is_byte_identical():
    cmd = [sys.executable, "-m", "sidonlab", "verify-all"]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["passed"]
