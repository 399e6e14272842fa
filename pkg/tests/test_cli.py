import json
import subprocess
import sys

import numpy as np
import pytest

from sphereval.bodies import is_support_function
from sphereval.cli import main
from sphereval.profiles import expand_zonal, load_profile


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def _rows(out):
    lines = out.strip().splitlines()
    assert lines[0] == "k,value"
    return {int(k): float(v) for k, v in (line.split(",") for line in lines[1:])}


def test_cosine_table(capsys):
    code, out, _ = run(capsys, "multipliers", "--transform", "cosine", "--n", "3", "--i", "1",
                       "--kmax", "4")
    rows = _rows(out)
    assert code == 0
    assert rows[0] == pytest.approx(0.5, abs=1e-12)
    assert rows[2] == pytest.approx(0.125, abs=1e-12)


def test_box_table(capsys):
    code, out, _ = run(capsys, "multipliers", "--transform", "box", "--n", "3", "--kmax", "4")
    assert code == 0 and _rows(out)[1] == 0.0


def test_json_table(capsys):
    code, out, _ = run(capsys, "multipliers", "--transform", "radon-down", "--n", "4", "--i", "1",
                       "--j", "3", "--kmax", "4", "--format", "json")
    d = json.loads(out)
    assert code == 0 and [r["k"] for r in d["rows"]] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize("argv,needle", [
    (["multipliers", "--transform", "cosine", "--n", "3", "--i", "0"], "1..2"),
    (["multipliers", "--transform", "sine", "--n", "3"], "cosine"),
    (["multipliers", "--transform", "cosine", "--n", "2", "--i", "1"], "3..8"),
    (["multipliers", "--transform", "cosine", "--n", "3", "--kmax", "0"], "2..256"),
    (["kappa", "-3"], ">= -1"),
    (["nonsense"], "invalid choice"),
])
def test_usage_errors(capsys, argv, needle):
    code, _, err = run(capsys, *argv)
    assert code == 2 and needle in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("SPHEREVAL_KMAX", "6")
    code, out, _ = run(capsys, "multipliers", "--transform", "cosine", "--n", "3")
    assert code == 0 and max(_rows(out)) == 6


def test_kappa(capsys):
    code, out, _ = run(capsys, "kappa", "3")
    assert code == 0 and float(out) == pytest.approx(4 * np.pi / 3)


@pytest.fixture
def pi2(tmp_path, capsys):
    path = tmp_path / "pi2.json"
    assert run(capsys, "builtin", "--name", "Pi", "--n", "3", "--i", "2", "--kmax", "32",
               "--out", str(path))[0] == 0
    return path


def test_convert_to_klain_is_support_function(capsys, pi2, tmp_path):
    out = tmp_path / "k.json"
    code, _, _ = run(capsys, "convert", "--from", "generating", "--to", "klain", "--n", "3",
                     "--i", "2", "--in", str(pi2), "--out", str(out))
    assert code == 0
    assert is_support_function(load_profile(out))[0]


def test_apply_lambda_gives_abs(capsys, pi2, tmp_path):
    out = tmp_path / "l.json"
    code, _, _ = run(capsys, "apply", "--op", "lambda", "--n", "3", "--i", "2", "--in", str(pi2),
                     "--out", str(out))
    assert code == 0
    want = expand_zonal(3, np.abs, 32, warn=False).coeffs
    assert np.allclose(load_profile(out).coeffs, want, atol=1e-13)


def test_apply_fourier_twice(capsys, pi2, tmp_path):
    k = tmp_path / "k.json"
    run(capsys, "convert", "--from", "generating", "--to", "klain", "--n", "3", "--i", "2",
        "--in", str(pi2), "--out", str(k))
    k2 = tmp_path / "k2.json"
    code, _, _ = run(capsys, "apply", "--op", "fourier", "--rep", "klain", "--n", "3", "--i", "2",
                     "--in", str(k), "--power", "2", "--out", str(k2))
    assert code == 0
    assert np.allclose(load_profile(k2).coeffs, load_profile(k).coeffs, atol=1e-9)


def test_apply_reports_dropped_linear_part(capsys, tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps({"n": 4, "i": None, "space": "sphere", "parity": "mixed",
                             "coeffs": [1.0, 0.5, 0.2]}))
    code, out, err = run(capsys, "apply", "--op", "lop-berg", "--n", "4", "--i", "1",
                         "--in", str(p))
    assert code == 0 and "degree-1" in err
    assert json.loads(out)["coeffs"][1] == 0


def test_apply_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "apply", "--op", "lambda", "--n", "3", "--i", "2",
                       "--in", str(tmp_path / "none.json"))
    assert code == 2 and "no such file" in err


def test_body_eval(capsys, tmp_path):
    f = tmp_path / "cube.json"
    verts = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]
    f.write_text(json.dumps({"vertices": verts}))
    code, out, _ = run(capsys, "body", "eval", "--file", str(f), "--op", "projvol",
                       "--dir", "1,1,1")
    assert code == 0 and float(out) == pytest.approx(np.sqrt(3))
    code, out, _ = run(capsys, "body", "eval", "--file", str(f), "--op", "support",
                       "--dir", "1,0,0")
    assert code == 0 and float(out) == pytest.approx(1.0)
    code, _, err = run(capsys, "body", "eval", "--file", str(f), "--op", "support", "--dir", "1,0")
    assert code == 2 and "3 components" in err


def test_verify_is_deterministic_and_passes(capsys):
    argv = ["verify", "--seed", "7", "--json", "--samples", "20000"]
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == 0 and code2 == 0
    assert out1 == out2
    report = json.loads(out1)
    assert all(c["status"] == "pass" for c in report["checks"])
    assert {"check", "status", "residual", "tolerance"} <= set(report["checks"][0])


def test_verify_tiny_band_limit_fails(capsys):
    code, out, _ = run(capsys, "verify", "--kmax", "2", "--samples", "20000")
    assert code == 1
    failed = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert failed and all("berg" in line for line in failed)


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "sphereval", "kappa", "2"], capture_output=True,
                       text=True, check=True)
    assert float(r.stdout) == pytest.approx(np.pi)
