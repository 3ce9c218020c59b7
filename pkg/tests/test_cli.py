import json
import subprocess
import sys

import numpy as np
import pytest

from qchi2.cli import main
from qchi2.linalg import matrix_to_json


def _write(path, mat):
    path.write_text(json.dumps(matrix_to_json(np.asarray(mat))))
    return str(path)


@pytest.fixture
def pair(tmp_path):
    return (_write(tmp_path / "rho.json", np.diag([0.5, 0.5])),
            _write(tmp_path / "sigma.json", np.diag([0.25, 0.75])))


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_same_file(pair, capsys):
    code, out, _ = run(["eval", pair[1], pair[1], "--f", "wyd:0.3"], capsys)
    assert code == 0
    assert json.loads(out) == {"chi2": 0.0, "f": "wyd:0.3", "path": "eigenbasis"}


@pytest.mark.parametrize("spec", ["min", "max", "ruskai:0.25", "wyd:0.7", "weight:linear"])
def test_eval_classical(pair, capsys, spec):
    code, out, _ = run(["eval", *pair, "--f", spec], capsys)
    assert code == 0
    assert json.loads(out)["chi2"] == pytest.approx(1 / 3, abs=1e-12)


def test_eval_family_coincidence(tmp_path, capsys):
    from qchi2.harness import random_density

    rho = _write(tmp_path / "r.json", random_density(3, 1).data)
    sigma = _write(tmp_path / "s.json", random_density(3, 2, 1e-3).data)
    _, a, _ = run(["eval", rho, sigma, "--f", "ruskai:0.5"], capsys)
    _, b, _ = run(["eval", rho, sigma, "--f", "wyd:0.5"], capsys)
    va, vb = json.loads(a)["chi2"], json.loads(b)["chi2"]
    assert abs(va - vb) <= 1e-10


@pytest.mark.parametrize("path", ["eigenbasis", "oracle", "closed-form"])
def test_eval_paths(pair, capsys, path):
    code, out, _ = run(["eval", *pair, "--f", "ruskai:0.5", "--path", path], capsys)
    assert code == 0
    res = json.loads(out)
    assert res["path"] == path and res["chi2"] == pytest.approx(1 / 3, abs=1e-12)


def test_eval_closed_form_unavailable(pair, capsys):
    code, _, err = run(["eval", *pair, "--f", "min", "--path", "closed-form"], capsys)
    assert code == 2 and "closed form" in err


def test_eval_schema_error(tmp_path, pair, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 2, "re": [[0.9, 0], [0, 0.9]]}))
    code, out, err = run(["eval", pair[0], str(bad)], capsys)
    assert code == 2 and out == ""
    assert "bad.json" in err and "trace" in err


def test_eval_bad_spec(pair, capsys):
    code, _, err = run(["eval", *pair, "--f", "nonsense"], capsys)
    assert code == 2 and "nonsense" in err


def test_eval_singular_sigma(tmp_path, pair, capsys):
    pure = _write(tmp_path / "pure.json", np.diag([1.0, 0.0]))
    code, _, err = run(["eval", pair[0], pure], capsys)
    assert code == 3 and "pure.json" in err


def test_eval_out_file(tmp_path, pair, capsys):
    target = tmp_path / "o.json"
    code, out, _ = run(["eval", *pair, "--out", str(target)], capsys)
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["chi2"] == pytest.approx(1 / 3)


def test_scan_convexity_example(capsys):
    code, out, _ = run(["scan", "convexity", "--f", "min", "--n", "2", "--trials", "50",
                        "--seed", "7"], capsys)
    assert code == 0
    rep = json.loads(out)
    assert rep["pass"] and rep["scan"] == "convexity" and rep["seed"] == 7


def test_scan_zero_trials(capsys):
    code, out, err = run(["scan", "convexity", "--trials", "0"], capsys)
    assert code == 0 and json.loads(out)["pass"] and "vacuous" in err


def test_scan_byte_identical(capsys):
    argv = ["scan", "convexity", "--f", "wyd:0.25", "--n", "3", "--trials", "10", "--seed", "3",
            "--verbose"]
    _, a, _ = run(argv, capsys)
    _, b, _ = run(argv, capsys)
    assert a == b


@pytest.mark.parametrize("kind,extra", [
    ("contraction", ["--f", "ruskai:0.25", "--n", "2"]),
    ("quadratic-inverse", ["--n", "4"]),
    ("family", ["--family", "ruskai", "--n", "2", "--alpha-grid", "0,0.5,1"]),
])
def test_scan_kinds(capsys, kind, extra):
    code, out, _ = run(["scan", kind, "--trials", "5", *extra], capsys)
    assert code == 0 and json.loads(out)["pass"]


def test_scan_bad_lambda_grid_exit_2(capsys):
    code, _, _ = run(["scan", "convexity", "--lambda-grid", "0.5,2"], capsys)
    assert code == 2


def test_scan_violation_exit_1(capsys, monkeypatch):
    # every specifier in the grammar names a valid member, so substitute a non-member
    from qchi2 import cli, fop

    bad = fop.custom(lambda t: ((1 + np.asarray(t) ** 4) / 2) ** 0.25, "pm4")
    monkeypatch.setattr(cli.fop, "parse_function_spec", lambda spec: bad)
    code, out, _ = run(["scan", "convexity", "--f", "pm4", "--n", "2", "--trials", "200",
                        "--seed", "1"], capsys)
    assert code == 1 and json.loads(out)["pass"] is False
    code, out, _ = run(["check-f", "--f", "pm4"], capsys)
    assert code == 1 and json.loads(out)["pass"] is False


def test_check_f(capsys):
    code, out, _ = run(["check-f", "--f", "wyd:0.3", "--trials", "10"], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["pass"]
    assert set(rep["checks"]) == {"symmetry", "bounds", "loewner"}


@pytest.mark.parametrize("h,target", [("const:0", "wyd:0"), ("const:1", "wyd:1"),
                                      ("const:0.5", "ruskai:0.5")])
def test_repr_roundtrip(capsys, h, target):
    code, out, _ = run(["repr-roundtrip", "--h", h, "--target", target], capsys)
    rep = json.loads(out)
    assert code == 0 and rep["max_rel_deviation"] <= 1e-8


def test_repr_roundtrip_mismatch(capsys):
    code, out, _ = run(["repr-roundtrip", "--h", "const:0.2", "--target", "wyd:0.8"], capsys)
    assert code == 1 and not json.loads(out)["pass"]


def test_repr_roundtrip_csv(tmp_path, capsys):
    p = tmp_path / "h.csv"
    p.write_text("0,0.25\n1,0.25\n")
    code, _, _ = run(["repr-roundtrip", "--h", str(p), "--target", "wyd:0.25"], capsys)
    assert code == 0
    p.write_text("0,0.25\nbad\n")
    code, _, err = run(["repr-roundtrip", "--h", str(p), "--target", "wyd:0.25"], capsys)
    assert code == 2 and "h.csv" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["scan", "bogus"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["scan", "convexity", "--tol", "-1"])
    assert exc.value.code == 2


def test_module_entry_point(pair):
    out = subprocess.run([sys.executable, "-m", "qchi2", "eval", *pair], capture_output=True,
                         text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["chi2"] == pytest.approx(1 / 3)
