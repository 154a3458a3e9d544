"""Command-line front-end: subcommands, exit codes, reproducible CSV."""

import json
import math

import pytest

from realeig.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_exact_prints_registry(capsys):
    code, out, _ = run(capsys, "exact")
    assert code == 0
    assert "cauchy" in out and "0.750000000" in out
    assert "laplace" in out and "0.733333333" in out
    assert "beta_nu_1" in out


def test_exact_csv_export(capsys, tmp_path):
    path = tmp_path / "registry.csv"
    code, out, _ = run(capsys, "exact", "--output", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "label,value,provenance,tolerance,category"
    assert any(line.startswith("uniform,") for line in lines)


@pytest.mark.parametrize("argv,expected,tol", [
    (["quad", "--family", "gamma", "--gamma", "0.5", "--route", "conv"],
     0.784155, 1e-5),
    (["quad", "--family", "powerlaw", "--a", "2"], 0.7076005, 1e-6),
    (["quad", "--family", "uniform", "--route", "cf"], 0.680556, 1e-5),
])
def test_quad_reference_values(capsys, argv, expected, tol):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    value = float(out.split("P=")[1].split()[0])
    assert abs(value - expected) < tol


def test_quad_unsupported_exit_code(capsys):
    code, _, err = run(capsys, "quad", "--family", "beta", "--mu", "1",
                       "--nu", "0", "--route", "cf")
    assert code == 3
    assert "unsupported" in err


def test_quad_bad_params_exit_code(capsys):
    code, _, _ = run(capsys, "quad", "--family", "powerlaw", "--a", "0.2")
    assert code == 4


def test_mc_sweep_csv_and_manifest(capsys, tmp_path):
    cfg = {"n": 2, "K": 1, "spec": {"family": "gaussian"}, "samples": 20000,
           "seed": 7, "K_sweep": [1, 2, 4]}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_csv = tmp_path / "out.csv"
    manifest = tmp_path / "manifest.json"
    code, out, _ = run(capsys, "mc", str(cfg_path), "--output", str(out_csv),
                       "--manifest", str(manifest))
    assert code == 0
    lines = out_csv.read_text().splitlines()
    assert len(lines) == 1 + 6  # k in {0,2} for each of three K values
    # phat(all real) rises with K
    import csv

    with open(out_csv) as fh:
        phats = {int(r["K"]): float(r["phat"]) for r in csv.DictReader(fh)
                 if r["k"] == "2"}
    assert phats[1] < phats[2] < phats[4]
    assert abs(phats[1] - 1.0 / math.sqrt(2.0)) < 0.01
    man = json.loads(manifest.read_text())
    assert man["seed"] == 7 and man["workers"] >= 1
    assert str(out_csv) in man["outputs"]

    # byte-identical re-run
    first = out_csv.read_bytes()
    code, _, _ = run(capsys, "mc", str(cfg_path), "--output", str(out_csv))
    assert code == 0 and out_csv.read_bytes() == first


def test_mc_schema_violation_exit_code(capsys, tmp_path):
    cfg_path = tmp_path / "bad.json"
    cfg_path.write_text(json.dumps({"n": 2, "K": 1,
                                    "spec": {"family": "hyperbolic"}}))
    code, _, err = run(capsys, "mc", str(cfg_path), "--output",
                       str(tmp_path / "x.csv"))
    assert code == 4


def test_fit_pipeline_and_model_violation(capsys, tmp_path):
    cfg = {"n": 2, "K": 1, "spec": {"family": "gaussian"}, "mode": "hadamard",
           "samples": 30000, "seed": 9, "K_sweep": [1, 2, 4, 8, 16, 32]}
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    out_csv = tmp_path / "had.csv"
    assert run(capsys, "mc", str(cfg_path), "--output", str(out_csv))[0] == 0
    code, out, _ = run(capsys, "fit", str(out_csv), "--pinf", "0.846")
    assert code == 0
    theta = float(out.split("theta=")[1].split()[0])
    assert 0.3 < theta < 1.1
    code, _, err = run(capsys, "fit", str(out_csv), "--pinf", "0.70")
    assert code == 5
    assert "model violation" in err


def test_correlations_command(capsys):
    code, out, _ = run(capsys, "correlations", "--family", "gaussian",
                       "--K", "1", "--samples", "50000", "--seed", "3")
    assert code == 0
    c1 = float(out.split("C_1 = ")[1].split()[0])
    assert abs(c1 - 1.0) < 0.05
