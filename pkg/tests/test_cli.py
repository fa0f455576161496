"""Tests for the command-line front end."""

import json
import os

import numpy as np
import pytest

from aclaw.cli import atomic_write, dump_json, main


def run_cli(args):
    return main(args)


def read(path):
    with open(path) as f:
        return f.read()


def test_dump_json_roundtrips():
    obj = {"a": 1, "b": 0.1, "c": [1.5, 2], "z": 0.5 + 0.25j,
           "flag": True, "none": None, "nan": float("nan")}
    text = dump_json(obj)
    parsed = json.loads(text)
    assert parsed["a"] == 1
    assert parsed["b"] == 0.1
    assert parsed["z"] == {"re": 0.5, "im": 0.25}
    assert parsed["flag"] is True
    assert parsed["nan"] is None
    assert parsed["none"] is None


def test_dump_json_seventeen_digits():
    text = dump_json({"x": 1.0 / 3.0})
    assert "0.33333333333333331" in text


def test_atomic_write_no_partial(tmp_path):
    path = tmp_path / "out.txt"
    atomic_write(str(path), "hello\n")
    assert read(path) == "hello\n"
    leftovers = [p for p in os.listdir(tmp_path) if p != "out.txt"]
    assert leftovers == []


def test_law_csv(tmp_path):
    out = tmp_path / "law.csv"
    code = run_cli(["law", "--z-grid", "default", "--n-re", "5", "--n-im", "4",
                    "--out", str(out)])
    assert code == 0
    lines = read(out).strip().split("\n")
    assert lines[0] == "re_z,im_z,re_m,im_m,h"
    assert len(lines) == 1 + 5 * 4
    for line in lines[1:]:
        re_z, im_z, re_m, im_m, h = map(float, line.split(","))
        assert im_m > 0 and 0 < h <= 1


def test_law_determinism(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert run_cli(["law", "--n-re", "4", "--n-im", "4", "--out", str(out)]) == 0
    assert read(a) == read(b)


def test_figure1_matches_parameter_list(tmp_path):
    out = tmp_path / "fig1.csv"
    code = run_cli(["figure1", "--rho", "0.2,0.02,0.002,0.0002",
                    "--lam-step", "0.5", "--out", str(out)])
    assert code == 0
    lines = read(out).strip().split("\n")
    assert lines[0] == "rho,lambda,sigma"
    rhos = {float(line.split(",")[0]) for line in lines[1:]}
    assert rhos == {0.2, 0.02, 0.002, 0.0002}


def test_figure2_with_curves(tmp_path):
    out = tmp_path / "fig2.csv"
    curves = tmp_path / "curves.csv"
    code = run_cli(["figure2", "--resolution", "21", "--out", str(out),
                    "--curves", str(curves)])
    assert code == 0
    assert read(out).startswith("re_m,im_m,quadrant")
    assert read(curves).startswith("curve,re_m,im_m")


def test_sample_and_reload(tmp_path):
    out = tmp_path / "pair.csv"
    code = run_cli(["sample", "--N", "6", "--seed", "3", "--out", str(out)])
    assert code == 0
    from aclaw.wigner import EnsembleSpec, load_pair, sample_pair
    pair = load_pair(out)
    direct = sample_pair(EnsembleSpec(n=6, ensemble="complex-gaussian", seed=3))
    np.testing.assert_array_equal(pair.u, direct.u)


def test_sd_report(tmp_path):
    out = tmp_path / "sd.json"
    code = run_cli(["sd", "--n-re", "4", "--n-im", "4", "--out", str(out)])
    assert code == 0
    rep = json.loads(read(out))
    assert rep["failures"] == 0
    row = rep["rows"][0]
    assert set(row) == {"z", "sd_residual", "radius", "lhs", "rhs",
                        "hypothesis_met", "holds"}
    assert all(r["sd_residual"] <= 1e-10 for r in rep["rows"])


def test_linearize_check(tmp_path):
    out = tmp_path / "lin.json"
    code = run_cli(["linearize-check", "--N", "8", "--seed", "2", "--out", str(out)])
    assert code == 0
    rep = json.loads(read(out))
    assert all(rep["verdicts"].values())


def test_verify_report_and_determinism(tmp_path):
    a, b = tmp_path / "v1.json", tmp_path / "v2.json"
    args = ["verify", "--N", "16", "--seed", "7", "--tau", "8", "--theta", "1",
            "--spacing", "4.0", "--n-re", "5", "--n-im", "4"]
    assert run_cli(args + ["--out", str(a)]) == 0
    assert run_cli(args + ["--out", str(b)]) == 0
    assert read(a) == read(b)
    rep = json.loads(read(a))
    assert rep["config"]["n"] == 16
    assert "version" in rep["config"]
    assert rep["k_stat"] >= 2.0


def test_semicircle_cli(tmp_path):
    out = tmp_path / "sc.json"
    code = run_cli(["semicircle", "--N", "32", "--seed", "1", "--spacing", "4.0",
                    "--out", str(out)])
    assert code == 0
    rep = json.loads(read(out))
    assert rep["x_empty_literal"] is True
    assert rep["max_identity_residual"] <= 1e-8


def test_deloc_cli(tmp_path):
    out = tmp_path / "deloc.json"
    code = run_cli(["deloc", "--N", "64", "--seed", "3", "--c-config", "0.75",
                    "--out", str(out)])
    assert code == 0
    rep = json.loads(read(out))
    assert rep["rho"] < 1
    assert all(r["holds"] for r in rep["rows"])


def test_deloc_determinism(tmp_path):
    # at this small N the bound itself may fail (exit 1); determinism is
    # about byte-identical reports and equal exit codes
    a, b = tmp_path / "d1.json", tmp_path / "d2.json"
    args = ["deloc", "--N", "32", "--seed", "3", "--c-config", "0.25"]
    code_a = run_cli(args + ["--out", str(a)])
    code_b = run_cli(args + ["--out", str(b)])
    assert code_a == code_b
    assert read(a) == read(b)


def test_tails_cli(tmp_path):
    out = tmp_path / "tails.json"
    csv = tmp_path / "tail.csv"
    code = run_cli(["tails", "--trials", "4000", "--out", str(out),
                    "--tail-csv", str(csv)])
    assert code == 0
    rep = json.loads(read(out))
    assert rep["theta_bound_holds"] is True
    assert all(r["holds"] for r in rep["whittle"])
    assert rep["quad_tail"]["decays"] is True
    assert read(csv).startswith("t,survival,fitted_bound")


def test_law_density_csv(tmp_path):
    out = tmp_path / "law.csv"
    dens = tmp_path / "density.csv"
    code = run_cli(["law", "--n-re", "3", "--n-im", "3", "--out", str(out),
                    "--density-out", str(dens), "--density-points", "41"])
    assert code == 0
    lines = read(dens).strip().split("\n")
    assert lines[0] == "t,density"
    vals = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert all(d >= 0 for _, d in vals)
    assert vals[0][1] == 0.0 and vals[-1][1] == 0.0  # outside the support


def test_usage_error_exit_code(tmp_path):
    out = tmp_path / "x.csv"
    code = run_cli(["figure1", "--rho", "2.5", "--out", str(out)])
    assert code == 2
    assert not out.exists()  # no partial output


def test_unknown_command_exits_two():
    with pytest.raises(SystemExit) as exc:
        run_cli(["frobnicate"])
    assert exc.value.code == 2
