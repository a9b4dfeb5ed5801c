import csv
import os
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from intrinsic_lp.cli import RunConfig, main, output_dir
from intrinsic_lp.grid_core import Grid, GridFunction, read_csv, write_csv

ROOT = Path(__file__).resolve().parents[1]
DEFAULT_CFG = ROOT / "configs" / "default.cfg"


@pytest.fixture
def small(tmp_path):
    g = Grid.uniform(-1, 1, 33)
    f = GridFunction.from_callable(g, lambda x: np.maximum(0, 1 - np.abs(x) / 0.6))
    z = GridFunction.constant(g, 0.0)
    b = GridFunction.from_callable(g, lambda x: np.log(1 / np.maximum(np.abs(x), g.h)))
    for name, fn in (("f", f), ("zero", z), ("b", b)):
        write_csv(fn, tmp_path / f"{name}.csv")
    cfg = tmp_path / "small.cfg"
    cfg.write_text("grid_n = 33\n")
    return tmp_path


def run(*argv):
    return main([str(a) for a in argv])


def test_default_config_parses():
    cfg = RunConfig.load(str(DEFAULT_CFG))
    assert cfg.grid_n == 129 and cfg.lam == 4.0 and cfg.growth["family"] == "power"


def test_verify_t21_default_config(tmp_path):
    assert run("verify", "--suite", "t2.1", "--config", DEFAULT_CFG, "--out", tmp_path) == 0
    rows = list(csv.DictReader(open(tmp_path / "report.csv")))
    assert rows and all(r["suite"] == "t2.1" and r["pass"] == "true" for r in rows)
    assert (tmp_path / "report_summary.csv").exists() and (tmp_path / "hypotheses.csv").exists()


def test_verify_byte_identical(tmp_path):
    for d in ("a", "b"):
        assert run("verify", "--suite", "t4.1,cor-g", "--config", DEFAULT_CFG, "--out", tmp_path / d) == 0
    for name in ("report.csv", "report_summary.csv", "hypotheses.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_verify_jobs_matches_serial(tmp_path):
    assert run("verify", "--suite", "t2.1,t4.1", "--out", tmp_path / "s") == 0
    assert run("verify", "--suite", "t2.1,t4.1", "--jobs", 2, "--out", tmp_path / "p") == 0
    assert (tmp_path / "s" / "report.csv").read_bytes() == (tmp_path / "p" / "report.csv").read_bytes()


def test_strict_hypothesis_failure(tmp_path):
    cfg = tmp_path / "lam.cfg"
    cfg.write_text("lambda = 2\n")
    assert run("verify", "--suite", "t2.3", "--config", cfg, "--out", tmp_path) == 0
    rows = list(csv.DictReader(open(tmp_path / "report.csv")))
    assert all(r["pass"] == "skipped_hypothesis" for r in rows)
    assert run("verify", "--suite", "t2.3", "--config", cfg, "--out", tmp_path, "--strict") == 3


def test_config_errors(tmp_path, small):
    assert run("verify", "--config", tmp_path / "missing.cfg", "--out", tmp_path) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("bogus_key = 1\n")
    assert run("verify", "--config", bad, "--out", tmp_path) == 2
    bad.write_text("alpha = 3\n")
    assert run("verify", "--config", bad, "--out", tmp_path) == 2
    assert run("norm", "--input", tmp_path / "nope.csv", "--out", tmp_path) == 2
    assert run("verify", "--suite", "t9.9", "--out", tmp_path) == 2
    assert run("norm", "--input", small / "f.csv", "--balls", "chain:0;0:0.5", "--out", tmp_path) == 2


def test_operator_zero_function(small):
    out = small / "s.csv"
    assert run("operator", "--op", "s_alpha", "--input", small / "zero.csv", "--output", out,
               "--config", small / "small.cfg") == 0
    res = read_csv(out)
    assert res.grid.size == 33 and not np.any(res.values)


@pytest.mark.parametrize("op", ["s_alpha", "g_alpha", "g_star", "sab", "comm_s", "comm_g", "comm_gstar"])
def test_operator_every_op(small, op):
    out = small / f"{op}.csv"
    extra = ["--b", small / "b.csv"] if op.startswith("comm") else []
    assert run("operator", "--op", op, "--input", small / "f.csv", "--output", out, "--beta", 2,
               "--lambda", 4, *extra) == 0
    res = read_csv(out)
    assert np.all(res.values >= 0) and np.any(res.values > 0)


def test_operator_lp_mode(tmp_path):
    g = Grid.uniform(-1, 1, 9)
    write_csv(GridFunction.from_callable(g, lambda x: x**2), tmp_path / "f.csv")
    out = tmp_path / "g.csv"
    assert run("operator", "--op", "g_alpha", "--mode", "lp", "--input", tmp_path / "f.csv",
               "--output", out) == 0
    lp = read_csv(out).values
    assert run("operator", "--op", "g_alpha", "--mode", "dict", "--input", tmp_path / "f.csv",
               "--output", out) == 0
    assert np.all(read_csv(out).values <= lp + 1e-9)


def test_norm_output(small):
    out = small / "n"
    assert run("norm", "--input", small / "f.csv", "--out", out, "--config", small / "small.cfg") == 0
    rows = list(csv.reader(open(out / "norm.csv")))
    assert rows[0] == ["cx", "r", "ball_norm"]
    assert rows[-1][0] == "TOTAL"
    assert float(rows[-1][-1]) == max(float(r[-1]) for r in rows[1:-1])
    for space in ("bmo", "classical_morrey", "campanato", "campanato_star", "l_phi", "weighted_orlicz_morrey"):
        assert run("norm", "--space", space, "--input", small / "f.csv", "--out", out,
                   "--balls", "chain:0:0.5,0.25") == 0


def test_apcheck(small):
    out = small / "ap"
    assert run("apcheck", "--q", 2, "--r", 2, "--out", out, "--config", small / "small.cfg") == 0
    rows = list(csv.reader(open(out / "apcheck.csv")))
    assert rows[0] == ["check", "param", "fitted_constant", "pass"]
    assert all(r[3] == "true" for r in rows[1:])


def test_corpus_written(tmp_path):
    assert run("corpus", "--out", tmp_path) == 0
    files = sorted((tmp_path / "corpus").glob("*.csv"))
    names = {p.stem for p in files}
    assert "manifest" in names and "log" in names and len(files) == 22
    f = read_csv(tmp_path / "corpus" / "log.csv")
    assert f.grid.size == 129


def test_output_dir_precedence(monkeypatch):
    cfg = RunConfig(out="from_cfg")
    monkeypatch.delenv("ILP_OUT", raising=False)
    assert output_dir(None, cfg) == Path("from_cfg")
    assert output_dir(None, RunConfig()) == Path("ilp_out")
    monkeypatch.setenv("ILP_OUT", "from_env")
    assert output_dir(None, cfg) == Path("from_env")
    assert output_dir("flag", cfg) == Path("flag")


def test_help_lists_flags():
    res = subprocess.run([sys.executable, "-m", "intrinsic_lp", "verify", "--help"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    for flag in ("--suite", "--config", "--out", "--jobs", "--strict"):
        assert flag in res.stdout
