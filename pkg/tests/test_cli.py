import csv
import io
import json
import subprocess
import sys

import numpy as np
import pytest

from cylwig.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_star_prints_quantum_term(capsys):
    code, out, _ = run(["star", "p", "cos(t)"], capsys)
    assert code == 0 and out == "p*cos(t) + (0,0.5)*sin(t)\n"


def test_star_commutator_and_expansion(capsys):
    code, out, _ = run(["star", "p", "cos(t)", "--op", "commutator", "--hbar", "2"], capsys)
    assert code == 0 and out == "(0,2)*sin(t)\n"
    code, out, _ = run(["star", "p^2", "cos(t)", "--expand", "2"], capsys)
    assert out.splitlines() == ["hbar^0: p^2*cos(t)", "hbar^1: (0,1)*p*sin(t)",
                                "hbar^2: 0.25*cos(t)"]


def test_check_kernel_suite_passes(capsys):
    code, out, _ = run(["check", "--suite", "kernel"], capsys)
    assert code == 0
    assert out.strip().endswith("6/6 passed")
    assert all(line.startswith("PASS") for line in out.splitlines()[:-1])


def test_wigner_basis_zero_column(capsys):
    code, out, _ = run(["wigner", "--state", "basis:0", "--grid", "t=64,p=-4:4:161"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 64 * 161
    at_zero = [r for r in rows if float(r["theta"]) == 0.0]
    p = np.array([float(r["pbar"]) for r in at_zero])
    v = np.array([float(r["value"]) for r in at_zero])
    assert np.allclose(v, np.sinc(p) / (2 * np.pi), atol=1e-15)


def test_wigner_output_is_byte_identical(tmp_path, capsys):
    args = ["wigner", "--state", "gaussian:0.5,1.5,0.3", "--grid", "t=16,p=-3:3:31", "--n-max", "8"]
    run(args + ["-o", str(tmp_path / "a.csv")], capsys)
    run(args + ["-o", str(tmp_path / "b.csv")], capsys)
    assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()
    run(args + ["--format", "json", "-o", str(tmp_path / "a.json")], capsys)
    run(args + ["--format", "json", "-o", str(tmp_path / "b.json")], capsys)
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_spectrum_table(capsys):
    code, out, _ = run(["spectrum", "--levels", "3", "--format", "json"], capsys)
    assert code == 0 and json.loads(out) == {"energies": [0.0, 0.5, 0.5]}
    code, out, _ = run(["spectrum", "--levels", "2", "--gamma", "0.5", "--amplitude", "1"], capsys)
    lines = out.splitlines()
    assert lines[0] == "index,energy" and len(lines) == 3


def test_weyl_round_trip_via_files(tmp_path, capsys):
    code, out, _ = run(["weyl", "quantize", "p*cos(t) + 0.5*sin(2t)", "--n-max", "6"], capsys)
    assert code == 0
    (tmp_path / "m.json").write_text(out)
    code, out, _ = run(["weyl", "symbol", str(tmp_path / "m.json")], capsys)
    assert code == 0 and out == "p*cos(t) + 0.5*sin(2t)\n"


def test_weyl_symbol_non_exact_exits_1(tmp_path, capsys):
    from cylwig.basis import BandedOperator
    n = 5
    op = BandedOperator(n, np.diag(np.exp(np.arange(-n, n + 1) / 2.0)).astype(complex), bandwidth=0)
    (tmp_path / "m.json").write_text(op.to_json())
    code, out, err = run(["weyl", "symbol", str(tmp_path / "m.json")], capsys)
    assert code == 1 and "non-exact" in err and out == ""


def test_evolve_with_residual_report(tmp_path, capsys):
    code, out, _ = run(["evolve", "--state", "gaussian:0,1.5,0", "--gamma", "0.5", "--amplitude",
                        "1", "--n-max", "20", "--steps", "3", "--grid", "t=16,p=-3:3:21",
                        "--liouville-residual", "-o", str(tmp_path / "traj.jsonl")], capsys)
    assert code == 0
    report = json.loads(out)
    assert report["max_abs"] < 1e-9 and report["times"] == [0.0, 0.5, 1.0]
    assert len((tmp_path / "traj.jsonl").read_text().splitlines()) == 3


@pytest.mark.parametrize("argv", [
    ["star", "p", "cos(t"],
    ["star", "sin(0t)", "p"],
    ["wigner", "--state", "nowhere:1"],
    ["wigner", "--state", "basis:x"],
    ["wigner", "--state", "basis:0", "--grid", "garbage"],
    ["spectrum", "--hbar", "-1"],
    ["frobnicate"],
    ["weyl", "symbol", "/nonexistent/m.json"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# pendulum\nhbar = 2\nlevels = 2\nformat = json\n")
    code, out, _ = run(["spectrum", "--config", str(cfg)], capsys)
    assert json.loads(out) == {"energies": [0.0, 2.0]}
    code, out, _ = run(["spectrum", "--config", str(cfg), "--hbar", "1"], capsys)
    assert json.loads(out) == {"energies": [0.0, 0.5]}
    cfg.write_text("colour = blue\n")
    assert run(["spectrum", "--config", str(cfg)], capsys)[0] == 2


def test_module_entry_point_and_threads_env():
    env_code = ("import os; os.environ['CYLWIG_THREADS'] = '1'; os.environ.pop('OMP_NUM_THREADS', None);"
                "import cylwig; print(os.environ['OMP_NUM_THREADS'])")
    out = subprocess.run([sys.executable, "-c", env_code], capture_output=True, text=True)
    assert out.stdout.strip() == "1"
    res = subprocess.run([sys.executable, "-m", "cylwig", "star", "p", "p"], capture_output=True,
                         text=True)
    assert res.returncode == 0 and res.stdout == "p^2\n"
