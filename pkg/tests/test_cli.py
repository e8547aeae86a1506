import json
import subprocess
import sys

import pytest

from aqcsat.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def cnf(tmp_path, capsys):
    path = tmp_path / "f.cnf"
    assert run(capsys, "gen", "--vars", 8, "--clauses", 34, "--seed", 4, "--out", path)[0] == 0
    return path


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "--vars", 5, "--clauses", 3, "--seed", 1)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "p cnf 5 3" and len(lines) == 4
    assert all(line.endswith(" 0") for line in lines[1:])


def test_solve_json(cnf, capsys):
    code, out, _ = run(capsys, "solve", cnf, "--json")
    data = json.loads(out)
    assert code == 0
    assert {"satisfiable", "dpll_decisions", "dpll_propagations"} <= set(data)


def test_solve_text(cnf, capsys):
    code, out, _ = run(capsys, "solve", cnf)
    assert code == 0 and out.split()[0] in {"SATISFIABLE", "UNSATISFIABLE"}


def test_parse_error_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 3 1\n1 2 0\n")
    code, _, err = run(capsys, "solve", bad)
    assert code == 2 and "line 2" in err


def test_missing_file_exit_4(tmp_path, capsys):
    assert run(capsys, "solve", tmp_path / "nope.cnf")[0] == 4


def test_too_many_qubits_exit_2(tmp_path, capsys):
    path = tmp_path / "big.cnf"
    run(capsys, "gen", "--vars", 15, "--clauses", 20, "--out", path)
    assert run(capsys, "spectrum", path)[0] == 2


def test_spectrum(cnf, capsys):
    code, out, _ = run(capsys, "spectrum", cnf, "--s", 1.0)
    data = json.loads(out)
    assert code == 0 and data["s"] == 1.0 and len(data["eigenvalues"]) == 256


def test_sweep_fit_and_histogram(cnf, tmp_path, capsys):
    sweep_path = tmp_path / "sweep.json"
    assert run(capsys, "sweep", cnf, "--points", 5, "--out", sweep_path)[0] == 0
    data = json.loads(sweep_path.read_text())
    assert data["n"] == 8 and data["m"] == 34 and len(data["spectra"]) == 5
    hist = tmp_path / "hist.csv"
    code, out, _ = run(capsys, "fit", sweep_path, "--histogram", hist)
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 6 and "q_max" in lines[-1]
    assert hist.read_text().startswith("bin_left,bin_right,count,brody_density_at_fit")


def test_baseline(capsys):
    code, out, _ = run(capsys, "baseline", "--n", 8, "--f-grid", "1,5", "--instances", 5)
    rows = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and [r["m"] for r in rows] == [8, 40]


def test_gp_validate_quick(capsys):
    code, out, _ = run(capsys, "gp-validate", "--quick")
    assert code == 0 and "goe_q" in json.loads(out)


def test_reproduce_and_plot(tmp_path, capsys):
    out_dir = tmp_path / "run"
    code, out, _ = run(capsys, "reproduce-fig2", "--n", 6, "--f-grid", "1,4", "--instances", 2,
                       "--points", 5, "--seed", 3, "--out-dir", out_dir)
    assert code == 0
    for name in ("config.json", "instances.jsonl", "fig2.csv", "fig2.svg", "fig2_dpll.svg"):
        assert (out_dir / name).exists()
    config = json.loads((out_dir / "config.json").read_text())
    assert config["n"] == 6 and config["f_grid"] == [1.0, 4.0] and config["seed"] == 3
    assert len((out_dir / "instances.jsonl").read_text().splitlines()) == 4

    code, _, _ = run(capsys, "plot", out_dir / "fig2.csv", "--out", tmp_path / "again")
    assert code == 0
    assert (tmp_path / "again.csv").read_text() == (out_dir / "fig2.csv").read_text()


def test_reproduce_config_file_and_bad_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 6, "f_grid": [2.0], "instances_per_f": 1, "interpolation_points": 3}))
    assert run(capsys, "reproduce-fig2", "--config", cfg, "--out-dir", tmp_path / "o")[0] == 0
    cfg.write_text(json.dumps({"n": 6, "colour": "red"}))
    assert run(capsys, "reproduce-fig2", "--config", cfg, "--out-dir", tmp_path / "o")[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "aqcsat.cli", "gen", "--vars", "4", "--clauses", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("p cnf 4 2")
