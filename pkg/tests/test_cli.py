import json

import pytest

from clambsat import bench, fixtures
from clambsat.cli import build_parser, main
from clambsat.cnf import evaluate, read_dimacs

F2 = "builtin:f2"
U100 = "builtin:uf50-0100-surrogate"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_solve_f2(capsys, f2):
    code, out, _ = run_cli(capsys, "solve", "--algo", "cl1", "--cnf", F2, "--seed", "7")
    assert code == 0
    sol = next(line.split()[-1] for line in out.splitlines() if line.startswith("solution:"))
    assert evaluate(f2, [int(c) for c in sol]).satisfied
    assert "seed: 7" in out


def test_solve_cutoff_exit_1(capsys):
    code, out, _ = run_cli(capsys, "solve", "--algo", "cl1", "--cnf", F2, "--max-iters", "0")
    assert code == 1 and "status: timeout" in out


def test_solve_missing_file(capsys, tmp_path):
    code, _, err = run_cli(capsys, "solve", "--cnf", str(tmp_path / "missing.cnf"))
    assert code == 2 and "error" in err


def test_solve_bad_cnf(capsys, tmp_path):
    p = tmp_path / "bad.cnf"
    p.write_text("p cnf 2 1\n1 5 0\n")
    code, _, err = run_cli(capsys, "solve", "--cnf", str(p))
    assert code == 2 and "line 2" in err


@pytest.mark.parametrize("argv", [
    ["solve", "--cnf", F2, "--algo", "cl2", "--p1", "0.1"],
    ["solve", "--cnf", F2, "--algo", "probsat", "--p5", "0.1"],
    ["solve", "--cnf", F2, "--algo", "cl1", "--attempt-on", "free"],
    ["solve", "--cnf", F2, "--seed", "-1"],
    ["bench", "--cnf", F2, "--out", "x.csv", "--trials", "0"],
    ["sweep", "--cnf", F2, "--param", "p4", "--values", "0.5"],
    ["polymer", "--base", F2, "--h", "0", "--out", "x.cnf"],
    ["frobnicate"],
    [],
])
def test_usage_errors(capsys, tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_solve_trace_and_script(capsys, tmp_path):
    trace = tmp_path / "t.tsv"
    sched = fixtures._data("f2_trace.sched")
    code, out, _ = run_cli(capsys, "solve", "--cnf", F2, "--script", str(sched), "--max-iters", "10",
                           "--keep-going", "--trace", str(trace))
    assert code == 0
    assert "satisfied at t=3: 11110" in out and "satisfied at t=7: 01110" in out
    lines = trace.read_text().splitlines()
    assert lines[0] == "t\tx\tcontra" and lines[4] == "3\t11110\t00000" and len(lines) == 12


def test_script_too_short(capsys, tmp_path):
    p = tmp_path / "s.txt"
    p.write_text("0\n1\n")
    assert run_cli(capsys, "solve", "--cnf", F2, "--script", str(p))[0] == 2


def test_polymer_header(capsys, tmp_path):
    out = tmp_path / "p4.cnf"
    code, _, _ = run_cli(capsys, "polymer", "--base", U100, "--h", "4", "--out", str(out))
    assert code == 0
    assert out.read_text().splitlines()[0] == "p cnf 200 872"
    assert read_dimacs(out).num_clauses == 872


def _body(path):
    return [line for line in path.read_text().splitlines() if not line.startswith("#")]


def test_bench_csv_and_determinism_across_jobs(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    common = ["bench", "--algo", "cl2", "--cnf", U100, "--trials", "500", "--seed", "1", "--max-iters", "20000"]
    assert run_cli(capsys, *common, "--out", str(a), "--jobs", "1")[0] == 0
    assert run_cli(capsys, *common, "--out", str(b), "--jobs", "8")[0] == 0
    assert _body(a) == _body(b)
    assert len(_body(a)) == 501


def test_scaling_then_fit(capsys, tmp_path):
    csv_path, fit_path = tmp_path / "s.csv", tmp_path / "fit.json"
    code, out, _ = run_cli(capsys, "scaling", "--base", F2, "--h", "1,2,4", "--trials", "20", "--out", str(csv_path))
    assert code == 0 and "probsat" in out
    recs = bench.read_csv(csv_path.read_text())
    assert {r.n_vars for r in recs} == {5, 10, 20}
    assert run_cli(capsys, "fit", "--in", str(csv_path), "--model", "log")[0] == 2
    code, out, _ = run_cli(capsys, "fit", "--in", str(csv_path), "--model", "log", "--algo", "cl2",
                           "--out", str(fit_path))
    assert code == 0
    doc = json.loads(fit_path.read_text())
    assert set(doc) == {"model", "a", "b", "r2", "rss"} and doc["model"] == "log"


def test_sweep_table(capsys):
    code, out, _ = run_cli(capsys, "sweep", "--algo", "cl1", "--cnf", F2, "--param", "p3",
                           "--values", "0.5,0.9", "--trials", "30")
    assert code == 0
    assert out.splitlines()[0].split()[0] == "p3" and len(out.splitlines()) == 3


def test_fit_missing_input(capsys, tmp_path):
    assert run_cli(capsys, "fit", "--in", str(tmp_path / "none.csv"), "--model", "linear")[0] == 2


def test_help_documents_defaults():
    text = build_parser()._subparsers._group_actions[0].choices["bench"].format_help()
    for needle in ("1/(2N)", "0.9", "0.95", "0.2", "2.38", "1000000", "CLAMBSAT_JOBS"):
        assert needle in text
