import csv
import json

import pytest

from hybriddp.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, RunReport, main, read_records
from hybriddp.instances import ParseError, generate_random, render_instance


def records(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


@pytest.fixture
def tsp_file(tmp_path):
    path = tmp_path / "k8.txt"
    path.write_text(render_instance(generate_random("tsp", 8, 7, wmin=1, wmax=9)))
    return path


def test_solve_both_agree(tsp_file, capsys):
    assert main(["--format", "records", "solve", "tsp", str(tsp_file)]) == EXIT_OK
    (rec,) = records(capsys.readouterr().out)
    assert rec["agree"] is True and rec["seed"] == 0
    rep = RunReport.from_record(rec)
    assert rep.problem == "tsp" and rep.classical == rep.hybrid
    assert set(rep.ledger) >= {"quantum_cost", "classical_ops"}


def test_solve_table_format(tsp_file, capsys):
    assert main(["solve", "tsp", str(tsp_file), "--engine", "classical"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith("problem")
    assert "classical" in out


def test_malformed_file_names_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("graph 3\n0 1\n0 x\n")
    assert main(["solve", "bandwidth", str(path)]) == EXIT_INPUT
    assert "line 3" in capsys.readouterr().err


def test_missing_file(tmp_path, capsys):
    assert main(["solve", "tsp", str(tmp_path / "nope.txt")]) == EXIT_INPUT
    assert "cannot read" in capsys.readouterr().err


def test_hypercube_full_cube(tmp_path, capsys):
    path = tmp_path / "q10.txt"
    path.write_text(render_instance(generate_random("hypercube", 10, 0, density=1.0)))
    assert main(["--format", "records", "solve", "hypercube", str(path), "--engine", "hybrid"]) == EXIT_OK
    (rec,) = records(capsys.readouterr().out)
    assert rec["hybrid"] is True and rec["path_taken"] == "hybrid"


def test_generate_then_solve_records(tmp_path, capsys):
    assert main(["--seed", "5", "--format", "records", "generate", "setcover", "8", "--count", "3",
                 "--param", "m=10"]) == EXIT_OK
    gen = capsys.readouterr().out
    assert [r["seed"] for r in records(gen)] == [5, 6, 7]
    path = tmp_path / "stream.jsonl"
    path.write_text(gen)
    assert main(["--format", "records", "solve", "setcover", str(path)]) == EXIT_OK
    out = records(capsys.readouterr().out)
    assert [r["seed"] for r in out] == [5, 6, 7]
    assert all(r["agree"] for r in out)


def test_generate_to_directory(tmp_path):
    assert main(["generate", "graph", "6", "--count", "2", "--out", str(tmp_path / "inst")]) == EXIT_OK
    assert len(list((tmp_path / "inst").iterdir())) == 2


def test_generate_bad_param(capsys):
    assert main(["generate", "tsp", "40"]) == EXIT_INPUT
    with pytest.raises(SystemExit):
        main(["generate", "tsp", "5", "--param", "novalue"])


def test_optimize_gamma(capsys):
    assert main(["--format", "records", "optimize", "gamma", "--k", "6"]) == EXIT_OK
    (rec,) = records(capsys.readouterr().out)
    assert rec["gamma"] == pytest.approx(1.816905, abs=1e-4)
    assert rec["residual"] < 1e-9


@pytest.mark.parametrize(
    "target,key,want,tol",
    [("mu0", "mu0", 1.734622, 1e-4), ("tsp", "exponent", 0.788595, 1e-5), ("bandwidth", "base", 2.9454, 5e-4),
     ("warmup", "base", 1.755, 1e-3)],
)
def test_optimize_targets(target, key, want, tol, capsys):
    assert main(["--format", "records", "optimize", target]) == EXIT_OK
    (rec,) = records(capsys.readouterr().out)
    assert rec[key] == pytest.approx(want, abs=tol)


def test_optimize_gamma_mu_needs_mu(capsys):
    assert main(["optimize", "gamma_mu"]) == EXIT_INPUT
    assert main(["--format", "records", "optimize", "gamma_mu", "--mu", "1.8"]) == EXIT_OK
    assert records(capsys.readouterr().out)[0]["gamma_mu"] == pytest.approx(1.7568, abs=1e-3)


def test_optimize_curve_csv(tmp_path, capsys):
    out = tmp_path / "curve.csv"
    assert main(["optimize", "curve", "--out", str(out)]) == EXIT_OK
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["mu", "gamma_mu"] and len(rows) == 32
    assert "wrote 31 rows" in capsys.readouterr().out


def test_optimize_bad_grid(capsys):
    assert main(["optimize", "curve", "--grid", "2:1:0.1"]) == EXIT_INPUT


def test_verify_bounds(capsys):
    assert main(["--format", "records", "verify", "bounds", "--n", "12"]) == EXIT_OK
    out = records(capsys.readouterr().out)
    assert {r["check"] for r in out} == {"entropy-bound", "gamma-mu-ratio", "valid-pairs"}
    assert all(r["passed"] == r["total"] for r in out)


def test_verify_answers_subset(capsys):
    assert main(["--seed", "9", "--format", "records", "verify", "answers", "--problems", "tsp,fas",
                 "--count", "4", "--n", "8"]) == EXIT_OK
    out = records(capsys.readouterr().out)
    assert [r["check"] for r in out] == ["tsp", "fas"] and all(r["seed"] == 9 for r in out)


def test_verify_unknown_problem(capsys):
    assert main(["verify", "answers", "--problems", "chess"]) == EXIT_INPUT
    assert "unknown problem" in capsys.readouterr().err


def test_disagreement_exits_one(tsp_file, monkeypatch, capsys):
    from hybriddp import cli

    monkeypatch.setattr(cli, "solve_classical", lambda problem, inst, args: -1)
    assert main(["solve", "tsp", str(tsp_file)]) == EXIT_FAIL


def test_bad_threads(capsys):
    assert main(["--threads", "0", "optimize", "mu0"]) == EXIT_INPUT


def test_read_records_reports_line():
    with pytest.raises(ParseError) as info:
        read_records('{"a": 1}\n\nnot json\n')
    assert info.value.line == 3
