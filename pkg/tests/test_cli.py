import json
import math

import pytest

from multigame_ne.cli import main

from conftest import corpus_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", corpus_path("sadp.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["dgpd"] == [9, 5, 4, 2, 0] and doc["dgpd_violations"] == []
    assert doc["pure_ne_guaranteed"] is True


def test_validate_bad_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(corpus_path("table13_G.json").read_text().replace('"3/10"', '"1/10"', 1))
    code, _, err = run(capsys, "validate", bad)
    assert code == 2
    assert "agent 1" in err


def test_solve_continuous(capsys):
    code, out, _ = run(capsys, "solve", corpus_path("sadp.json"), "--method", "continuous")
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["theta1"] - (5 - math.sqrt(17)) / 2) < 1e-9


def test_solve_dgpd(capsys):
    code, out, _ = run(capsys, "solve", corpus_path("dgpd_sixtieths.json"))
    assert code == 0
    doc = json.loads(out)
    assert doc["lambda"] == "1/4" and doc["mu"] == "1/5"
    assert {"77/321", "115/481", "229/961"} <= set(doc["candidates"])
    assert doc["solutions"][0]["regret"] == 0


def test_solve_general_exit_codes(capsys):
    code, out, _ = run(capsys, "solve", corpus_path("table13_G.json"), "--method", "general")
    assert code == 1 and json.loads(out)["solutions"] == []
    code, out, _ = run(capsys, "solve", corpus_path("table13_Gprime.json"), "--method", "general", "--all")
    assert code == 0
    sols = json.loads(out)["solutions"]
    assert [s["orientation"] for s in sols[0]["strategies"]] == ["CD", "CD"]


def test_solve_dgpd_on_non_dgpd_is_input_error(capsys):
    code, _, err = run(capsys, "solve", corpus_path("table13_G.json"), "--method", "dgpd")
    assert code == 2 and "not a DGPD" in err


def test_verify(capsys):
    f = corpus_path("table13_Gprime.json")
    code, out, _ = run(capsys, "verify", f, "--theta1", "0.6", "--theta2", "0.3", "--orient1", "CD", "--orient2", "CD")
    assert code == 0 and json.loads(out)["regret"] == 0
    code, out, _ = run(capsys, "verify", f, "--theta1=-inf", "--theta2", "inf")
    assert code == 1 and json.loads(out)["equilibrium"] is False


def test_oracle(capsys):
    assert run(capsys, "oracle", corpus_path("table13_G.json"))[0] == 1
    code, out, _ = run(capsys, "oracle", corpus_path("table13_Gprime.json"))
    assert code == 0 and json.loads(out)["solutions"]


def test_classify_is_deterministic(capsys):
    a = run(capsys, "classify", "--seeds", "0-5", "--configs", "10")
    b = run(capsys, "classify", "--seeds", "0-5", "--configs", "10")
    assert a[0] == 0 and a[1] == b[1]
    lines = a[1].strip().splitlines()
    assert lines[0] == "matrix_id,seed,configs,solved,label"
    assert len(lines) == 7


def test_avg_solutions(capsys):
    f = corpus_path("table13_G.json")
    code, out, _ = run(capsys, "avg-solutions", "--matrix-file", f, "--sizes", "1,3", "--trials", "5", "--seed", "2")
    assert code == 0
    assert out.splitlines()[0] == "size,mean_solutions"
    assert out == run(capsys, "avg-solutions", "--matrix-file", f, "--sizes", "1,3", "--trials", "5", "--seed", "2")[1]


def test_bench(capsys, tmp_path):
    dest = tmp_path / "bench.csv"
    code, out, _ = run(capsys, "bench", "--algo", "dgpd", "--sizes", "50,100", "--seed", "0", "--trials", "2", "--out", dest)
    assert code == 0
    assert dest.read_text() == out
    assert out.splitlines()[0] == "algo,n1,n2,mean_wall_time,mean_iterations"


def test_bad_arguments(capsys):
    assert run(capsys, "solve")[0] == 2
    assert run(capsys, "bench", "--algo", "quantum", "--sizes", "1", "--seed", "0")[0] == 2
    assert run(capsys, "solve", "/nonexistent.json")[0] == 2
