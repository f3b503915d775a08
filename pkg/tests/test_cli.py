import json
import os

import pytest

from tfcolor.cli import main
from tfcolor.graph import parse_dimacs, petersen_graph, write_dimacs


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def petersen_col(tmp_path):
    path = tmp_path / "petersen.col"
    path.write_text(write_dimacs(petersen_graph()))
    return str(path)


def test_count_petersen(capsys, petersen_col):
    code, out, _ = run(capsys, "count", "--dimacs", petersen_col, "--k", "3")
    assert code == 0 and out.strip() == "120"


def test_bound(capsys):
    code, out, _ = run(capsys, "bound", "--delta", "1000000", "--eps", "1", "--t", "100")
    assert code == 0
    assert "bound 139.819" in out and "ell 190.868" in out
    code, out, _ = run(capsys, "bound", "--sweep", "1e4,1e6,1e9,1e12", "--t", "100", "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[0].startswith("delta,") and len(rows) == 5
    assert [r.split(",")[-1] for r in rows[1:]] == ["0.250455", "0.732542", "6.74535", "88.4377"]
    code, out, _ = run(capsys, "bound", "--delta", "1e6", "--eps-loglog", "2", "--t", "100")
    assert code == 0


def test_verify_small_corpus(capsys, tmp_path):
    out_path = tmp_path / "report.jsonl"
    code, _, err = run(capsys, "verify", "--corpus", "all-n4;k3", "--k", "3", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines and all(json.loads(x)["status"] != "fail" for x in lines)
    assert json.loads(err)["theorem_failures"] is False


def test_verify_csv_byte_identical(capsys, tmp_path):
    outs = []
    for i in range(2):
        p = tmp_path / f"r{i}.csv"
        assert run(capsys, "verify", "--corpus", "random:n=6,p=0.5,count=2", "--seed", "3",
                   "--format", "csv", "--out", str(p))[0] == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]


def test_gen_roundtrip(capsys, tmp_path):
    code, out, _ = run(capsys, "gen", "random", "--n", "9", "--p", "0.4", "--seed", "5")
    assert code == 0 and out.startswith("c tfcolor")
    g = parse_dimacs(out)
    code2, out2, _ = run(capsys, "gen", "random", "--n", "9", "--p", "0.4", "--seed", "5")
    assert out2 == out and g.n == 9
    code, out, _ = run(capsys, "gen", "mycielski", "--depth", "2", "--format", "json")
    assert json.loads(out)["n"] == 11
    path = tmp_path / "g.json"
    path.write_text(out)
    assert run(capsys, "count", "--json", str(path), "--k", "3")[1].strip() == "0"


def test_poly_ratio_sample_coupon(capsys):
    assert run(capsys, "poly", "--graph", "k2")[1].strip() == "x^2 - x"
    code, out, _ = run(capsys, "poly", "--graph", "c5", "--format", "json")
    assert json.loads(out)["coefficients"] == ["0", "4", "-10", "10", "-5", "1"]
    assert run(capsys, "ratio", "--graph", "star3", "--k", "3", "--vertex", "0")[1].strip() == "8/9"
    code, out, _ = run(capsys, "ratio", "--graph", "p3", "--k", "3", "--ell", "2")
    rows = [json.loads(x) for x in out.splitlines()]
    assert rows[0]["ratio"] == "2/1" and rows[0]["at_least_ell"] is True
    code, out, _ = run(capsys, "sample", "--graph", "c5", "--k", "3", "--draws", "3", "--seed", "1")
    draws = [json.loads(x) for x in out.splitlines()]
    assert len(draws) == 3 and all(d["probability"] == "1/30" for d in draws)
    assert run(capsys, "sample", "--graph", "c5", "--k", "3", "--draws", "3", "--seed", "1")[1] == out
    code, out, _ = run(capsys, "sample", "--graph", "p3", "--k", "3", "--vertex", "0", "--exact")
    assert json.loads(out)["mean_available"] == "2/1"
    code, out, _ = run(capsys, "sample", "--graph", "c6", "--k", "4", "--vertex", "0", "--draws", "20",
                       "--sampler", "glauber")
    assert code == 0 and json.loads(out)["exact"] is False
    code, out, _ = run(capsys, "coupon", "--lists", '{"k": 3, "lists": [[1, 2], [2, 3]]}', "--mc-samples", "100")
    data = json.loads(out)
    assert data["expectation"] == "5/4" and data["variance"] == "3/16"
    assert data["pmf"] == {"1": "3/4", "2": "1/4"}


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "count", "--graph", "c5")[0] == 2
    assert run(capsys)[0] == 2
    assert run(capsys, "count", "--graph", "nosuch", "--k", "3")[0] == 2
    bad = tmp_path / "bad.col"
    bad.write_text("p edge 2 1\ne 1 1\n")
    code, _, err = run(capsys, "count", "--dimacs", str(bad), "--k", "3")
    assert code == 2 and "line 2" in err
    assert run(capsys, "--budget", "max_vertices=5", "count", "--graph", "petersen", "--k", "3")[0] == 3
    assert run(capsys, "sample", "--graph", "k3", "--k", "2")[0] == 2


def test_env_budget(capsys, monkeypatch):
    monkeypatch.setenv("TFCOLOR_BUDGET", "max_vertices=4")
    assert run(capsys, "count", "--graph", "c5", "--k", "3")[0] == 3


@pytest.mark.skipif(not os.environ.get("TFCOLOR_SLOW"), reason="several minutes; set TFCOLOR_SLOW=1")
def test_verify_all_n6(capsys, tmp_path):
    code, _, _ = run(capsys, "verify", "--corpus", "all-n6", "--k", "3", "--out", str(tmp_path / "report.jsonl"))
    assert code == 0
