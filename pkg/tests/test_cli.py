import json

import pytest

from hgturan.cli import main
from hgturan.core import read_hg


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv, expect",
    [
        (["sf_free", "--r", 3, "--t", 1, "--k", 3, "--n", 10], (3, 10)),
        (["steiner", "--t", 2, "--k", 3, "--n", 9], (3, 9)),
        (["lines", "--k", 2, "--n", 12], (2, 12)),
        (["er_lower", "--r", 2, "--k", 3], (2, None)),
        (["random", "--r", 4, "--n", 9, "--e", 20], (4, 9)),
        (["complete", "--r", 3, "--n", 6], (3, 6)),
        (["pattern", "--spec", "st:2,2,1"], (4, None)),
        (["full_star", "--n", 8], (4, 8)),
    ],
)
def test_gen(capsys, tmp_path, argv, expect):
    path = tmp_path / "g.hg"
    code, _, err = run(capsys, "gen", *argv, "-o", path)
    assert code == 0 and "e=" in err
    G = read_hg(path)
    assert G.r == expect[0]
    if expect[1] is not None:
        assert G.n == expect[1]


def test_gen_missing_argument(capsys):
    code, _, err = run(capsys, "gen", "steiner", "--n", 9)
    assert code == 2 and "--t" in err


def test_gen_to_stdout(capsys):
    code, out, _ = run(capsys, "gen", "complete", "--r", 2, "--n", 3)
    assert code == 0 and out.strip()


def test_find_found_and_exhausted(capsys, tmp_path):
    host = tmp_path / "h.hg"
    run(capsys, "gen", "complete", "--r", 3, "--n", 7, "-o", host)
    report = tmp_path / "rep.json"
    code, out, _ = run(capsys, "find", "st:2,2", "-i", host, "--json", report)
    assert code == 0 and "found" in out
    assert json.loads(report.read_text())["outcome"] == "found"
    code, out, _ = run(capsys, "find", "sf:3,2,9", "-i", host)
    assert code == 1


def test_find_missing_host(capsys, tmp_path):
    code, _, err = run(capsys, "find", "sf:3,1,2", "-i", tmp_path / "nope.hg")
    assert code == 2 and "nope.hg" in err


def test_oracle_ex_both_methods(capsys):
    vals = []
    for method in ("conflict", "dfs"):
        code, out, _ = run(capsys, "oracle", "ex", "--n", 6, "--pattern", "sf:3,2,2", "--method", method)
        assert code == 0
        vals.append(json.loads(out)["value"])
    assert vals == [4, 4]


def test_oracle_ex_budget_interval(capsys):
    code, out, _ = run(capsys, "oracle", "ex", "--n", 7, "--pattern", "sf:3,2,2", "--budget-nodes", 1)
    data = json.loads(out)
    assert code == 0 and data["value"] is None and data["interval"][0] <= 7 <= data["interval"][1]


def test_oracle_contains_and_sunflower(capsys, tmp_path):
    host = tmp_path / "h.hg"
    run(capsys, "gen", "steiner", "--t", 2, "--k", 3, "--n", 7, "-o", host)
    code, out, _ = run(capsys, "oracle", "contains", "--host", host, "--pattern", "sf:3,2,2")
    assert json.loads(out)["status"] == "absent"
    code, out, _ = run(capsys, "oracle", "sunflower", "--host", host, "--t", 1)
    assert json.loads(out)["value"] == 3


def test_oracle_unavoidable_and_f(capsys, tmp_path):
    code, out, _ = run(capsys, "oracle", "unavoidable", "--pattern", "sf:3,2,2", "--n", 7, "--e", 8)
    assert json.loads(out)["answer"] == "yes"
    wit = tmp_path / "w.hg"
    code, out, _ = run(capsys, "oracle", "f", "--r", 2, "--k", 3, "--witness", wit)
    data = json.loads(out)
    assert data["value"] == 7 and read_hg(wit).e == 6


def test_run_exit_codes(capsys, tmp_path):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"experiment": "erdos-rado", "grid": {"r": [1], "k": [3], "expect": [3]}}))
    out_path = tmp_path / "report.json"
    code, out, _ = run(capsys, "run", "--spec", good, "--out", out_path, "--csv", tmp_path / "r.csv")
    assert code == 0 and "1 pass" in out
    assert json.loads(out_path.read_text())["body"]["summary"]["pass"] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"experiment": "erdos-rado", "grid": {"r": [1], "k": [3], "expect": [4]}}))
    code, _, _ = run(capsys, "run", "--spec", bad, "--out", tmp_path / "b.json")
    assert code == 1


def test_run_invalid_spec(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"experiment": "nope"}))
    code, _, err = run(capsys, "run", "--spec", path)
    assert code == 2 and "nope" in err
    code, _, err = run(capsys, "run", "--spec", tmp_path / "missing.json")
    assert code == 2 and "missing.json" in err


def test_table(capsys, tmp_path):
    code, out, _ = run(capsys, "table", "--r", 3, "--n-max", 6, "--pattern", "sf=sf:3,2,2",
                       "--json", tmp_path / "t.json", "--csv", tmp_path / "t.csv")
    assert code == 0 and "packing=4" in out
    assert [c["lower"] for c in json.loads((tmp_path / "t.json").read_text())] == [1, 2, 4]


def test_params(capsys):
    code, out, _ = run(capsys, "params", "--n", 100, "--e", 3000000)
    assert code == 0 and json.loads(out)["regime"] == "dense"
    code, _, err = run(capsys, "params", "--regime", "sparse", "--n", 100, "--e", 3000000)
    assert code == 2 and "dense" in err
