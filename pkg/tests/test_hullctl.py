import json
import subprocess
import sys

import pytest

from chainhull import hullcount
from chainhull.hullctl import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_cosets_json(capsys):
    code, out, _ = run(capsys, "cosets", "--n", "7", "--q", "2")
    data = json.loads(out)
    assert code == 0 and data["omega"] == 3
    assert [c["elements"] for c in data["cosets"]] == [[0], [1, 2, 4], [3, 5, 6]]


def test_factor_json(capsys):
    code, out, _ = run(capsys, "factor", "--n", "7", "--ring", "Z8")
    rows = json.loads(out)["factors"]
    assert code == 0
    assert {"cosetRep": 1, "divisor": 7, "coefficients": [7, 2, 3, 1]} in rows


def test_code_worked_example(capsys):
    code, out, _ = run(capsys, "code", "--ring", "Z4", "--n", "7", "--multiset", "[[0],[3],[1]]")
    data = json.loads(out)
    assert code == 0
    assert data["hull"]["multiset"]["parts"] == [[], [3], [0, 1]]
    assert data["hull"]["qdim"] == 3


def test_code_from_file(tmp_path, capsys):
    f = tmp_path / "m.json"
    f.write_text(json.dumps({"n": 7, "q": 2, "s": 2, "parts": [[0], [3], [1]]}))
    code, out, _ = run(capsys, "code", "--ring", "Z4", "--multiset", str(f), "--format", "table")
    assert code == 0 and out.strip()


def test_enumerate_table_and_json_round_trip(capsys):
    code, out, _ = run(capsys, "enumerate-hulls", "--ring", "Z8", "--n", "7", "--method", "algorithm1")
    assert code == 0
    rep = hullcount.HullReport.from_json(json.loads(out))
    assert rep == hullcount.algorithm1(7, rep.ring)
    code, out, _ = run(capsys, "enumerate-hulls", "--ring", "Z8", "--n", "7", "--format", "table")
    assert "0, 1, 3, 4, 6, 7" in out


def test_enumerate_both_flags_difference(capsys):
    code, out, _ = run(capsys, "enumerate-hulls", "--ring", "Z8", "--n", "7", "--method", "both")
    diff = json.loads(out)["difference"]
    assert code == 0 and diff["flagged"] and diff["onlyExact"] == [[0, 3, 3], [0, 3, 4]]


def test_average_and_check(capsys):
    code, out, _ = run(capsys, "average", "--ring", "Z8", "--n", "7", "--check-exact")
    data = json.loads(out)
    assert code == 0 and data["average"] == {"num": 23, "den": 4} and data["exactCheck"]["pass"]
    code, out, _ = run(capsys, "average", "--ring", "Z4", "--n", "5", "--format", "csv")
    assert out.splitlines()[1].startswith("5,5,3,")


def test_count(capsys):
    code, out, _ = run(capsys, "count", "--ring", "Z8", "--n", "7", "--tau", "6", "--format", "table")
    assert code == 0 and out.strip() == "12"


def test_verify_grid(tmp_path, capsys):
    g = tmp_path / "grid.json"
    g.write_text(json.dumps([{"ring": "Z4", "n": [1, 3]}]))
    code, out, _ = run(capsys, "verify", "--grid", str(g))
    assert code == 0 and json.loads(out) == {"checked": 3 + 9, "mismatches": 0}


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "o.csv"
    code, out, _ = run(capsys, "count", "--ring", "Z4", "--n", "3", "--tau", "0", "--format", "csv", "--out", str(dest))
    assert code == 0 and out == "" and dest.read_text() == "n,tau,count\n3,0,4\n"


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["frobnicate"], 1),
        (["cosets", "--n", "7"], 1),
        (["cosets", "--n", "7", "--q", "2", "--format", "xml"], 1),
        (["factor", "--n", "14", "--ring", "Z8"], 2),
        (["factor", "--n", "7", "--ring", "2,2,1,2,3"], 2),
        (["code", "--ring", "Z4", "--n", "7", "--multiset", "[[1],[3],[0]]x"], 2),
        (["code", "--ring", "Z4", "--multiset", "/nonexistent/file.json"], 2),
        (["enumerate-hulls", "--ring", "Z8", "--n", "21", "--method", "exact", "--budget", "10"], 3),
        (["average", "--ring", "bogus", "--n", "7"], 2),
    ],
)
def test_exit_codes(capsys, argv, expected):
    code, _, err = run(capsys, *argv)
    assert code == expected
    assert err


def test_budget_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("HULLCTL_BUDGET", "10")
    code, _, _ = run(capsys, "enumerate-hulls", "--ring", "Z8", "--n", "21", "--method", "exact")
    assert code == 3
    monkeypatch.setenv("HULLCTL_BUDGET", "many")
    code, _, _ = run(capsys, "count", "--ring", "Z8", "--n", "7", "--tau", "0")
    assert code == 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "chainhull", "count", "--ring", "Z4", "--n", "3", "--tau", "3"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == 1
