import csv
import json

import pytest

from extremal.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_solved(capsys):
    code, out, _ = run(capsys, "count", "--poly", "(x-y)^2+x-z", "--grid", "1..4,1..4,1..4", "--solve", "z")
    assert (code, out) == (0, "9\n")


def test_count_bruteforce_and_json(capsys):
    code, out, _ = run(capsys, "count", "--poly", "x+y+z", "--grid", "1..4,1..4,-4..-1", "--format", "json")
    assert code == 0
    d = json.loads(out)
    assert d["count"] == 6 and d["method"] == "BruteForce" and "millis" not in d


def test_count_difference_family(capsys):
    code, out, _ = run(capsys, "count", "--family", "ValtrSymmetric", "--n", "3")
    assert (code, out) == (0, "17\n")


def test_count_csv_has_header(capsys):
    code, out, _ = run(capsys, "count", "--family", "MainF", "--n", "4", "--format", "csv")
    assert out == "family,n,count,method,millis\nMainF,4,9,DifferenceStructure,\n"


def test_degeneracy_reports_quarter_line(capsys):
    code, out, _ = run(capsys, "degeneracy", "--poly", "(x-y)^2+x-z", "--solve", "z")
    assert code == 0
    assert out.startswith("NonzeroCertified")
    assert "y - x = 1/4" in out


def test_degeneracy_json(capsys):
    code, out, _ = run(capsys, "degeneracy", "--poly", "x+y+z", "--solve", "z", "--format", "json")
    d = json.loads(out)
    assert d["verdict"] == "IdenticallyZero" and d["label"] == "consistent with degenerate"
    assert set(d) >= {"verdict", "numerator", "denominator", "vanishing_samples"}


def test_degeneracy_needs_bivariate(capsys):
    code, _, err = run(capsys, "degeneracy", "--poly", "(x-y)^2+x-z")
    assert code == 2 and "--solve" in err


def test_construct_csv(capsys):
    code, out, _ = run(capsys, "construct", "main-t", "--n", "4")
    rows = list(csv.reader(out.splitlines()))
    assert code == 0 and rows[0] == ["x", "y", "z"] and len(rows) == 5


def test_construct_writes_sidecar(tmp_path, capsys):
    path = tmp_path / "t.csv"
    assert run(capsys, "construct", "mvar-t", "--m", "3", "--n", "1", "--out", str(path))[0] == 0
    assert path.read_text() == "x1,x2,x3\n0,0,0\n0,1,1\n1,-1,1\n1,0,2\n"
    meta = json.loads((tmp_path / "t.json").read_text())
    assert meta["name"] == "MVarT" and meta["size"] == 4 and meta["params"] == {"m": 3, "n": 1}


def test_construct_json(capsys):
    code, out, _ = run(capsys, "construct", "valtr-symmetric", "--n", "4", "--format", "json")
    assert json.loads(out)["tuples"] == [[1, 2, 1, 2], [1, 2, 2, 3], [2, 3, 1, 2], [2, 3, 2, 3]]


def test_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "verify", "main-t", "--n", "64")
    assert code == 0 and json.loads(out)["size"] == 160


def test_image(capsys):
    code, out, _ = run(capsys, "image", "--poly", "(x-y)^2+x", "--n", "16")
    assert out == "12 distinct values on 24 edges\n"
    code, out, _ = run(capsys, "image", "--poly", "x+y", "--n", "10", "--graph", "complete", "--format", "json")
    assert json.loads(out)["distinct_values"] == 19


def test_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--poly", "2*x*y+3", "--format", "json")
    d = json.loads(out)
    assert d["additive"] is None
    assert d["multiplicative"] == {"kind": "Multiplicative", "g": "2*t + 3", "h": "x", "k": "y"}


def test_fit(capsys):
    code, out, _ = run(capsys, "fit", "--family", "degenerate-sum", "--min-n", "64", "--max-n", "1024")
    d = json.loads(out)
    assert code == 0 and 1.95 <= d["slope"] <= 2.05


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "count", "--poly", "x+", "--grid", "1..3")[0] == 2
    assert run(capsys, "count", "--poly", "x", "--grid", "1..3..4")[0] == 2
    assert run(capsys, "count", "--poly", "x+y", "--grid", "1..3")[0] == 2
    assert run(capsys, "construct", "main-t")[0] == 2
    assert run(capsys, "count", "--poly", "x-y", "--grid", "1..100,1..100", "--budget", "10")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["count", "--bogus"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["count", "--family", "MainF", "--n", "4", "--workers", "0"])
    assert info.value.code == 2


def test_suite_outputs_are_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run(capsys, "suite", "--max-n", "256", "--seed", "3", "--out", str(a))[0] == 0
    assert run(capsys, "suite", "--max-n", "256", "--seed", "3", "--out", str(b), "--workers", "4")[0] == 0
    for name in ("bundle.json", "fits.csv", "counts.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_workers_never_change_counts(capsys):
    outs = set()
    for k in (1, 2, 4, 8):
        outs.add(run(capsys, "count", "--poly", "(x-y)^2+x-z", "--grid", "1..40,{1,5,9,30},1..40",
                     "--solve", "z", "--workers", str(k), "--format", "json")[1])
    assert len(outs) == 1
