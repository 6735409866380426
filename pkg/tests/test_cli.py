import json
import subprocess
import sys

import pytest

from frobsplit.cli import SCHEMA, int_range, main, run


def report(argv):
    args, rep, code = run(argv)
    doc = rep.to_json(rep.elapsed)
    return doc, code


def without_timings(doc):
    return {k: v for k, v in doc.items() if k != "timings"}


def check(doc, name):
    return next(c for c in doc["checks"] if c["name"] == name)


def test_trace_check_pass():
    doc, code = report(["trace-check", "--p", "3", "--vars", "2", "--samples", "200"])
    assert code == 0 and doc["status"] == "pass"
    assert doc["schema"] == SCHEMA and "version" in doc


def test_trace_check_vacuous():
    doc, code = report(["trace-check", "--samples", "0"])
    assert code == 0 and doc["vacuous"] is True
    assert all("vacuous" in c["witness"] for c in doc["checks"])


@pytest.mark.parametrize(
    "argv",
    [
        ["trace-check", "--p", "4"],
        ["trace-check", "--p", "x"],
        ["fedder", "--family", "bogus"],
        ["fedder"],
        ["fedder", "--ideal", "x +", "--vars", "x"],
        ["invariants", "--group", "sl", "--n", "2", "--m", "1", "--q", "3"],
        ["dims", "--n", "2-x"],
        ["lift", "chart", "--n", "2", "--m", "2"],
        ["lift", "chart", "--n", "5", "--m", "6"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_64(argv, capsys):
    assert main(argv) == 64
    assert "error" in capsys.readouterr().err


def test_not_prime_message(capsys):
    main(["trace-check", "--p", "4"])
    assert "not prime" in capsys.readouterr().err


def test_fedder_examples():
    doc, _ = report(["fedder", "--family", "cusp"])
    assert doc["result"] == "not-fpure"
    doc, code = report(["fedder", "--family", "det 2 2"])
    assert doc["result"] == "fpure" and code == 0
    assert check(doc, "normalize")["witness"] == "mu=y12^2*y21^2, lambda=1"
    assert doc["phi"]["normalized"] is True
    doc, _ = report(["fedder", "--family", "node", "--p", "5"])
    assert doc["result"] == "fpure"


def test_fedder_custom_ideal():
    doc, code = report(["fedder", "--ideal", "x*y; x*z", "--vars", "x,y,z"])
    assert code == 0 and doc["result"] == "fpure"
    doc, _ = report(["fedder", "--ideal", "y^2 - x^3"])
    assert doc["ideal"] == {"generators": ["2*x^3 + y^2"], "order": "grevlex"}
    assert doc["result"] == "not-fpure"


def test_caps_give_inconclusive_exit_2():
    doc, code = report(["fedder", "--family", "det 2 3", "--max-pairs", "3"])
    assert code == 2 and doc["status"] == "inconclusive"


def test_experimental_is_always_inconclusive():
    doc, code = report(["invariants", "--group", "sl", "--n", "2", "--m", "1", "--q", "3", "--experimental"])
    assert code == 2 and doc["status"] == "inconclusive"


def test_lift_report_shape():
    doc, code = report(["lift", "hyperbolic", "--n", "2", "--p", "3", "--samples", "10"])
    assert code == 0
    for key in ("construction", "family", "phi", "checks", "seed"):
        assert key in doc
    assert doc["construction"] == "hyperbolic"
    assert check(doc, "psi_u_zero")["status"] == "pass"


def test_lift_chart_overlaps():
    doc, code = report(["lift", "chart", "--group", "so", "--n", "2", "--m", "3", "--samples", "5"])
    overlaps = [c for c in doc["checks"] if c["name"].startswith("overlap")]
    assert code == 0 and len(overlaps) == 9


def test_dims_values():
    doc, code = report(["dims", "--n", "2", "--m", "3", "--q", "3"])
    (row,) = doc["dimensions"]
    assert row == {"n": 2, "m": 3, "q": 3, "dimX": 9, "dimZu": 7, "dimZxi": 7, "codimZu": 2, "codimZxi": 2}
    assert code == 0


def test_int_range():
    assert int_range("3") == [3]
    assert int_range("2-4") == [2, 3, 4]
    assert int_range("1,3-4") == [1, 3, 4]


def test_determinism_and_out(tmp_path, capsys):
    argv = ["lift", "hypersurface", "--n", "2", "--samples", "20", "--seed", "7", "--json-only"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(argv + ["--out", str(a)]) == 0
    first = capsys.readouterr().out
    assert main(argv + ["--out", str(b)]) == 0
    second = capsys.readouterr().out
    da, db = json.loads(a.read_text()), json.loads(b.read_text())
    assert without_timings(da) == without_timings(db)
    assert without_timings(json.loads(first)) == without_timings(da)
    assert first != "" and second != ""


def test_seed_changes_samples_not_verdict():
    d1, _ = report(["trace-check", "--seed", "1", "--samples", "20"])
    d2, _ = report(["trace-check", "--seed", "2", "--samples", "20"])
    assert d1["status"] == d2["status"] == "pass"
    assert d1["spec"] != d2["spec"]


def test_console_script_human_summary():
    out = subprocess.run(
        [sys.executable, "-m", "frobsplit.cli", "fedder", "--family", "cusp"],
        capture_output=True, text=True, check=False,
    )
    assert out.returncode == 0
    assert out.stdout.strip().endswith("status: pass")
    assert "not-fpure" in out.stdout
