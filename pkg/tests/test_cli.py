import csv
import io
import json

import pytest

from ritz import bratu
from ritz.cli import OutputSpec, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_bratu_critical_matches_library(capsys):
    code, out, _ = run(capsys, "bratu", "critical")
    assert code == 0
    got = {r["source"]: r for r in rows(out)}
    c = bratu.critical_point("exact")
    assert got["exact"]["lambda_c"] == format(c.lam, ".10g") == "3.513830719"


def test_bratu_branches_above_fold(capsys):
    code, out, err = run(capsys, "bratu", "branches", "--lambda", "4")
    assert code == 1 and out == ""
    assert "no solution: lambda exceeds critical value" in err


def test_bratu_series(capsys):
    code, out, _ = run(capsys, "bratu", "series", "--source", "exact", "--order", "3")
    assert code == 0
    assert [r["coefficient"] for r in rows(out)] == ["0.5", "0.04166666667", "0.00625"]


def test_bratu_bifurcation_to_file(tmp_path, capsys):
    path = tmp_path / "fig.csv"
    code, out, _ = run(capsys, "bratu", "bifurcation", "--grid", "1:3:1", "--sources", "exact,shooting",
                       "--out", str(path))
    assert code == 0 and out == ""
    text = path.read_text()
    assert text.splitlines()[0] == "lambda,slope,branch,source"
    data = rows(text)
    assert len(data) == 12
    assert [r["source"] for r in data[:6]] == ["exact"] * 6
    assert list(tmp_path.iterdir()) == [path]


def test_bratu_bad_grid_is_usage_error(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bratu", "bifurcation", "--grid", "1:oops"])
    assert info.value.code == 2


def test_kinetics_halftimes(capsys):
    code, out, _ = run(capsys, "kinetics", "halftimes", "--n", "2", "--k", "1", "--a", "1")
    got = {r["source"]: r for r in rows(out)}
    assert code == 0
    assert got["exact"]["ratio"] == "3" and got["variational"]["ratio"] == "2"


def test_kinetics_errata(capsys):
    code, out, _ = run(capsys, "kinetics", "errata", "--k", "1", "--a", "1")
    got = {r["quantity"]: r for r in rows(out)}
    assert got["pole_time"]["value"] == "1"
    assert got["half_time"]["value"] == "-1" and got["half_time"]["flag"] == "unphysical"


def test_kinetics_infer(capsys):
    assert rows(run(capsys, "kinetics", "infer", "--t-half", "1", "--t-quarter", "3")[1])[0]["order"] == "2"
    code, _, err = run(capsys, "kinetics", "infer", "--t-half", "1", "--t-quarter", "0.9")
    assert code == 1 and "no real order" in err


def test_kinetics_order_below_one_is_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["kinetics", "halftimes", "--n", "0.5"])
    assert info.value.code == 2


def test_classic_duffing_and_kdv(capsys):
    code, out, _ = run(capsys, "classic", "duffing", "--epsilon", "1", "--amplitude", "2")
    assert code == 0 and {r["center"] for r in rows(out)} == {"origin"}
    code, out, _ = run(capsys, "classic", "kdv", "--c", "1")
    got = {r["convention"]: r for r in rows(out)}
    assert got["algebraic"]["q"] == "0.5" and float(got["algebraic"]["max_residual"]) < 1e-10
    assert got["positive_p"]["p"] == "0.5" and float(got["positive_p"]["max_residual"]) > 1


def test_classic_lambert_branch_crossing(capsys):
    code, _, err = run(capsys, "classic", "lambert", "--n", "2", "--k", "1", "--y0", "1", "--yp0", "0", "--x", "3")
    assert code == 1 and "BranchCrossing" in err


def test_verify_json_and_negative_control(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json")
    report = json.loads(out)
    assert code == 0 and all(r["status"] == "pass" for r in report)
    code, _, _ = run(capsys, "verify", "--perturb", "1e-5", "--case", "kdv-residual")
    assert code == 1


def test_precision_flag(capsys):
    _, out, _ = run(capsys, "bratu", "critical", "--precision", "17")
    assert rows(out)[0]["lambda_c"] == format(bratu.critical_point("exact").lam, ".17g")
    with pytest.raises(SystemExit):
        main(["bratu", "critical", "--precision", "3"])
    with pytest.raises(ValueError):
        OutputSpec(precision=18)


def test_output_is_deterministic(capsys):
    a = run(capsys, "bratu", "branches", "--lambda", "2", "--source", "all")[1]
    b = run(capsys, "bratu", "branches", "--lambda", "2", "--source", "all")[1]
    assert a == b and len(rows(a)) == 8
