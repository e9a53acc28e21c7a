"""CLI tests: exit codes, report shape, determinism, CSV export."""

import json

import pytest

from gassym.cli import main

TOP_KEYS = {
    "version",
    "seed",
    "algebra",
    "catalog",
    "classes",
    "solutions",
    "traces",
}


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


# --------------------------------------------------------------------------
# exit codes


def test_verify_algebra_passes(capsys):
    code, out, _ = _run(capsys, ["verify-algebra"])
    assert code == 0
    report = json.loads(out)
    assert set(report) == TOP_KEYS
    assert report["algebra"]["passed"]
    assert report["algebra"]["jacobi_failures"] == []
    assert report["algebra"]["realization_diff"] == []


def test_verify_invariants_single_entry(capsys):
    code, out, _ = _run(capsys, ["verify-invariants", "4.77"])
    assert code == 0
    report = json.loads(out)
    assert report["catalog"]["4.77"]["passed"]
    assert report["catalog"]["4.77"]["rank"] == 5


def test_unknown_entry_is_usage_error(capsys):
    code, out, err = _run(capsys, ["verify-invariants", "4.99"])
    assert code == 2
    assert "4.99" in err


def test_params_need_single_entry(capsys):
    code, _, err = _run(capsys, ["verify-invariants", "4.3", "4.77", "--params", "a=1"])
    assert code == 2


def test_invariants_with_explicit_params(capsys):
    code, out, _ = _run(
        capsys, ["verify-invariants", "4.3", "--params", "a=1,b=-1/2"]
    )
    assert code == 0
    assert json.loads(out)["catalog"]["4.3"]["passed"]


def test_bad_param_value_is_usage_error(capsys):
    code, _, _ = _run(capsys, ["verify-invariants", "4.3", "--params", "a"])
    assert code == 2


def test_classify_subset(capsys):
    code, out, _ = _run(capsys, ["classify", "4.1", "4.2", "4.77"])
    assert code == 0
    report = json.loads(out)["classes"]
    assert report["passed"]
    assert set(report["rows"]) == {"4.1", "4.2", "4.77"}
    assert report["label_consistency"]["A_{3,9}+A_1"]


def test_verify_solution_all(capsys):
    code, out, _ = _run(capsys, ["verify-solution"])
    assert code == 0
    sols = json.loads(out)["solutions"]
    assert set(sols) == {
        "isochoric-general",
        "isochoric-reduced",
        "nonisochoric-general",
        "nonisochoric-reduced",
    }
    assert all(e["passed"] for e in sols.values())
    assert sols["isochoric-reduced"]["jacobian_det"] == "1"
    assert sols["nonisochoric-reduced"]["jacobian_det"] == "t"


# --------------------------------------------------------------------------
# trace


def test_trace_writes_csv(capsys, tmp_path):
    out_csv = tmp_path / "tr.csv"
    code, out, _ = _run(
        capsys,
        [
            "trace", "isochoric-reduced",
            "--x0", "0.5,1,-0.3",
            "--t0", "0.5", "--t1", "1.0", "--h", "0.01",
            "--out", str(out_csv),
        ],
    )
    assert code == 0
    lines = out_csv.read_text().strip().split("\n")
    assert lines[0] == "t,x,y,z"
    assert len(lines) == 52  # 50 steps + endpoint + header
    report = json.loads(out)
    assert report["traces"][0]["samples"] == 51


def test_trace_empty_range_is_usage_error(capsys):
    code, _, err = _run(capsys, ["trace", "isochoric-reduced", "--t0", "1", "--t1", "1"])
    assert code == 2
    assert "time range" in err


def test_trace_bad_point_is_usage_error(capsys):
    code, _, _ = _run(capsys, ["trace", "isochoric-reduced", "--x0", "1,2"])
    assert code == 2


# --------------------------------------------------------------------------
# determinism and formatting


def test_reports_are_byte_identical(capsys):
    argv = ["verify-invariants", "4.77", "4.27", "--seed", "3"]
    _, out1, _ = _run(capsys, argv)
    _, out2, _ = _run(capsys, argv)
    assert out1 == out2


def test_jobs_do_not_change_output(capsys):
    base = ["verify-invariants", "4.77", "4.27", "4.1"]
    _, serial, _ = _run(capsys, base + ["--jobs", "1"])
    _, threaded, _ = _run(capsys, base + ["--jobs", "2"])
    assert serial == threaded


def test_text_format(capsys):
    code, out, _ = _run(capsys, ["verify-invariants", "4.77", "--format", "text"])
    assert code == 0
    assert out.startswith("catalog:")


def test_text_format_algebra_prints_table(capsys):
    code, out, _ = _run(capsys, ["verify-algebra", "--format", "text"])
    assert code == 0
    assert "[X7, X8] = -X9" in out
    assert "[X10, X11] = X10" in out


def test_report_written_to_file(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    code, out, _ = _run(capsys, ["verify-invariants", "4.77", "--out", str(out_file)])
    assert code == 0
    assert out == ""
    assert json.loads(out_file.read_text())["catalog"]["4.77"]["passed"]
