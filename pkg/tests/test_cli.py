import json

import pytest

from bundlebench.cli import main


def run(argv):
    """Call the CLI; return its exit code (0 when it returns normally)."""
    try:
        main(argv)
    except SystemExit as exc:
        return exc.code
    return 0


def test_info_table(capsys):
    assert run(["info", "A3"]) == 0
    out = capsys.readouterr().out
    assert "root_count" in out
    assert "info:" in out


def test_info_json(capsys):
    assert run(["info", "--algebra", "D5", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["verdict"] == "PASS"
    assert report["data"]["center"]["generators"][0] == "w5"
    assert report["data"]["detCartan"] == 4
    assert report["data"]["center"]["generator_orders"] == {"w5": 4, "w1": 2, "w4": 4}


def test_unknown_algebra_exits_2(capsys):
    assert run(["info", "X9"]) == 2
    assert capsys.readouterr().err.startswith("Error: ")


def test_trivial_center_exits_2(capsys):
    assert run(["info", "G2"]) == 2
    assert "trivial center" in capsys.readouterr().err


def test_bad_tau_rejected(capsys):
    assert run(["info", "A1", "--tau", "0.2,0.01"]) == 2


def test_no_command_prints_help(capsys):
    assert run([]) == 2
    assert "usage" in capsys.readouterr().out


def test_transition_json(capsys):
    assert run(["transition", "A3", "--class", "2", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["data"]["transition"]["order"] == 2
    assert report["data"]["dim_H0"] == 1
    shift = next(r for r in report["records"] if r["name"] == "kappa_shift")
    assert shift["passed"]
    assert shift["detail"]["shift"] == ["-1/2", "-1", "-1/2"]
    assert shift["detail"]["expected"] == shift["detail"]["shift"]


def test_gs_reports_sign_gauge_mismatch(capsys):
    # C2 with the class of w2: the sign-gauge lift fixes A1, the expected row is T1
    assert run(["gs", "C2", "--class", "2", "--json"]) == 1
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    row = next(r for r in report["records"] if r["name"] == "invariant_row")
    assert not row["passed"]
    assert row["detail"]["found"] == "A1"
    assert report["data"]["gauge"].startswith("torus")
    assert report["data"]["realized_row"] == {"label": "T1", "dim_g0": 4}
    assert "[WARN] gauge candidate sign rejected" in captured.err


def test_gs_sign_gauge_case_passes(capsys):
    assert run(["gs", "A3", "--class", "2", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["data"]["gauge"] == "sign"


def test_class_command(capsys):
    assert run(["class", "A3", "w3+w3", "--json", "--samples", "2"]) == 0
    report = json.loads(capsys.readouterr().out)
    cls = report["data"]["class"]
    assert cls["order"] == 2
    assert cls["exponents"] == [2]
    assert cls["group"] == "mu4"


def test_class_parse_error(capsys):
    assert run(["class", "A3", "w3w3"]) == 2


def test_degrees_command(capsys):
    assert run(["degrees", "A1", "E6", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert [r["algebra"] for r in report["data"]["rows"]] == ["A1", "E6"]


def test_fay_command(capsys):
    assert run(["verify-fay", "--fay-samples", "40", "--samples", "6", "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["data"]["fay"]["samples"] + report["data"]["fay"]["skipped"] == 40


def test_config_file_used(tmp_path, capsys):
    conf = tmp_path / "run.conf"
    conf.write_text("algebra = C3\nclass = 0\n", encoding="utf-8")
    assert run(["transition", "--config", str(conf), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["algebra"] == "C3"
    assert report["data"]["transition"]["order"] == 1


def test_seal_inspect_verify(tmp_path, capsys):
    out = tmp_path / "sealed"
    assert run(["info", "A2", "--out", str(out)]) == 0
    assert "Receipt ID: bundle:" in capsys.readouterr().err

    assert run(["inspect", str(out)]) == 0
    assert "unsigned" in capsys.readouterr().out

    assert run(["verify", str(out)]) == 0
    assert "VERIFIED" in capsys.readouterr().out

    results = out / "results.json"
    data = json.loads(results.read_text(encoding="utf-8"))
    data["verdict"] = "FAIL"
    results.write_text(json.dumps(data, indent=2) + "\n", encoding="utf-8")
    assert run(["verify", str(out)]) == 1
    assert "TAMPERED" in capsys.readouterr().out


def test_verify_without_receipt(tmp_path, capsys):
    assert run(["verify", str(tmp_path)]) == 2
    assert "no receipt.json" in capsys.readouterr().err


@pytest.mark.slow
def test_all_suite(capsys):
    assert run(["all", "A1", "--samples", "3", "--fay-samples", "50", "--scan-samples", "12"]) == 0
    assert "all: " in capsys.readouterr().out
