import json
from fractions import Fraction

from bundlebench.receipts import chain_records, receipt_summary, verify_receipt
from bundlebench.runners.algebra import run_info
from bundlebench.runners.report import ReportDocument, check, exact, exceeds, jsonable, seal


def sealed(cfg, tmp_path):
    report = run_info(cfg(algebra="A2"))
    receipt = seal(report, tmp_path)
    return report, receipt


def test_seal_writes_artifacts(cfg, tmp_path):
    report, receipt = sealed(cfg, tmp_path)
    for name in ("manifest.json", "provenance.json", "results.json", "receipt.json"):
        text = (tmp_path / name).read_text(encoding="utf-8")
        assert text.endswith("}\n")
    assert receipt["id"].startswith("bundle:")
    assert receipt["signatures"] == ["unsigned:placeholder"]
    assert len(receipt["checkpoints"]) == len(report.records)
    assert verify_receipt(tmp_path) == []


def test_summary(cfg, tmp_path):
    report, _ = sealed(cfg, tmp_path)
    summary = receipt_summary(tmp_path)
    assert summary["command"] == "info"
    assert summary["verdict"] == "PASS"
    assert summary["checks"] == f"{len(report.records)}/{len(report.records)} passed"
    assert summary["signing"] == "unsigned"


def test_tampered_results_detected(cfg, tmp_path):
    sealed(cfg, tmp_path)
    path = tmp_path / "results.json"
    results = json.loads(path.read_text(encoding="utf-8"))
    results["records"][0]["passed"] = not results["records"][0]["passed"]
    path.write_text(json.dumps(results, indent=2) + "\n", encoding="utf-8")
    problems = verify_receipt(tmp_path)
    assert any("results" in p for p in problems)
    assert any("checkpoint 0" in p for p in problems)


def test_tampered_receipt_id_detected(cfg, tmp_path):
    sealed(cfg, tmp_path)
    path = tmp_path / "receipt.json"
    receipt = json.loads(path.read_text(encoding="utf-8"))
    receipt["verdict"] = "FAIL"
    path.write_text(json.dumps(receipt, indent=2) + "\n", encoding="utf-8")
    assert any("receipt id mismatch" in p for p in verify_receipt(tmp_path))


def test_missing_artifact_detected(cfg, tmp_path):
    sealed(cfg, tmp_path)
    (tmp_path / "provenance.json").unlink()
    assert any("missing artifact" in p for p in verify_receipt(tmp_path))


def test_chain_links():
    chain = chain_records([{"name": "a", "passed": True}, {"name": "b", "passed": False}])
    assert chain[0]["prev_chain"] == ""
    assert chain[1]["prev_chain"] == chain[0]["curr_chain"]
    assert [c["check"] for c in chain] == ["a", "b"]


def test_report_records(cfg):
    report = ReportDocument("demo", cfg())
    report.add(check("small", 1e-13, 1e-12))
    report.add(check("nan", float("nan"), 1.0))
    report.add(exact("same", True))
    report.add(exceeds("control", 1e-2, 1e-4))
    assert [r.passed for r in report.records] == [True, False, True, True]
    assert report.verdict == "FAIL"
    assert [r.name for r in report.failures()] == ["nan"]
    d = report.to_dict()
    assert set(d) == {"command", "config", "verdict", "records", "data", "notes", "timing"}
    assert "seconds" not in d["records"][0]


def test_timing_kept_out_of_records(cfg):
    report = ReportDocument("demo", cfg())
    assert report.timed("sum", sum, [1, 2, 3]) == 6
    assert "sum" in report.to_dict()["timing"]["seconds"]


def test_jsonable():
    assert jsonable({"f": Fraction(1, 2), "n": Fraction(4, 2), "c": 1 + 2j}) == {
        "f": "1/2", "n": 2, "c": [1.0, 2.0],
    }
