# test_measure_manager.py
# ============================================================================
# Tests for measure reports, suite checks and report formatting
# ============================================================================

import dataclasses

import pytest

from examples_corpus import ExampleId, build_example
from measure_manager import ExampleOutcome, MeasureManager, check_outcome, format_report, format_table1
from optimizer import OptimizerConfig
from pdf_generator import generate_default_filename, reports_to_pdf


@pytest.fixture(scope="module")
def manager():
    return MeasureManager(OptimizerConfig(restarts=2))


@pytest.fixture(scope="module")
def xor_report(manager):
    return manager.compute(build_example(ExampleId.XOR), "Xor", with_pid2=True)


def test_xor_report(xor_report):
    assert xor_report.n == 2
    assert xor_report.alphabet_sizes == (2, 2, 2)
    assert xor_report.s_max == pytest.approx(1.0)
    assert xor_report.s_vk.best == pytest.approx(1.0, abs=1e-6)
    assert xor_report.pid2.synergy == pytest.approx(1.0, abs=1e-6)
    assert xor_report.converged
    assert xor_report.content_hash == build_example(ExampleId.XOR).content_hash()


def test_report_dict_keys_are_stable(xor_report):
    payload = xor_report.to_dict()
    assert list(payload) == ["source", "content_hash", "n", "alphabet_sizes", "i_whole", "i_singletons",
                             "s_max", "wms", "delta_i", "i_vk", "s_vk", "pid2", "optimizer"]
    assert list(payload["s_vk"]) == ["lower", "best", "upper"]
    assert payload["optimizer"] == {"restarts": 2, "converged": True, "seed": 0}


def test_pid2_skipped_for_three_predictors(manager, capsys):
    verbose = MeasureManager(manager.cfg, verbose=True)
    report = verbose.compute(build_example(ExampleId.XOR_DUPLICATE), "XorDuplicate", with_pid2=True)
    assert report.pid2 is None
    assert "pid2 needs exactly 2 predictors" in capsys.readouterr().err
    assert report.to_dict()["pid2"] is None


def test_non_convergence_is_warned(capsys):
    capped = MeasureManager(OptimizerConfig(restarts=0, max_iterations=1))
    report = capped.compute(build_example(ExampleId.AND), "And")
    assert not report.converged
    assert "did not converge" in capsys.readouterr().err


def test_check_passes_and_catches_mismatch(xor_report):
    assert check_outcome(ExampleOutcome(ExampleId.XOR, xor_report)) == []
    wrong = dataclasses.replace(xor_report, wms=-1.0)
    failures = check_outcome(ExampleOutcome(ExampleId.XOR, wrong))
    assert len(failures) == 1
    assert failures[0].startswith("Xor: WMS")


def test_check_reports_errors():
    failures = check_outcome(ExampleOutcome(ExampleId.RDN, None, "OptimizerError: boom"))
    assert failures == ["Rdn: OptimizerError: boom"]


def test_check_interval_examples(manager):
    report = manager.compute(build_example(ExampleId.AND), "And")
    assert check_outcome(ExampleOutcome(ExampleId.AND, report)) == []
    narrowed = dataclasses.replace(report, s_vk=dataclasses.replace(report.s_vk, upper=0.4))
    failures = check_outcome(ExampleOutcome(ExampleId.AND, narrowed))
    assert any("upper bound" in failure for failure in failures)


def test_format_report(xor_report):
    text = format_report(xor_report)
    assert "S_max" in text
    assert "synergy {12}" in text
    assert text.endswith("\n")


def test_format_table1_shows_intervals(manager, xor_report):
    and_report = manager.compute(build_example(ExampleId.AND), "And")
    text = format_table1([ExampleOutcome(ExampleId.XOR, xor_report), ExampleOutcome(ExampleId.AND, and_report),
                          ExampleOutcome(ExampleId.RDN, None, "boom")])
    lines = text.splitlines()
    assert lines[0].split() == ["Example", "S_max", "WMS", "delta_I", "S_VK"]
    assert lines[1].split()[0] == "Xor"
    assert "best" in lines[2]
    assert "error" in lines[3]


def test_table1_keeps_example_order(monkeypatch, manager):
    monkeypatch.setattr(MeasureManager, "compute",
                        lambda self, table, source, with_pid2=False: source)
    outcomes = MeasureManager(manager.cfg).table1(workers=3)
    assert [outcome.example_id for outcome in outcomes] == list(ExampleId)
    assert [outcome.report for outcome in outcomes] == [e.value for e in ExampleId]


def test_pdf_export(xor_report, tmp_path):
    path = tmp_path / "report.pdf"
    result = reports_to_pdf([xor_report], str(path), title="Xor")
    assert result["success"], result["message"]
    assert path.read_bytes().startswith(b"%PDF")


def test_pdf_failure_is_reported(xor_report, tmp_path):
    result = reports_to_pdf([xor_report], str(tmp_path / "missing" / "report.pdf"))
    assert not result["success"]
    assert result["message"].startswith("Failed to create PDF file")


def test_default_pdf_name():
    name = generate_default_filename()
    assert name.startswith("Synergy_report_") and name.endswith(".pdf")
