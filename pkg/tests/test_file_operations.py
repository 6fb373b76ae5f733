# test_file_operations.py
# ============================================================================
# Tests for TSV/circuit loading and report export
# ============================================================================

import json

import pytest

from examples_corpus import ExampleId, build_example
from file_operations import FileOperationsManager
from joint_table import DistributionError

AND_TSV = """# And gate
X1\tX2\ttarget\tp
0\t0\t0\t0.25
0\t1\t0\t0.25
1\t0\t0\t0.25
1\t1\t1\t0.25
"""


@pytest.fixture
def files():
    return FileOperationsManager(verbose=False)


class TestDistributionText:
    def test_parses_and_gate(self, files):
        table = files.parse_distribution_text(AND_TSV)
        assert table == build_example(ExampleId.AND)

    def test_zero_rows_are_skipped(self, files):
        text = AND_TSV + "1\t1\t0\t0\n"
        assert files.parse_distribution_text(text) == build_example(ExampleId.AND)

    def test_bad_sum_is_rejected(self, files):
        text = "X1\tX2\ttarget\tp\n0\t0\t0\t0.5\n1\t1\t1\t0.4\n"
        with pytest.raises(DistributionError, match="mass sums to 0.9"):
            files.parse_distribution_text(text)

    def test_renormalize_small_drift(self, files):
        text = "X1\tX2\ttarget\tp\n0\t0\t0\t0.5\n1\t1\t1\t0.4999\n"
        table = files.parse_distribution_text(text, renormalize=True)
        assert table.probability(("0", "0", "0")) == pytest.approx(0.5 / 0.9999)

    def test_renormalize_refuses_large_drift(self, files):
        text = "X1\tX2\ttarget\tp\n0\t0\t0\t0.5\n1\t1\t1\t0.4\n"
        with pytest.raises(DistributionError, match="mass sums to 0.9"):
            files.parse_distribution_text(text, renormalize=True)

    @pytest.mark.parametrize("text, message", [
        ("X1\tp\n0\t1\n", "header"),
        ("X1\tY\tp\n0\t0\t1\n", "header"),
        ("X1\ttarget\tp\n0\t0\tlots\n", "bad probability"),
        ("X1\ttarget\tp\n0\t0\t-1\n", "finite"),
        ("X1\ttarget\tp\n0\t0\t0\n", "no rows"),
        ("X1\tX1\ttarget\tp\n0\t0\t0\t1\n", r"duplicate column names \[.X1.\]"),
    ])
    def test_malformed_input(self, files, text, message):
        with pytest.raises(DistributionError, match=message):
            files.parse_distribution_text(text)


class TestLoading:
    def test_load_tsv(self, files, tmp_path):
        path = tmp_path / "and.tsv"
        path.write_text(AND_TSV, encoding="utf-8")
        success, table, message = files.load_input(str(path))
        assert success
        assert table == build_example(ExampleId.AND)
        assert "2 predictor" in message

    def test_load_bad_tsv_reports_failure(self, files, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("X1\tX2\ttarget\tp\n0\t0\t0\t0.5\n1\t1\t1\t0.4\n", encoding="utf-8")
        success, table, message = files.load_input(str(path))
        assert not success
        assert table is None
        assert "mass sums to 0.9" in message

    def test_load_circuit(self, files, circuits_dir):
        success, table, _ = files.load_input(str(circuits_dir / "xor.circ"))
        assert success
        assert table == build_example(ExampleId.XOR)

    def test_circuit_error_keeps_location(self, files, tmp_path):
        path = tmp_path / "broken.circ"
        path.write_text("source a uniform(2)\nY := XOR(a, q)\npredictors: a\ntarget: Y\n", encoding="utf-8")
        success, _, message = files.load_input(str(path))
        assert not success
        assert message == f"{path}:2:13: unknown name 'q'"

    @pytest.mark.parametrize("suffix", [".circ", ".tsv"])
    def test_non_utf8_input_reports_failure(self, files, tmp_path, suffix):
        path = tmp_path / f"latin1{suffix}"
        path.write_bytes(b"source \xe9 uniform(2)\n")
        success, table, message = files.load_input(str(path))
        assert not success
        assert table is None
        assert str(path) in message

    def test_missing_file(self, files, tmp_path):
        success, _, message = files.load_input(str(tmp_path / "absent.tsv"))
        assert not success
        assert "absent.tsv" in message

    def test_unsupported_extension(self, files):
        success, _, message = files.load_input("table.csv")
        assert not success
        assert "Unsupported" in message


class TestExport:
    @pytest.mark.parametrize("example_id", list(ExampleId), ids=str)
    def test_dump_reloads_to_the_same_table(self, files, example_id):
        table = build_example(example_id)
        text = files.format_distribution(table)
        assert text.splitlines()[0].split("\t")[-2:] == ["target", "p"]
        assert files.parse_distribution_text(text) == table

    def test_json_is_indented(self, files):
        text = files.format_json({"b": 1, "a": [1.5]})
        assert text.endswith("\n")
        assert list(json.loads(text)) == ["b", "a"]
        assert '\n  "b": 1' in text
