# test_examples_corpus.py
# ============================================================================
# Tests for the built-in example distributions
# ============================================================================

import math

import pytest

from examples_corpus import DESCRIPTIONS, ExampleId, build_example, parse_example_id, transcribed_example
from info_theory import entropy, marginal, mutual_information
from joint_table import DistributionError


@pytest.mark.parametrize("example_id", list(ExampleId), ids=str)
def test_gate_logic_matches_printed_rows(example_id):
    assert build_example(example_id) == transcribed_example(example_id)


@pytest.mark.parametrize("example_id", list(ExampleId), ids=str)
def test_mass_is_exactly_normalized(example_id):
    table = build_example(example_id)
    assert math.fsum(table.mass.ravel()) == 1.0
    masses = {p for _, p in table.rows()}
    assert len(masses) == 1


@pytest.mark.parametrize("example_id, predictors, rows", [
    (ExampleId.RDN, 2, 2),
    (ExampleId.UNQ, 2, 4),
    (ExampleId.XOR, 2, 4),
    (ExampleId.XOR_DUPLICATE, 3, 4),
    (ExampleId.XOR_LOSES, 3, 4),
    (ExampleId.RDN_XOR, 2, 8),
    (ExampleId.AND, 2, 4),
    (ExampleId.RDN_UNQ_XOR, 2, 32),
    (ExampleId.AND_DUPLICATE, 3, 4),
    (ExampleId.XOR_MULTI_COAL, 3, 8),
], ids=str)
def test_shapes(example_id, predictors, rows):
    table = build_example(example_id)
    assert table.n_predictors == predictors
    assert len(list(table.rows())) == rows
    assert table.target_name == "Y"


def test_duplicates_copy_the_first_predictor():
    for example_id in (ExampleId.XOR_DUPLICATE, ExampleId.AND_DUPLICATE):
        table = build_example(example_id)
        for labels, _ in table.rows():
            assert labels[0] == labels[2]


def test_xor_loses_third_predictor_is_the_target():
    for labels, _ in build_example(ExampleId.XOR_LOSES).rows():
        assert labels[2] == labels[3]


def test_structural_information():
    xor = build_example(ExampleId.XOR)
    assert mutual_information(xor, "X1", "X2") == pytest.approx(0.0, abs=1e-15)
    assert entropy(build_example(ExampleId.RDN_UNQ_XOR), "Y") == pytest.approx(4.0)
    coal = build_example(ExampleId.XOR_MULTI_COAL)
    for name in coal.predictor_names:
        assert mutual_information(coal, name, "Y") == pytest.approx(0.0, abs=1e-12)
    for pair in (("X1", "X2"), ("X1", "X3"), ("X2", "X3")):
        assert mutual_information(coal, pair, "Y") == pytest.approx(1.0)


def test_and_predictors_are_independent():
    table = build_example(ExampleId.AND)
    assert entropy(marginal(table, ("X1", "X2"))) == pytest.approx(2.0)


class TestLookup:
    @pytest.mark.parametrize("text", ["xor", "XOR", " Xor ", ExampleId.XOR])
    def test_case_insensitive(self, text):
        assert parse_example_id(text) is ExampleId.XOR

    def test_unknown(self):
        with pytest.raises(DistributionError, match="unknown example"):
            parse_example_id("Nand")

    def test_every_example_is_described(self):
        assert set(DESCRIPTIONS) == set(ExampleId)

    def test_builds_are_cached(self):
        assert build_example("and") is build_example(ExampleId.AND)
