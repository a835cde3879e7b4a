import csv
import io
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings

from conftest import mmers, thresholds
from granular_rules import DataError, GranularRule, MiningConfig, mine_sandwich
from granular_rules.output import (
    emit_rules,
    format_decimal,
    load_rules,
    parse_descriptor,
    rule_records,
    target_tradeoff_curve,
    tradeoff_curve,
    write_curve_csv,
)


@pytest.fixture
def rules(mmer):
    return mine_sandwich(mmer, MiningConfig(0.3, 0.3, 1, 0.5))


@pytest.mark.parametrize("value,text", [
    (Fraction(3, 5), "0.6000"),
    (Fraction(1, 3), "0.3333"),
    (Fraction(2, 3), "0.6667"),
    (Fraction(1, 20000), "0.0001"),  # half rounds up
    (Fraction(1), "1.0000"),
    (Fraction(0), "0.0000"),
])
def test_format_decimal(value, text):
    assert format_decimal(value) == text


def test_text_line(rules, mmer):
    text = emit_rules(rules, "text")
    lines = text.splitlines()
    assert len(lines) == len(rules)
    target = [ln for ln in lines if ln.startswith("⟨Gender: Male⟩ ⇒ ⟨Category: Alcohol⟩ [")]
    assert target == [
        "⟨Gender: Male⟩ ⇒ ⟨Category: Alcohol⟩ [scov = 0.6000, tcov = 0.3333, "
        "sconf = 1.0000, tconf = 0.5000, supp = 0.6000] (right-partial)"
    ]


def test_empty_json(mmer):
    rs = mine_sandwich(mmer, MiningConfig(1, 1))
    assert json.loads(emit_rules(rs, "json")) == []
    assert emit_rules(rs, "text") == ""


def test_json_record_schema(rules):
    rec = rule_records(rules)[0]
    assert set(rec) == {"lhs", "rhs", "scov", "tcov", "sconf", "tconf", "supp", "subtype"}
    assert set(rec["scov"]) == {"decimal", "numerator", "denominator"}
    assert rec["lhs"] == [{"attribute": "Age", "value": "20..29"}]


def test_json_round_trip(rules, mmer):
    back = load_rules(emit_rules(rules, "json"), mmer)
    assert back == rules
    assert back.signature() == rules.signature()


def test_sink(rules):
    buf = io.StringIO()
    out = emit_rules(rules, "json", buf)
    assert buf.getvalue() == out


def test_csv(rules):
    rows = list(csv.DictReader(io.StringIO(emit_rules(rules, "csv"))))
    assert len(rows) == len(rules)
    men = [r for r in rows if r["lhs"] == "Gender=Male" and r["rhs"] == "Category=Alcohol"]
    assert men[0]["tcov"] == "0.3333"
    assert men[0]["tcov_exact"] == "1/3"


def test_unknown_format(rules):
    with pytest.raises(ValueError):
        emit_rules(rules, "xml")


def test_load_rejects_garbage(mmer):
    with pytest.raises(DataError):
        load_rules("{", mmer)
    with pytest.raises(DataError):
        load_rules("{}", mmer)
    with pytest.raises(DataError, match="record 0"):
        load_rules('[{"lhs": []}]', mmer)


@settings(max_examples=60, deadline=None)
@given(mmers(), thresholds, thresholds)
def test_round_trip_random(m, sc, tc):
    rs = mine_sandwich(m, MiningConfig(Fraction(1, 10), Fraction(1, 10), sc, tc))
    assert load_rules(emit_rules(rs, "json"), m) == rs


class TestParseDescriptor:
    def test_terms(self, mmer):
        d = parse_descriptor(mmer.source, "Gender=Male, Country=China")
        assert d == mmer.source.descriptor({"Country": "China", "Gender": "Male"})

    def test_unknown_attribute(self, mmer):
        with pytest.raises(DataError):
            parse_descriptor(mmer.source, "Shoe=42")

    def test_missing_equals(self, mmer):
        with pytest.raises(DataError):
            parse_descriptor(mmer.source, "Gender")


class TestTradeoff:
    def test_worked_example(self, mmer, men, alcohol):
        r = GranularRule(men, alcohol)
        assert tradeoff_curve(mmer, r, [0.5, 1.0]) == [(Fraction(1, 2), 1), (1, Fraction(2, 3))]

    def test_target_side(self, mmer, men, alcohol):
        r = GranularRule(men, alcohol)
        assert target_tradeoff_curve(mmer, r, [0.6, 1]) == [(Fraction(3, 5), 1), (1, Fraction(1, 2))]

    def test_non_increasing(self, mmer, men, alcohol):
        r = GranularRule(men, alcohol)
        grid = ["0.00001"] + [f"0.{k}" for k in range(1, 10)] + ["1"]
        ys = [y for _, y in tradeoff_curve(mmer, r, grid)]
        assert all(a >= b for a, b in zip(ys, ys[1:]))

    def test_bad_grid(self, mmer, men, alcohol):
        from granular_rules import ParameterError

        with pytest.raises(ParameterError):
            tradeoff_curve(mmer, GranularRule(men, alcohol), [0, 0.5])

    def test_csv(self, mmer, men, alcohol):
        buf = io.StringIO()
        write_curve_csv(tradeoff_curve(mmer, GranularRule(men, alcohol), [0.5, 1]), buf)
        assert buf.getvalue() == "tc,sconf\n0.500000,1.000000\n1.000000,0.666667\n"
