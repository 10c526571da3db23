"""
Report tests for LlamaTilt.

This module contains tests for report envelopes and their JSON, CSV and
text serializations.
"""

import json
import random
from fractions import Fraction

import pytest
import sympy as sp

from llamatilt.chern import ChernVector
from llamatilt.report import (
    SCHEMA_VERSION,
    TABLE_HEADERS,
    ReportEnvelope,
    canonical_json,
    emit,
    error_object,
    to_frame,
    to_jsonable,
)
from llamatilt.tilt import BmtForm, SlopeValue
from llamatilt.utils import DomainError, ParseError

F = Fraction


def no_floats(text):
    def reject(literal):
        raise AssertionError(f"float literal {literal} in JSON output")
    return json.loads(text, parse_float=reject)


@pytest.fixture
def wall_report():
    """A small wall report with three exact samples."""
    rows = [
        {"beta": F(1, 4), "alpha_sq": F(9, 16)},
        {"beta": F(1, 2), "alpha_sq": F(3, 4)},
        {"beta": F(3, 4), "alpha_sq": F(9, 16)},
    ]
    return ReportEnvelope.build("wall", {"v": ChernVector(1, 0, 0, 0)}, {"vertical": False, "rows": rows})


def random_value(rng, depth=0):
    kind = rng.randint(0, 6 if depth < 2 else 3)
    if kind == 0:
        return F(rng.randint(-50, 50), rng.randint(1, 12))
    if kind == 1:
        return rng.choice([True, False, None])
    if kind == 2:
        return rng.randint(-9, 9)
    if kind == 3:
        return rng.choice([SlopeValue.infinite(), SlopeValue.finite(F(rng.randint(-5, 5), 3))])
    if kind == 4:
        return ChernVector(*(F(rng.randint(-6, 6), rng.randint(1, 6)) for _ in range(4)))
    if kind == 5:
        return [random_value(rng, depth + 1) for _ in range(rng.randint(0, 3))]
    return {f"key{i}": random_value(rng, depth + 1) for i in range(rng.randint(0, 3))}


class TestToJsonable:
    """Tests for to_jsonable."""

    def test_exact_values(self):
        """Test the conversion of library values."""
        assert to_jsonable(F(-3, 2)) == "-3/2"
        assert to_jsonable(F(4)) == "4"
        assert to_jsonable(SlopeValue.infinite()) == "+inf"
        assert to_jsonable(ChernVector(-1, 1, F(-1, 2), F(1, 6))) == ["-1", "1", "-1/2", "1/6"]
        assert to_jsonable(BmtForm.WEAK) == "weak"
        assert to_jsonable((1, None, True)) == [1, None, True]
        assert to_jsonable(sp.Rational(2, 3) * sp.Symbol("A")) == "2*A/3"

    def test_integers_stay_numbers(self):
        """Test that int fields are JSON integers while whole rationals are strings."""
        data = to_jsonable({"n": 3, "c3": -156, "m_sq": F(6)})
        assert data == {"n": 3, "c3": -156, "m_sq": "6"}
        assert json.loads(json.dumps(data))["c3"] == -156

    def test_dataclass(self):
        """Test that dataclasses become dicts of converted fields."""
        from llamatilt.tilt import PositivityResult
        assert to_jsonable(PositivityResult(True, F(1, 3))) == {"delta_bar_ok": True, "value": "1/3"}

    def test_float_rejected(self):
        """Test that floats never reach the output."""
        with pytest.raises(TypeError):
            to_jsonable({"x": [0.5]})

    def test_unknown_type_rejected(self):
        """Test that unsupported objects are refused."""
        with pytest.raises(TypeError):
            to_jsonable(object())


class TestJson:
    """Tests for the canonical JSON form."""

    def test_canonical(self, wall_report):
        """Test sorted keys, string rationals and the trailing newline."""
        text = emit(wall_report, "json")
        assert text.endswith("}\n")
        data = no_floats(text)
        assert list(data) == sorted(data)
        assert data["schema"] == SCHEMA_VERSION
        assert data["results"]["rows"][0] == {"alpha_sq": "9/16", "beta": "1/4"}
        assert data["inputs"]["v"] == ["1", "0", "0", "0"]
        assert canonical_json(data) == text

    def test_round_trip(self):
        """Test parse(emit(r)) == r on random reports."""
        rng = random.Random(83)
        for _ in range(200):
            report = ReportEnvelope.build(
                rng.choice(["slope", "bmt", "search"]),
                {"v": random_value(rng), "alpha_sq": F(rng.randint(1, 20), rng.randint(1, 5))},
                {f"r{i}": random_value(rng) for i in range(rng.randint(0, 4))},
                assumptions=["Pic(X) = ZH"] * rng.randint(0, 2),
                warnings=["boundary"] * rng.randint(0, 1),
                propositions=["central charge"],
            )
            text = emit(report, "json")
            assert ReportEnvelope.from_dict(no_floats(text)) == report
            assert emit(ReportEnvelope.from_dict(json.loads(text)), "json") == text

    def test_from_dict_errors(self, wall_report):
        """Test schema and key validation when reading a report back."""
        data = wall_report.to_dict()
        with pytest.raises(ParseError):
            ReportEnvelope.from_dict({**data, "schema": 2})
        del data["results"]
        with pytest.raises(ParseError):
            ReportEnvelope.from_dict(data)

    def test_error_object(self):
        """Test the machine-readable error report."""
        error = DomainError("k must be negative", field="k", hypothesis="d < 0")
        data = error_object(error)
        assert data["schema"] == SCHEMA_VERSION
        assert data["error"] == {
            "type": "DomainError",
            "message": "k must be negative",
            "field": "k",
            "hypothesis": "d < 0",
        }


class TestTabular:
    """Tests for the CSV and text forms."""

    def test_wall_csv(self, wall_report):
        """Test the fixed wall header and exact cells."""
        assert emit(wall_report, "csv") == "beta,alpha_sq\n1/4,9/16\n1/2,3/4\n3/4,9/16\n"

    def test_family_header(self):
        """Test the family header and boolean cells."""
        row = {
            "n": 2, "m": 2, "c2": 4, "c3": -12,
            "ch0": F(-3), "ch1": F(6), "ch2": F(-2), "ch3": F(2),
            "nu_zero": True, "bmt_violated": True, "bmt_margin": F(-2, 3),
        }
        report = ReportEnvelope.build("p3-family", {"n": 2, "m": 2}, {"rows": [row]})
        lines = emit(report, "csv").splitlines()
        assert lines[0] == ",".join(TABLE_HEADERS["p3-family"])
        assert lines[0] == "n,m,c2,c3,ch0,ch1,ch2,ch3,nu_zero,bmt_violated"
        assert lines[1] == "2,2,4,-12,-3,6,-2,2,true,true"

    def test_empty_table(self):
        """Test that an empty result still writes the header."""
        report = ReportEnvelope.build("search", {}, {"rows": []})
        assert emit(report, "csv") == ",".join(TABLE_HEADERS["search"]) + "\n"

    def test_key_value_table(self):
        """Test the field,value layout for commands without a fixed header."""
        report = ReportEnvelope.build(
            "bmt",
            {},
            {"margin": F(-2, 3), "satisfied": False, "checked": [], "nested": {"x": None}},
        )
        frame = to_frame(report)
        assert list(frame.columns) == ["field", "value"]
        assert emit(report, "csv") == "field,value\nchecked,\nmargin,-2/3\nnested.x,\nsatisfied,false\n"

    def test_text(self, wall_report):
        """Test that the text form names the command and lists assumptions."""
        report = ReportEnvelope.build("bmt", {}, {"margin": F(0)}, assumptions=["input is tilt-stable"])
        text = emit(report, "text")
        assert text.startswith("bmt\n")
        assert "  - input is tilt-stable" in text
        assert "9/16" in emit(wall_report, "text")

    def test_unknown_format(self, wall_report):
        """Test that an unknown format is a domain error."""
        with pytest.raises(DomainError):
            emit(wall_report, "xml")
