import json
import random
import warnings

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from semitoric.errors import ParseError
from semitoric.fixtures import L0, corpus, random_ingredients
from semitoric.sti import FIELDS, UnknownFieldWarning, dumps, load, loads, parse, to_document

TEXT = dumps(L0())


@pytest.mark.parametrize("name", sorted(corpus()))
def test_corpus_round_trip(name):
    L = corpus()[name]
    text = dumps(L)
    assert loads(text) == L
    assert dumps(loads(text)) == text


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_random_round_trip(seed):
    L = random_ingredients(random.Random(seed))
    assert loads(dumps(L)) == L


def test_layout():
    assert TEXT.endswith("}\n")
    assert list(json.loads(TEXT)) == list(FIELDS)
    assert '"heights": ["1/2"]' in TEXT
    assert '["0", "0"]' in TEXT


def test_rationals_are_strings():
    doc = to_document(L0())
    assert doc["heights"] == ["1/2"]
    assert all(isinstance(c, str) for v in doc["polygon"]["vertices"] for c in v)


def test_decimal_rejected():
    with pytest.raises(ParseError):
        loads(TEXT.replace('["1/2"]', '["0.5"]'))


def test_bad_rational_reports_position():
    with pytest.raises(ParseError) as e:
        loads(TEXT.replace('"1/2"]', '"x/2"]'))
    assert e.value.line == TEXT[: TEXT.index('"heights"')].count("\n") + 1
    assert e.value.column == 3


def test_json_syntax_error_position():
    with pytest.raises(ParseError) as e:
        loads(TEXT[:-5])
    assert e.value.line is not None and e.value.column is not None


def test_unknown_field_strict_and_lenient():
    text = TEXT.replace('"m_f": 1', '"m_f": 1, "colour": "red"')
    with pytest.raises(ParseError) as e:
        loads(text)
    assert "colour" in str(e.value) and e.value.line == 3
    with pytest.warns(UnknownFieldWarning):
        parsed = parse(text, lenient=True)
    assert parsed.ingredients == L0()
    assert parsed.warnings == ["unknown field 'colour' in file"]


def test_missing_field():
    doc = json.loads(TEXT)
    del doc["indices"]
    with pytest.raises(ParseError, match="indices"):
        loads(json.dumps(doc))


def test_count_mismatch_is_a_parse_error():
    with pytest.raises(ParseError, match="lines and signs"):
        loads(TEXT.replace('"signs": [1]', '"signs": [1, 1]'))


def test_height_count_mismatch_parses():
    # caught later by validation item (i), not by the reader
    L = loads(TEXT.replace('"heights": ["1/2"]', '"heights": ["1/2", "1/3"]'))
    assert len(L.heights) == 2


def test_wrong_version():
    with pytest.raises(ParseError, match="version"):
        loads(TEXT.replace('"version": 1', '"version": 9'))


def test_load_from_file(tmp_path):
    p = tmp_path / "L0.sti"
    p.write_text(TEXT)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert load(p) == L0()
