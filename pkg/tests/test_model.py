import pytest
from hypothesis import given, strategies as st

from nyayakit.corpus import render_trace
from nyayakit.model import (
    DOUBT_TYPES,
    FALLACY_SETS,
    Invalid,
    PHASES,
    normalize_enum_token,
    parse_doubt_type,
    title_of,
)
from nyayakit.parser import parse_trace

from conftest import APPENDIX_IDS, output_text


@pytest.mark.parametrize(
    "surface, key",
    [
        ("Vipratipatti (Conflicting possibilities to determine)", "vipratipatti"),
        ("Vipratipatti Samshaya (Conflicting possibilities)", "vipratipatti_samshaya"),
        ("", ""),
        ("**Samana Dharma Upapatti**", "samana_dharma_upapatti"),
        ("  Anekadharma   Upapatti ", "anekadharma_upapatti"),
    ],
)
def test_normalize_examples(surface, key):
    assert normalize_enum_token(surface) == key


@given(st.text())
def test_normalize_idempotent(text):
    once = normalize_enum_token(text)
    assert normalize_enum_token(once) == once


@pytest.mark.parametrize("key", DOUBT_TYPES)
def test_title_form_normalizes_to_key(key):
    assert normalize_enum_token(title_of(key)) == key


def test_doubt_type_keeps_invalid_value():
    assert parse_doubt_type("Vipratipatti (x)") == "vipratipatti"
    assert parse_doubt_type("Vipratipatti Samshaya") == Invalid("vipratipatti_samshaya")
    assert parse_doubt_type("  ") is None


def test_enumerations():
    assert len(DOUBT_TYPES) == 5
    assert PHASES[0] == "samshaya" and PHASES[-1] == "nirnaya"
    assert "prakaranasama" in FALLACY_SETS["canonical"]
    assert all(len(v) == 5 for v in FALLACY_SETS.values())


@pytest.mark.parametrize("name", APPENDIX_IDS)
def test_trace_round_trips_through_renderer(name):
    first = parse_trace(output_text(name)).trace
    again = parse_trace(render_trace(first)).trace
    assert again == first


def test_trace_is_immutable(d1):
    trace = parse_trace(d1).trace
    with pytest.raises(Exception):
        trace.samshaya = None
    assert trace.phase_presence == (True,) * 6
