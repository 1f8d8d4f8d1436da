"""Grammar tests: parsing, formatting, round-trip identity, schema files."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from herdbook.errors import MalformedCode, SchemaMismatch, UnknownSymbol
from herdbook.seek import (
    DEFAULT_SCHEMA,
    WILDCARD,
    SeekCode,
    all_wildcards,
    format_code,
    load_schema,
    parse_code,
    save_schema,
)


def canonical_segments(slot):
    """Strategy over canonical segments for one slot, wildcard included."""
    if not slot.multi:
        return st.sampled_from(slot.values + (WILDCARD,))
    features = [v for v in slot.values if v != slot.none_token]
    combos = st.lists(
        st.sampled_from(features), min_size=1, max_size=3, unique=True
    ).map(lambda toks: "+".join(sorted(toks)))
    return st.one_of(st.just(slot.none_token), st.just(WILDCARD), combos)


canonical_codes = st.tuples(
    *[canonical_segments(s) for s in DEFAULT_SCHEMA.slots]
).map(lambda vals: SeekCode(values=vals))


class TestParse:
    def test_reference_string(self):
        code = parse_code("F:AD:T2:U:U:N1:U:X0")
        assert code.values == ("F", "AD", "T2", "U", "U", "N1", "U", "X0")
        assert format_code(code) == "F:AD:T2:U:U:N1:U:X0"

    def test_empty_string_rejected(self):
        with pytest.raises(MalformedCode):
            parse_code("")

    def test_wrong_segment_count(self):
        with pytest.raises(MalformedCode):
            parse_code("F:AD:T2")

    def test_unknown_symbol(self):
        with pytest.raises(UnknownSymbol):
            parse_code("F:ELDER:T2:U:U:N1:U:X0")
        with pytest.raises(UnknownSymbol):
            parse_code("F:AD:T2:U:U:Q9:U:X0")

    def test_wildcard_in_age_slot(self):
        code = parse_code("F:*:T2:U:U:N1:U:X0")
        assert code.is_wildcard(1)
        assert not code.is_wildcard(0)

    def test_feature_combination_canonicalized(self):
        # unsorted input is accepted and reordered
        code = parse_code("F:AD:T2:T3+N1:U:U:U:X0")
        assert code.values[3] == "N1+T3"
        assert format_code(code) == "F:AD:T2:N1+T3:U:U:U:X0"

    def test_none_token_cannot_combine(self):
        with pytest.raises(MalformedCode):
            parse_code("F:AD:T2:U+N1:U:U:U:X0")

    def test_empty_segment_rejected(self):
        with pytest.raises(MalformedCode):
            parse_code("F:AD:T2::U:N1:U:X0")


class TestFormat:
    def test_all_wildcards(self):
        assert format_code(all_wildcards()) == "*:*:*:*:*:*:*:*"

    def test_schema_version_checked(self):
        code = SeekCode(values=("F",) * 8, schema_version="other-v9")
        with pytest.raises(SchemaMismatch):
            format_code(code)

    @settings(max_examples=200)
    @given(canonical_codes)
    def test_round_trip_identity(self, code):
        s = format_code(code)
        assert parse_code(s) == code
        assert format_code(parse_code(s)) == s

    def test_distinct_codes_distinct_strings(self):
        # exhaustive over a sampled schema subset: sex x age x tusks,
        # other slots pinned
        tail = ("U", "U", "U", "U", "X0")
        seen = {}
        for sex, age, tusks in itertools.product(
            ("M", "F", "*"), ("CALF", "AD", "*"), ("T0", "T2", "*")
        ):
            code = SeekCode(values=(sex, age, tusks) + tail)
            s = format_code(code)
            assert s not in seen, f"collision between {code} and {seen[s]}"
            seen[s] = code
        assert len(seen) == 27


class TestSchemaIntrospection:
    def test_alphabets_closed_and_enumerable(self):
        alpha = DEFAULT_SCHEMA.alphabets()
        assert set(alpha) == set(DEFAULT_SCHEMA.slot_names)
        assert alpha["sex"] == ("M", "F")
        assert "U" in alpha["left_ear_prominent"]

    def test_schema_file_round_trip(self, tmp_path):
        path = tmp_path / "schema.json"
        save_schema(DEFAULT_SCHEMA, path)
        loaded = load_schema(path)
        assert loaded == DEFAULT_SCHEMA

    def test_schema_file_bad_format_rejected(self, tmp_path):
        path = tmp_path / "schema.json"
        path.write_text('{"format": "something-else", "version": "x", "slots": []}')
        with pytest.raises(MalformedCode):
            load_schema(path)
