import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from prevbounds.document import parse_document
from prevbounds.errors import DimensionError, ParseError, SchemaError


class TestParseDocument:
    def test_moment_example(self, doc43_text):
        doc = parse_document(doc43_text)
        assert len(doc.atoms) == 3
        assert list(doc.gambles) == ["X"]
        assert doc.lower == {"X": 0.75}
        assert len(doc.assessment()) == 1

    def test_wrong_length(self):
        with pytest.raises(DimensionError):
            parse_document(b'{"atoms": ["a","b"], "gambles": {"X": [1,2,3]}, "lower": {}}')

    def test_upper_becomes_conjugate_entry(self):
        doc = parse_document(b'{"atoms": ["a","b","c"], "gambles": {"X": [-1,1,2]}, "lower": {}, "upper": {"X": 2.0}}')
        a = doc.assessment()
        assert a.names() == ["-X"]
        assert a.entry("-X").lower == -2.0
        assert list(a.gamble("-X")) == [1, -1, -2]

    @pytest.mark.parametrize(
        "text",
        [
            b'{"atoms": ["a"], "gambles": {}, "lower": {}, "extra": 1}',
            b'{"atoms": ["a"], "gambles": {}}',
            b'{"atoms": [], "gambles": {}, "lower": {}}',
            b'{"atoms": ["a", "a"], "gambles": {}, "lower": {}}',
            b'{"atoms": ["a"], "gambles": {"X": ["1"]}, "lower": {}}',
            b'{"atoms": ["a"], "gambles": {"X": [1]}, "lower": {"Y": 0}}',
            b'{"atoms": ["a"], "gambles": {"X": [true]}, "lower": {}}',
            b'[1, 2]',
        ],
    )
    def test_schema_errors(self, text):
        with pytest.raises(SchemaError):
            parse_document(text)

    def test_json_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_document(b'{"atoms": ["a"], "gambles": }')
        assert info.value.position == 28

    def test_non_finite_literal(self):
        with pytest.raises(ParseError):
            parse_document(b'{"atoms": ["a"], "gambles": {"X": [NaN]}, "lower": {}}')

    def test_not_utf8(self):
        with pytest.raises(ParseError):
            parse_document(b'\xff\xfe')


finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


@st.composite
def documents(draw):
    n = draw(st.integers(1, 5))
    atoms = [f"a{i}" for i in range(n)]
    names = draw(st.lists(st.from_regex(r"[A-Z][a-z0-9]{0,3}", fullmatch=True), min_size=1, max_size=3, unique=True))
    gambles = {k: draw(st.lists(finite, min_size=n, max_size=n)) for k in names}
    lower = {k: draw(finite) for k in names if draw(st.booleans())}
    upper = {k: draw(finite) for k in names if draw(st.booleans())}
    return {"atoms": atoms, "gambles": gambles, "lower": lower, "upper": upper}


class TestRoundTrip:
    @given(documents())
    def test_serialize_then_parse(self, obj):
        doc = parse_document(json.dumps(obj).encode())
        again = parse_document(doc.dumps().encode())
        assert again == doc
