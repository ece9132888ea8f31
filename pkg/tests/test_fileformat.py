from fractions import Fraction

import pytest
from hypothesis import given

from geomrank import (
    DuplicateEntry,
    IndexOutOfRange,
    ParseError,
    Tensor3,
    catalog_make,
    format_tensor,
    parse_tensor_file,
)
from test_catalog import SMALL
from test_tensor import tensors


def test_parse_examples():
    assert parse_tensor_file(b"t3 2 2 2\n0 0 1 1\n0 1 0 1\n1 0 0 1\n") == catalog_make("W")
    assert parse_tensor_file(b"t3 1 1 1\n0 0 0 1\n").entries == {(0, 0, 0): 1}


def test_errors_carry_lines():
    with pytest.raises(IndexOutOfRange) as e:
        parse_tensor_file(b"t3 2 2 2\n0 0 5 1\n")
    assert e.value.line == 2
    with pytest.raises(DuplicateEntry) as e:
        parse_tensor_file("t3 2 2 2\n# note\n0 0 0 1\n0 0 0 1\n")
    assert e.value.line == 4
    with pytest.raises(ParseError) as e:
        parse_tensor_file("t3 2 2\n")
    assert e.value.line == 1
    with pytest.raises(ParseError) as e:
        parse_tensor_file("t3 2 2 2\n0 0 x 1\n")
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_tensor_file("")
    with pytest.raises(ParseError):
        parse_tensor_file(b"\xff\xfe")


def test_comments_blank_lines_and_big_integers():
    big = 10**40
    T = parse_tensor_file(f"# header next\n\nt3 1 1 2\n  # inline\n0 0 1 {big}\n0 0 0 -3/6\n")
    assert T[0, 0, 1] == big and T[0, 0, 0] == Fraction(-1, 2)


def test_canonical_text():
    text = "t3 2 2 2\n1 0 0 1\n0 0 1 1\n0 1 0 1\n"
    assert format_tensor(parse_tensor_file(text)) == "t3 2 2 2\n0 0 1 1\n0 1 0 1\n1 0 0 1\n"


@pytest.mark.parametrize("case", SMALL, ids=lambda c: "-".join(map(str, c)))
def test_catalog_round_trip(case):
    T = catalog_make(*case)
    text = format_tensor(T)
    assert parse_tensor_file(text.encode()) == T
    assert format_tensor(parse_tensor_file(text)) == text


@given(tensors())
def test_round_trip_property(T):
    assert parse_tensor_file(format_tensor(T)) == T
    scaled = Tensor3(T.dims, {k: Fraction(v, 3) for k, v in T.items()})
    assert parse_tensor_file(format_tensor(scaled)) == scaled
