"""Tests for exact scalars and the backend switch."""

from fractions import Fraction

import pytest

from src.treespectra.arith import (
    BackendMode,
    FieldArithmeticError,
    RationalParseError,
    ScalarBackend,
    TreeSpectraError,
    field_op,
    format_rational,
    parse_rational,
)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("10/3", Fraction(10, 3)),
        ("-4/2", Fraction(-2)),
        ("7", Fraction(7)),
        ("0.125", Fraction(1, 8)),
        (" -3 ", Fraction(-3)),
    ],
)
def test_parse_rational(text, expected):
    """Test parsing fraction, integer and decimal literals."""
    assert parse_rational(text) == expected


@pytest.mark.parametrize("text", ["1/0", "abc", "1/2/3", "", "1e5"])
def test_parse_rational_rejects(text):
    """Test malformed literals raise RationalParseError."""
    with pytest.raises(RationalParseError):
        parse_rational(text)


def test_parse_rational_requires_string():
    """Test non-string input is rejected."""
    with pytest.raises(RationalParseError):
        parse_rational(3)


def test_format_rational():
    """Test canonical rendering."""
    assert format_rational(Fraction(20, 6)) == "10/3"
    assert format_rational(Fraction(-4, 2)) == "-2"


def test_field_op():
    """Test exact field operations."""
    assert field_op("add", Fraction(1, 2), Fraction(1, 3)) == Fraction(5, 6)
    assert field_op("div", Fraction(1, 2), Fraction(1, 4)) == Fraction(2)
    with pytest.raises(FieldArithmeticError):
        field_op("div", Fraction(1), Fraction(0))
    with pytest.raises(ValueError):
        field_op("pow", Fraction(1), Fraction(2))


def test_exact_backend():
    """Test the exact backend keeps rationals and refuses floats."""
    backend = ScalarBackend.exact()
    assert backend.is_exact
    assert backend.coerce("3/4") == Fraction(3, 4)
    assert backend.is_zero(Fraction(0))
    assert backend.sign(Fraction(-1, 10**12)) == -1
    with pytest.raises(TreeSpectraError):
        backend.coerce(0.5)


def test_float_backend():
    """Test the float backend treats tiny values as zero."""
    backend = ScalarBackend.floating(1e-6)
    assert backend.mode == BackendMode.FLOAT
    assert backend.coerce("1/2") == 0.5
    assert backend.is_zero(1e-8)
    assert backend.sign(1e-8) == 0
    assert backend.sign(-0.1) == -1
