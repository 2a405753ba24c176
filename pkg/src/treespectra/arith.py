"""Exact rational scalars and the backend switch shared by every engine."""

import logging
import operator
import re
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Dict, Union

from pydantic import BaseModel, ConfigDict, Field


logger = logging.getLogger(__name__)

Rational = Fraction
Scalar = Union[Fraction, float]

DEFAULT_ZERO_TOLERANCE = 1e-9

_RATIONAL_LITERAL = re.compile(r"^\s*-?\d+(?:/(\d+)|\.\d+)?\s*$")

_FIELD_OPS: Dict[str, Callable[[Fraction, Fraction], Fraction]] = {
    "add": operator.add,
    "sub": operator.sub,
    "mul": operator.mul,
    "div": operator.truediv,
}


class TreeSpectraError(Exception):
    """Base exception for toolkit errors."""
    pass


class RationalParseError(TreeSpectraError, ValueError):
    """Raised for malformed rational literals."""
    pass


class FieldArithmeticError(TreeSpectraError, ZeroDivisionError):
    """Raised when a field operation is undefined."""
    pass


def parse_rational(text: str) -> Fraction:
    """
    Parse a fraction (``p/q``), integer or decimal literal.

    Args:
        text: Literal such as ``"10/3"``, ``"-4/2"`` or ``"0.125"``

    Returns:
        Canonical Fraction equal to the literal
    """
    if not isinstance(text, str):
        raise RationalParseError(f"Expected a string literal, got {type(text).__name__}")
    match = _RATIONAL_LITERAL.match(text)
    if match is None:
        logger.error(f"Invalid rational literal: {text!r}")
        raise RationalParseError(f"Invalid rational literal: {text!r}")
    if match.group(1) is not None and int(match.group(1)) == 0:
        raise RationalParseError(f"Zero denominator in {text!r}")
    return Fraction(text.strip())


def format_rational(value: Fraction) -> str:
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    return str(Fraction(value))


def field_op(op: str, a: Fraction, b: Fraction) -> Fraction:
    """Apply one of add, sub, mul, div exactly."""
    try:
        func = _FIELD_OPS[op]
    except KeyError:
        raise ValueError(f"Unknown field operation: {op}")
    try:
        return Fraction(func(Fraction(a), Fraction(b)))
    except ZeroDivisionError as e:
        raise FieldArithmeticError(f"Division by zero: {a} / {b}") from e


class BackendMode(str, Enum):
    """Scalar arithmetic modes."""
    EXACT = "exact"
    FLOAT = "float"


class ScalarBackend(BaseModel):
    """Decides how scalars are represented and when a value counts as zero."""

    model_config = ConfigDict(frozen=True)

    mode: BackendMode = Field(default=BackendMode.EXACT, description="Arithmetic mode")
    zero_tolerance: float = Field(
        default=DEFAULT_ZERO_TOLERANCE,
        gt=0,
        description="Absolute zero threshold used in float mode",
    )

    @classmethod
    def exact(cls) -> "ScalarBackend":
        return cls(mode=BackendMode.EXACT)

    @classmethod
    def floating(cls, zero_tolerance: float = DEFAULT_ZERO_TOLERANCE) -> "ScalarBackend":
        return cls(mode=BackendMode.FLOAT, zero_tolerance=zero_tolerance)

    @property
    def is_exact(self) -> bool:
        return self.mode == BackendMode.EXACT

    def coerce(self, value: Any) -> Scalar:
        """Convert an input value to this backend's scalar type."""
        if isinstance(value, str):
            value = parse_rational(value)
        if self.is_exact:
            if isinstance(value, float):
                raise RationalParseError(
                    f"Exact backend needs rational input, got float {value!r}"
                )
            return Fraction(value)
        return float(value)

    def is_zero(self, value: Scalar) -> bool:
        if self.is_exact:
            return value == 0
        return abs(value) <= self.zero_tolerance

    def sign(self, value: Scalar) -> int:
        if self.is_zero(value):
            return 0
        return 1 if value > 0 else -1
