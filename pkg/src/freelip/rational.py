"""Canonical string encoding of rationals: ``"num"`` or ``"num/den"``."""

from __future__ import annotations

import re
from fractions import Fraction

_RATIONAL = re.compile(r"\s*([+-]?\d+)(?:\s*/\s*(\d+))?\s*\Z")


class RationalFormatError(ValueError):
    pass


def parse_rational(text) -> Fraction:
    if isinstance(text, bool):
        raise RationalFormatError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise RationalFormatError(f"rationals are encoded as strings, got {text!r}")
    m = _RATIONAL.match(text)
    if m is None:
        raise RationalFormatError(f"not a rational: {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise RationalFormatError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
