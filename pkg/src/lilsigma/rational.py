"""Exact rational scalars and the elementary kernels <x>, V(x, xi), v(x).

Everything here is built on :class:`fractions.Fraction`, which keeps values
normalized at construction (gcd(|num|, den) = 1, den > 0, zero is 0/1).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

Rational = Fraction

__all__ = [
    "Rational",
    "RationalFormatError",
    "as_rational",
    "frac",
    "vee",
    "small_v",
    "format_rational",
    "parse_rational",
]

_RATIONAL_TEXT = re.compile(r"^(-?)(0|[1-9][0-9]*)(?:/([1-9][0-9]*))?$")


class RationalFormatError(ValueError):
    """Raised for text that is not a canonical ``num/den`` rational."""


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and canonical strings to a Fraction.

    Floats are refused on purpose: nothing in this package is allowed to
    pick up binary rounding silently.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def frac(x: Fraction) -> Fraction:
    """Fractional part ``x - floor(x)``, always in [0, 1)."""
    x = as_rational(x)
    return x - math.floor(x)


def vee(x: Fraction, xi: Fraction) -> Fraction:
    """Covariance kernel ``min(x, xi) - x*xi`` on [0, 1)^2."""
    x = as_rational(x)
    xi = as_rational(xi)
    if not (0 <= x < 1 and 0 <= xi < 1):
        raise ValueError(f"vee expects arguments in [0, 1), got {x}, {xi}")
    return min(x, xi) - x * xi


def small_v(x: Fraction) -> Fraction:
    f = frac(x)
    return f * (1 - f)


def format_rational(x: Fraction) -> str:
    """Canonical interchange text: ``"num/den"``, or ``"num"`` when den is 1."""
    x = as_rational(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str, *, strict: bool = True) -> Fraction:
    """Parse ``"num/den"`` or an integer.

    With ``strict`` (the default) only the canonical form is accepted: no
    whitespace, no leading zeros, no ``+`` sign, no ``-0`` and the fraction
    must already be in lowest terms with den > 1. ``"04/6"`` and ``"2/4"``
    are both rejected; ``"2/3"``, ``"-5/8"`` and ``"3"`` are accepted.
    """
    if not isinstance(text, str):
        raise RationalFormatError(f"expected text, got {type(text).__name__}")
    m = _RATIONAL_TEXT.match(text)
    if m is None:
        if strict:
            raise RationalFormatError(f"not a canonical rational: {text!r}")
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise RationalFormatError(f"not a rational: {text!r}") from exc
    sign, num_s, den_s = m.groups()
    num = int(num_s)
    den = int(den_s) if den_s is not None else 1
    if strict:
        if sign and num == 0:
            raise RationalFormatError(f"negative zero is not canonical: {text!r}")
        if den_s is not None and (den == 1 or math.gcd(num, den) != 1):
            raise RationalFormatError(f"not in lowest terms: {text!r}")
    value = Fraction(num, den)
    return -value if sign else value
