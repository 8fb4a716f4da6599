from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from lilsigma.rational import (
    RationalFormatError,
    as_rational,
    format_rational,
    frac,
    parse_rational,
    small_v,
    vee,
)

rationals = st.fractions(max_denominator=10**6).filter(lambda x: abs(x) < 10**6)
unit = st.fractions(min_value=0, max_value=1, max_denominator=10**5).filter(lambda x: x < 1)


def test_frac_examples():
    assert frac(F(7, 3)) == F(1, 3)
    assert frac(F(-1, 4)) == F(3, 4)
    assert frac(2**6 * F(277, 665)) == F(438, 665)
    assert 2**6 * F(277, 665) - 26 == F(438, 665)


def test_vee_examples():
    assert vee(F(1, 2), F(1, 2)) == F(1, 4)
    assert vee(F(1, 3), F(2, 3)) == F(1, 9)
    assert vee(F(0), F(5, 7)) == 0


def test_vee_domain():
    with pytest.raises(ValueError):
        vee(F(1), F(1, 2))
    with pytest.raises(ValueError):
        vee(F(-1, 2), F(1, 2))


def test_small_v_examples():
    assert small_v(F(1, 3)) == F(2, 9)
    assert small_v(F(5, 2)) == F(1, 4)
    assert small_v(F(0)) == 0


def test_as_rational_refuses_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)
    assert as_rational(3) == F(3)


@pytest.mark.parametrize("text", ["04/6", "2/4", "-0", "3/1", "1/0", "", "1/-2", "+1/2",
                                  " 1/2", "1.5", "1//2", "0/5"])
def test_parse_rejects_noncanonical(text):
    with pytest.raises(RationalFormatError):
        parse_rational(text)


def test_parse_examples():
    assert parse_rational("277/665") == F(277, 665)
    assert parse_rational("-5/8") == F(-5, 8)
    assert parse_rational("3") == F(3)
    assert parse_rational("0") == 0


@given(rationals)
def test_format_parse_roundtrip(x):
    text = format_rational(x)
    assert parse_rational(text) == x
    assert format_rational(parse_rational(text)) == text


@given(rationals)
def test_frac_range_and_shift(x):
    f = frac(x)
    assert 0 <= f < 1
    assert (x - f).denominator == 1
    assert frac(x + 5) == f


@given(unit, unit)
def test_vee_symmetric_and_bounded(x, y):
    assert vee(x, y) == vee(y, x)
    assert 0 <= vee(x, y) <= F(1, 4)
    assert vee(x, x) == small_v(x)
