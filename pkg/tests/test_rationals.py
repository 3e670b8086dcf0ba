"""Exact rational rendering, parsing, and logarithms.

decimal_str is checked against the decimal module's own rounding as an
independent oracle, plus a frozen set of known renderings.
"""

from __future__ import annotations

import decimal
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flip754 import decimal_str, floor_log2, log2_value, parse_rational, ratio_str


FROZEN = [
    # five significant digits, round half to even
    (Fraction(17, 64), "0.26562"),     # 0.265625: tie, 2 is even
    (Fraction(27, 64), "0.42188"),     # 0.421875: tie, 8 is even
    (Fraction(53, 64), "0.82812"),     # 0.828125: tie, 2 is even
    (Fraction(41, 50), "0.82000"),     # trailing zeros kept
    (Fraction(53707, 65472), "0.82030"),
    (Fraction(1, 64), "0.015625"),
    (Fraction(2), "2.0000"),
    (Fraction(0), "0"),
    (Fraction(-13, 128), "-0.10156"),
    (Fraction(1, 10000), "0.00010000"),   # last positional magnitude
    (Fraction(1, 100000), "1.0000e-05"),  # first scientific magnitude
    (Fraction(99999), "99999"),
    (Fraction(100000), "1.0000e+05"),
    (Fraction(99999, 100000), "0.99999"),
    (Fraction(9999999, 10000000), "1.0000"),  # carry into the next decade
    (Fraction(52, (2**52 - 1) * 64), "1.8041e-16"),
    (Fraction(11, 2046 * 64) * Fraction(1, 2**52), "1.8653e-20"),
]


@pytest.mark.parametrize("q,text", FROZEN, ids=[t for _, t in FROZEN])
def test_decimal_str_frozen(q, text):
    assert decimal_str(q, 5) == text


def test_decimal_str_digit_counts():
    q = Fraction(1, 3)
    assert decimal_str(q, 1) == "0.3"
    assert decimal_str(q, 3) == "0.333"
    assert decimal_str(q, 10) == "0.3333333333"
    with pytest.raises(ValueError):
        decimal_str(q, 0)


def test_decimal_str_half_even_both_directions():
    assert decimal_str(Fraction(15, 1000), 1) == "0.02"  # 0.015 -> even 2
    assert decimal_str(Fraction(25, 1000), 1) == "0.02"  # 0.025 -> even 2
    assert decimal_str(Fraction(35, 1000), 1) == "0.04"  # 0.035 -> even 4


@given(
    st.fractions(
        min_value=Fraction(1, 10**30), max_value=Fraction(10**30)
    ),
    st.integers(1, 12),
)
@settings(max_examples=300)
def test_decimal_str_matches_decimal_module(q, digits):
    ctx = decimal.Context(prec=digits, rounding=decimal.ROUND_HALF_EVEN)
    oracle = ctx.divide(decimal.Decimal(q.numerator), decimal.Decimal(q.denominator))
    rendered = decimal_str(q, digits)
    assert Fraction(decimal.Decimal(rendered)) == Fraction(oracle)


@given(
    st.fractions(
        min_value=Fraction(1, 10**30), max_value=Fraction(10**30)
    ),
    st.integers(1, 12),
)
@settings(max_examples=200)
def test_decimal_str_keeps_significant_digit_count(q, digits):
    mantissa = decimal_str(q, digits).split("e")[0].replace("-", "").replace(".", "")
    assert len(mantissa.lstrip("0")) <= digits
    assert len(mantissa) >= digits or mantissa.startswith("0")


def test_ratio_str():
    assert ratio_str(Fraction(13, 128)) == "13/128"
    assert ratio_str(Fraction(4, 2)) == "2"
    assert ratio_str(Fraction(-1, 4)) == "-1/4"


def test_parse_rational():
    assert parse_rational("13/128") == Fraction(13, 128)
    assert parse_rational("0.25") == Fraction(1, 4)
    assert parse_rational("1e-11") == Fraction(1, 10**11)
    assert parse_rational("-2.5e3") == -2500
    assert parse_rational(" 3/4 ") == Fraction(3, 4)
    for bad in ("", "zzz", "1/0", "0x10", "1/2/3"):
        with pytest.raises(ValueError):
            parse_rational(bad)


@given(st.fractions())
@settings(max_examples=200)
def test_parse_ratio_round_trip(q):
    assert parse_rational(ratio_str(q)) == q


def test_log2_value():
    assert log2_value(Fraction(0)) is None
    assert log2_value(Fraction(8)) == 3.0
    assert log2_value(Fraction(1, 2)) == -1.0
    # beyond host-float range: 2^1024 overflows float() but not this
    assert log2_value(Fraction(2) ** 1024) == 1024.0
    big = Fraction(2**1024 - 1)
    assert math.isclose(log2_value(big), 1024.0, rel_tol=1e-12)
    with pytest.raises(ValueError):
        log2_value(Fraction(-1))


def test_floor_log2_known_values():
    assert floor_log2(Fraction(1)) == 0
    assert floor_log2(Fraction(1, 2)) == -1
    assert floor_log2(Fraction(3, 4)) == -1
    assert floor_log2(Fraction(10**11)) == 36
    assert floor_log2(Fraction(2) ** 1024) == 1024
    with pytest.raises(ValueError):
        floor_log2(Fraction(0))


@given(st.fractions(min_value=Fraction(1, 10**40), max_value=Fraction(10**40)))
@settings(max_examples=300)
def test_floor_log2_bracketing(q):
    n = floor_log2(q)
    assert Fraction(2) ** n <= q < Fraction(2) ** (n + 1)
