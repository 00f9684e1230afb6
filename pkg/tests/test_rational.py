from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from girylab.errors import InputError
from girylab.rational import format_rational, parse_rational, simplex_grid, unit_grid


@pytest.mark.parametrize("text,value", [("1/3", Fraction(1, 3)), ("0", Fraction(0)), ("-2/5", Fraction(-2, 5)), ("7", Fraction(7))])
def test_parse(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["2/4", "1/0", "x", "1.5", "", "1/-3"])
def test_parse_rejects(bad):
    with pytest.raises(InputError):
        parse_rational(bad)


def test_non_strict_accepts_unreduced():
    assert parse_rational("2/4", strict=False) == Fraction(1, 2)


@given(st.fractions())
def test_format_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_grids():
    assert unit_grid(2) == (Fraction(0), Fraction(1, 2), Fraction(1))
    # count of vectors on the grid: brute force over all tuples
    grid = unit_grid(4)
    import itertools

    for n in (1, 2, 3):
        brute = [v for v in itertools.product(grid, repeat=n) if sum(v) == 1]
        assert sorted(simplex_grid(n, 4)) == sorted(brute)
