"""Exact rational helpers: the "p/q" wire form and probe grids."""
from __future__ import annotations

import itertools
import re
from fractions import Fraction
from functools import lru_cache

from .errors import InputError

_RAT = re.compile(r"^(-?\d+)(?:/(\d+))?$")

#: alpha values at which the semilattice branch changes
CANONICAL_ALPHAS = (Fraction(0), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1))


def parse_rational(text, *, strict=True) -> Fraction:
    """Parse ``"p/q"`` (or an integer string) into a Fraction.

    With ``strict`` the text must already be in lowest terms with ``q > 0``.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise InputError(f"rational must be a string 'p/q', got {text!r}")
    m = _RAT.match(text.strip())
    if m is None:
        raise InputError(f"cannot parse rational {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    value = Fraction(num, den)
    if strict and m.group(2) is not None and (value.numerator != num or value.denominator != den):
        raise InputError(f"rational {text!r} is not in lowest terms")
    return value


def format_rational(value) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=None)
def unit_grid(max_den: int) -> tuple:
    """Sorted rationals in [0, 1] whose denominator is at most ``max_den``."""
    return tuple(sorted({Fraction(p, q) for q in range(1, max_den + 1) for p in range(q + 1)}))


@lru_cache(maxsize=None)
def simplex_grid(n: int, max_den: int) -> tuple:
    """All length-``n`` vectors of grid rationals summing to exactly 1."""
    if n == 0:
        return ()
    values = unit_grid(max_den)
    out = []

    def rec(prefix, remaining, left):
        if left == 1:
            if remaining in values:
                out.append(tuple(prefix) + (remaining,))
            return
        for v in values:
            if v > remaining:
                break
            prefix.append(v)
            rec(prefix, remaining - v, left - 1)
            prefix.pop()

    rec([], Fraction(1), n)
    return tuple(out)


def positive_weight_vectors(k: int, max_den: int) -> tuple:
    """Grid weight vectors of length ``k`` with every entry strictly positive."""
    return tuple(w for w in simplex_grid(k, max_den) if all(x > 0 for x in w))


def random_simplex_point(rng, n: int, max_den: int = 12) -> tuple:
    """A random rational probability vector with common denominator <= max_den."""
    den = rng.randint(1, max_den)
    # stars and bars over `den` units
    cuts = sorted(rng.randint(0, den) for _ in range(n - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [den])]
    return tuple(Fraction(p, den) for p in parts)


def pairs(seq):
    return itertools.product(seq, repeat=2)
