from fractions import Fraction

import pytest

from girylab.finmeas import FinMeasSpace


def partitions(items):
    """Every set partition of ``items`` (oracle helper)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def spaces_up_to(n_points):
    """Every finite measurable space on ``p0..p{k-1}``, k <= n_points."""
    out = []
    for k in range(1, n_points + 1):
        pts = [f"p{i}" for i in range(k)]
        for part in partitions(pts):
            out.append(FinMeasSpace(pts, part))
    return out


@pytest.fixture
def X3():
    return FinMeasSpace(["x1", "x2", "x3"])


@pytest.fixture
def Xab():
    return FinMeasSpace(["a", "b", "c"], [["a", "b"], ["c"]])


def F(s):
    return Fraction(s)
