"""Probe generators: exhaustive grids and seeded random measures/towers."""
from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .finmeas import FinMeasSpace
from .giry import MetaProb, Prob
from .rational import positive_weight_vectors, random_simplex_point, simplex_grid


def grid_probs(X: FinMeasSpace, max_den: int = 4) -> list:
    """Every Prob on X whose atom weights have denominators <= max_den."""
    return [Prob.from_vector(X, v) for v in simplex_grid(len(X.atoms), max_den)]


def towers(items, max_support: int = 3, max_den: int = 4) -> list:
    """Every meta-measure over ``items`` with support size <= max_support and
    weights with denominators <= max_den."""
    items = list(items)
    if not items:
        return []
    base = items[0].space if isinstance(items[0], Prob) else items[0].base
    out = []
    for k in range(1, max_support + 1):
        weights = positive_weight_vectors(k, max_den)
        for combo in itertools.combinations(items, k):
            for w in weights:
                out.append(MetaProb(base, zip(w, combo)))
    return out


def two_level_towers(X: FinMeasSpace, max_support: int = 3, max_den: int = 4) -> list:
    return towers(grid_probs(X, max_den), max_support, max_den)


def three_level_towers(X: FinMeasSpace, inner_den: int = 2, max_den: int = 4) -> list:
    """Depth-3 towers: support <= 2 at both outer levels over the
    denominator-<= inner_den Probs."""
    middle = towers(grid_probs(X, inner_den), 2, max_den)
    return towers(middle, 2, max_den)


def random_prob(rng: random.Random, X: FinMeasSpace, max_den: int = 12) -> Prob:
    return Prob.from_vector(X, random_simplex_point(rng, len(X.atoms), max_den))


def random_tower(rng: random.Random, X: FinMeasSpace, depth: int = 2, max_support: int = 3, max_den: int = 12):
    """A random Prob (depth 1) or MetaProb of the given depth."""
    if depth == 1:
        return random_prob(rng, X, max_den)
    k = rng.randint(1, max_support)
    items = [random_tower(rng, X, depth - 1, max_support, max_den) for _ in range(k)]
    weights = random_simplex_point(rng, k, max_den)
    return MetaProb.merged(X, zip(weights, items))


def random_probs(seed: int, X: FinMeasSpace, count: int, max_den: int = 12) -> list:
    rng = random.Random(seed)
    return [random_prob(rng, X, max_den) for _ in range(count)]


def random_alpha(rng: random.Random, max_den: int = 12) -> Fraction:
    d = rng.randint(1, max_den)
    return Fraction(rng.randint(0, d), d)
