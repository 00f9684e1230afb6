import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from girylab.errors import InputError
from girylab.finmeas import FinMeasSpace, MeasurableMap, compose, hom_set, identity
from girylab.giry import (
    Kernel,
    MetaProb,
    Prob,
    delta,
    dirac,
    identity_kernel,
    kleisli_compose,
    mix_meta,
    monad_law_suite,
    mu,
    naturality_suite,
    push_tower,
    pushforward,
    unit_lift,
)
from girylab.probes import grid_probs, random_probs, random_tower, three_level_towers, two_level_towers

from conftest import spaces_up_to


def D(*names):
    return FinMeasSpace(list(names))


def test_prob_validation():
    X = D("a", "b")
    with pytest.raises(InputError):
        Prob(X, {"a": F(1, 2)})
    with pytest.raises(InputError):
        Prob(X, {"a": F(3, 2), "b": F(-1, 2)})
    with pytest.raises(InputError):
        Prob(X, {"z": 1})


def test_dirac_examples(Xab):
    X = D("x1", "x2", "x3")
    assert dirac(X, "x1").vector == (1, 0, 0)
    assert dirac(Xab, "a") == dirac(Xab, "b") != dirac(Xab, "c")
    with pytest.raises(InputError):
        dirac(X, "nope")


def test_pushforward_example():
    X, Y = D("x1", "x2", "x3"), D("y1", "y2")
    f = MeasurableMap(X, Y, {"x1": "y1", "x2": "y1", "x3": "y2"})
    P = Prob(X, {"x1": F(1, 6), "x2": F(1, 3), "x3": F(1, 2)})
    assert pushforward(f, P).vector == (F(1, 2), F(1, 2))
    swap = MeasurableMap(Y, Y, {"y1": "y2", "y2": "y1"})
    Q = Prob(Y, {"y1": F(1, 2), "y2": F(1, 2)})
    assert pushforward(swap, Q) == Q
    with pytest.raises(InputError):
        pushforward(f, Q)


def test_mu_example():
    X = D("a", "b")
    P1 = Prob(X, {"a": 1})
    P2 = Prob(X, {"a": F(1, 4), "b": F(3, 4)})
    M = MetaProb(X, [(F(1, 3), P1), (F(2, 3), P2)])
    assert mu(M).vector == (F(1, 2), F(1, 2))
    assert mu(delta(P2)) == P2
    assert mu(unit_lift(P2)) == P2


def test_metaprob_validation():
    X = D("a", "b")
    P = dirac(X, "a")
    with pytest.raises(InputError):
        MetaProb(X, [(F(1, 2), P), (F(1, 2), P)])
    with pytest.raises(InputError):
        MetaProb(X, [(F(1, 2), P)])
    with pytest.raises(InputError):
        MetaProb(X, [(0, P), (1, dirac(X, "b"))])


def matmul(A, B):
    """Oracle: plain stochastic matrix product."""
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))] for i in range(len(A))]


def test_kleisli_examples():
    Y = D("y1", "y2")
    k1 = Kernel(Y, Y, {"y1": Prob(Y, {"y1": F(1, 2), "y2": F(1, 2)}), "y2": Prob(Y, {"y2": 1})})
    k2 = Kernel(Y, Y, {"y1": Prob(Y, {"y1": 1}), "y2": Prob(Y, {"y1": F(1, 3), "y2": F(2, 3)})})
    k = kleisli_compose(k1, k2)
    assert k.rows["y1"].vector == (F(2, 3), F(1, 3))
    assert kleisli_compose(k1, identity_kernel(Y)) == k1
    with pytest.raises(InputError):
        kleisli_compose(k1, identity_kernel(D("z")))


def random_kernel(rng, X, Y):
    return Kernel(X, Y, {k: p for k, p in zip(X.atom_keys, random_probs(rng.randint(0, 10**6), Y, len(X.atoms)))})


@given(st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_kleisli_is_matrix_product(seed):
    rng = random.Random(seed)
    X, Y, Z = D("a", "b"), D("u", "v", "w"), D("p", "q")
    k1, k2, k3 = random_kernel(rng, X, Y), random_kernel(rng, Y, Z), random_kernel(rng, Z, X)
    k = kleisli_compose(k1, k2)
    m = matmul([list(r.vector) for r in k1.rows.values()], [list(r.vector) for r in k2.rows.values()])
    assert [list(r.vector) for r in k.rows.values()] == m
    assert kleisli_compose(kleisli_compose(k1, k2), k3) == kleisli_compose(k1, kleisli_compose(k2, k3))


def test_constant_rows_give_average():
    X, Y = D("a", "b"), D("u", "v")
    P = Prob(Y, {"u": F(1, 3), "v": F(2, 3)})
    k1 = Kernel(X, Y, {"a": P, "b": P})
    k2 = Kernel(Y, X, {"u": Prob(X, {"a": 1}), "v": Prob(X, {"a": F(1, 2), "b": F(1, 2)})})
    row = kleisli_compose(k1, k2).rows["a"]
    assert row == kleisli_compose(k1, k2).rows["b"]
    assert row.vector == (F(1, 3) + F(2, 3) * F(1, 2), F(2, 3) * F(1, 2))


def test_monad_laws_small():
    X = D("a", "b", "c")
    probes = [dirac(X, x) for x in X.points]
    assert monad_law_suite(X, probes).passed
    rng = random.Random(1)
    probes = [random_tower(rng, X, rng.randint(1, 3)) for _ in range(100)]
    assert monad_law_suite(X, probes).passed


def test_monad_laws_negative_control():
    X = D("a", "b")

    def broken_mu(M):
        out = mu(M)
        if isinstance(out, Prob) and out.vector[0] not in (0, 1):
            return Prob(X, {"a": 0, "b": 1})  # drops the weight on a
        return out

    rng = random.Random(2)
    probes = [random_tower(rng, X, 1) for _ in range(30)]
    report = monad_law_suite(X, probes, mu_impl=broken_mu)
    assert not report.passed and report.witness is not None


@pytest.mark.parametrize("X", [X for X in spaces_up_to(3) if len(X.atoms) <= 2], ids=repr)
def test_functoriality_and_naturality(X):
    for Y in spaces_up_to(2):
        for f in hom_set(X, Y):
            for P in grid_probs(X, 4):
                assert pushforward(identity(X), P) == P
            for g in hom_set(Y, Y):
                for P in grid_probs(X, 2):
                    assert pushforward(compose(g, f), P) == pushforward(g, pushforward(f, P))
            assert naturality_suite(f, two_level_towers(X, 2, 2)).passed


def test_mu_affine_and_natural():
    X, Y = D("a", "b", "c"), D("u", "v")
    f = MeasurableMap(X, Y, {"a": "u", "b": "v", "c": "v"})
    rng = random.Random(3)
    for _ in range(30):
        M1, M2 = random_tower(rng, X, 2), random_tower(rng, X, 2)
        al = F(rng.randint(0, 6), 6)
        assert mu(mix_meta(M1, M2, al)) == mu(M1).mix(mu(M2), al)
        assert pushforward(f, mu(M1)) == mu(push_tower(f, M1))


def test_probe_counts():
    X = D("a", "b", "c")
    assert len(grid_probs(X, 4)) == 22
    grid = [F(p, q) for q in range(1, 5) for p in range(1, q + 1)]
    positive = {k: len({w for w in itertools.product(set(grid), repeat=k) if sum(w) == 1}) for k in (1, 2, 3)}
    n = 22
    expected = sum(positive[k] * len(list(itertools.combinations(range(n), k))) for k in (1, 2, 3))
    assert len(two_level_towers(X)) == expected == 7337
    assert all(M.depth == 3 for M in three_level_towers(X))


def test_json_round_trip():
    X = D("a", "b")
    P = Prob(X, {"a": F(1, 3), "b": F(2, 3)})
    assert Prob.from_json(X, P.to_json()) == P
    assert Prob.parse_key(X, P.key()) == P
    k = identity_kernel(X)
    assert Kernel.from_json(X, X, k.to_json()) == k
    with pytest.raises(InputError, match="row 'a'"):
        Kernel.from_json(X, X, {"rows": {"a": {"weights": {"a": "9/10"}}, "b": {"weights": {"b": "1"}}}})
