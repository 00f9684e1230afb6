from fractions import Fraction as F

import pytest

from girylab.algebra import (
    GiryAlgebra,
    algebra_from_convex,
    coequalizer,
    equivalence_roundtrip,
    find_isomorphism,
    law_reports,
    probe_towers,
    theta_check,
)
from girylab.convex import Semilattice, semilattices
from girylab.errors import ConsistencyError, InputError
from girylab.finmeas import FinMeasSpace
from girylab.giry import Prob, dirac
from girylab.probes import grid_probs, towers


def D(*names):
    return FinMeasSpace(list(names))


def small_towers(X):
    return towers(grid_probs(X, 2), 2, 2)


def meet_h(P):
    """Barycenter on the chain 0 < 1 < 2: the least point in the support."""
    return min(k for k, w in zip(P.space.atom_keys, P.vector) if w)


def test_meet_is_an_algebra():
    X = D("0", "1", "2")
    alg = GiryAlgebra.checked(X, meet_h, small_towers(X))
    assert all(r.passed for r in alg.reports)
    assert alg(Prob(X, {"1": F(1, 2), "2": F(1, 2)})) == "1"


def test_argmax_is_not_an_algebra():
    X = D("0", "1")

    def argmax(P):
        return max(zip(P.vector, P.space.atom_keys))[1]

    reports = law_reports(X, argmax, small_towers(X))
    assert reports[0].passed and not reports[1].passed
    with pytest.raises(ConsistencyError):
        GiryAlgebra.checked(X, argmax, small_towers(X))


def test_corrupted_barycenter_rejected():
    # negative control: the barycenter of a chain with one non-dirac value flipped
    A = Semilattice.chain(3)
    good = algebra_from_convex(A, small_towers(D("0", "1", "2")))
    X = good.space
    bad_at = Prob(X, {"1": F(1, 2), "2": F(1, 2)})

    def corrupted(P):
        return "2" if P == bad_at else good(P)

    with pytest.raises(ConsistencyError):
        GiryAlgebra.checked(X, corrupted, probe_towers(X, random_count=0))


def test_unit_law_failure():
    X = D("0", "1")
    with pytest.raises(ConsistencyError, match="algebra_unit"):
        GiryAlgebra.checked(X, lambda P: "0", small_towers(X))


def test_evaluator_must_return_point():
    X = D("0", "1")
    with pytest.raises(ConsistencyError):
        GiryAlgebra.checked(X, lambda P: "z", small_towers(X))


def test_from_table():
    X = D("0", "1")
    table = {"0:1": "0", "1:1": "1", "0:1/2,1:1/2": "0", "0:1/4,1:3/4": "0", "0:3/4,1:1/4": "0"}
    alg = GiryAlgebra.from_table(X, table)
    assert alg(dirac(X, "1")) == "1"
    with pytest.raises(InputError):
        alg(Prob(X, {"0": F(1, 3), "1": F(2, 3)}))
    with pytest.raises(InputError):
        GiryAlgebra.from_table(X, {"0:1": "0"})
    bad = dict(table, **{"0:1/2,1:1/2": "1"})
    with pytest.raises(ConsistencyError):
        GiryAlgebra.from_table(X, bad)


def test_probe_towers_deterministic():
    X = D("0", "1")
    a, b = probe_towers(X, seed=3), probe_towers(X, seed=3)
    assert a == b
    assert len(a) == len(probe_towers(X, random_count=0)) + 100
    assert all(len(M.support) <= 3 for M in probe_towers(X, random_count=0))


def test_coequalizer_reports_and_classes():
    A = Semilattice.chain(3)
    X = D("0", "1", "2")
    alg = algebra_from_convex(A, small_towers(X))
    Q, q, reports = coequalizer(alg, towers_=small_towers(X))
    assert [r.lemma for r in reports] == ["CoEq_axioms", "q_affine", "congruence", "coforks", "coequalizer_universal"]
    assert all(r.passed for r in reports), [r.witness for r in reports if not r.passed]
    classes = Q.classes(grid_probs(X, 2))
    # oracle: class of P is the least element of its support
    for k, members in classes.items():
        assert all(meet_h(P) == k for P in members)
    assert find_isomorphism(Q, A)[0] is not None


def test_theta():
    A = semilattices(3)[1]
    X_alg = algebra_from_convex(A, small_towers(FinMeasSpace(A.elements())))
    assert theta_check(X_alg).passed


def test_find_isomorphism():
    a, b = semilattices(3)
    f, mismatch = find_isomorphism(a, b)
    assert f is None and mismatch
    f, _ = find_isomorphism(a, a)
    assert f == {x: x for x in a.elements()}
    assert find_isomorphism(a, Semilattice.chain(2))[1] == {"sizes": [3, 2]}


@pytest.mark.parametrize("A", semilattices(3), ids=["chain", "vee"])
def test_roundtrip_small(A):
    X = FinMeasSpace(A.elements())
    reports = equivalence_roundtrip(A, small_towers(X))
    assert all(r.passed for r in reports), [(r.lemma, r.witness) for r in reports if not r.passed]


def test_roundtrip_full_towers_chain3():
    reports = equivalence_roundtrip(Semilattice.chain(3))
    assert all(r.passed for r in reports)
