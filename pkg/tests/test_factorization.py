import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from girylab.convex import IntervalQ, Semilattice, Simplex, semilattices
from girylab.errors import ConsistencyError, InputError, PreconditionError
from girylab.factorization import (
    ProbeFunction,
    ProbSpace,
    adjunct,
    adjunct_suite,
    affine_measure_path_check,
    complement_law,
    counit,
    counit_affinity,
    counit_naturality,
    counit_oracle,
    evaluation_functionals,
    function_space_two,
    integral,
    lemma_suite_scale_preserve,
    measure_from_spec,
    point_from_alpha2,
    probe_functions,
    spec2_naturality,
    spec2_roundtrip,
    spec_from_functional,
    spec_from_measure,
    triangle_suite,
    weakly_averaging_affine_functionals,
)
from girylab.convex import hom_enum
from girylab.finmeas import FinMeasSpace, MeasurableMap, hom_set
from girylab.giry import Prob, dirac
from girylab.probes import grid_probs, random_probs
from girylab.sigma import presentation


def D(*names):
    return FinMeasSpace(list(names))


def test_integral_against_pointwise_sum(Xab):
    P = Prob(Xab, {"a": F(1, 3), "c": F(2, 3)})
    f = ProbeFunction(Xab, {Xab.atom_of("a"): F(1, 2), Xab.atom_of("c"): F(1, 4)})
    # oracle: sum over atoms written out by hand
    assert integral(P, f) == F(1, 3) * F(1, 2) + F(2, 3) * F(1, 4)
    with pytest.raises(InputError):
        integral(P, ProbeFunction.constant(D("a"), 1))


def test_probe_function_validation():
    X = D("a", "b")
    with pytest.raises(InputError):
        ProbeFunction(X, {"a": F(3, 2), "b": 0})
    assert len(probe_functions(X, 2)) == 9


@given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.lists(st.integers(0, 4), min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_spec_from_measure_matches_integral(ws, vs):
    if not sum(ws):
        return
    X = D("a", "b", "c")
    P = Prob(X, {k: F(w, sum(ws)) for k, w in zip("abc", ws)})
    f = ProbeFunction(X, {k: F(v, 4) for k, v in zip("abc", vs)})
    el = spec_from_measure(P)
    assert el.alpha_I(f) == sum(F(w, sum(ws)) * F(v, 4) for w, v in zip(ws, vs))
    assert measure_from_spec(el) == P


def test_alpha2_is_epsilon2_of_integral():
    X = D("a", "b")
    half = Prob(X, {"a": F(1, 2), "b": F(1, 2)})
    el = spec_from_measure(half)
    assert el.alpha_2(ProbeFunction.indicator(X, {"a"})) == 0
    assert el.alpha_2(ProbeFunction.constant(X, 1)) == 1
    with pytest.raises(InputError):
        el.alpha_2(ProbeFunction.constant(X, F(1, 2)))


def test_gate_rejects_non_integrals():
    X = D("a", "b")
    with pytest.raises(ConsistencyError):
        spec_from_functional(X, lambda f: max(f.values))
    with pytest.raises(ConsistencyError):
        spec_from_functional(X, lambda f: f.values[0] * f.values[1] if f.values[0] != f.values[1] else f.values[0])
    ok = spec_from_functional(X, lambda f: (f.values[0] + 3 * f.values[1]) / 4)
    assert measure_from_spec(ok) == Prob(X, {"a": F(1, 4), "b": F(3, 4)})


def test_spec_naturality_and_roundtrip():
    X, Y = D("a", "b", "c"), FinMeasSpace(["u", "v"])
    for f in hom_set(X, Y):
        for P in grid_probs(X, 3):
            assert spec2_naturality(P, f).passed
    for P in random_probs(3, X, 20):
        assert spec2_roundtrip(P).passed


def test_lemma_suite():
    X = D("a", "b")
    for P in grid_probs(X, 4):
        reports = lemma_suite_scale_preserve(spec_from_measure(P))
        assert [r.lemma for r in reports] == ["scale", "path_naturality", "epsilon2_square", "preserves", "L15"]
        assert all(r.passed for r in reports)


def filter_functional_oracle(n):
    """Maps from subsets of n atoms to {0,1} preserving intersections and fixing empty/full."""
    keys = list(range(n))
    subs = [frozenset(c) for r in range(n + 1) for c in itertools.combinations(keys, r)]
    count = 0
    for vals in itertools.product((0, 1), repeat=len(subs)):
        g = dict(zip(subs, vals))
        if g[frozenset()] != 0 or g[frozenset(keys)] != 1:
            continue
        if all(g[U & V] == min(g[U], g[V]) for U in subs for V in subs):
            count += 1
    return count


@pytest.mark.parametrize("n", [1, 2, 3])
def test_weakly_averaging_functionals_count(n):
    X = FinMeasSpace([f"p{i}" for i in range(n)])
    found = weakly_averaging_affine_functionals(X)
    assert len(found) == filter_functional_oracle(n) == 2 ** n - 1
    evs = evaluation_functionals(X)
    assert all(e in found for e in evs)
    # exactly the evaluations satisfy the complement law
    assert [a for a in found if complement_law(X, a)] == [a for a in found if a in evs]
    assert len([a for a in found if complement_law(X, a)]) == n


def test_function_space_two_is_semilattice_of_subsets():
    X = D("a", "b")
    S, subsets = function_space_two(X)
    assert S.cc("{a}", "{b}", F(1, 2)) == "{}"
    assert S.cc("{a}", "{a,b}", F(1)) == "{a,b}"
    assert len(subsets) == 4


def test_point_from_alpha2():
    X = D("a", "b", "c")
    assert point_from_alpha2(spec_from_measure(dirac(X, "b"))) == "b"
    with pytest.raises(ConsistencyError):
        point_from_alpha2(spec_from_measure(Prob(X, {"a": F(1, 2), "b": F(1, 2)})))
    Y = FinMeasSpace(["a", "b"], [["a", "b"]])
    with pytest.raises(PreconditionError):
        point_from_alpha2(spec_from_measure(dirac(Y, "a")))
    with pytest.raises(InputError):
        point_from_alpha2(lambda g: 1)


def test_counit_simplex_barycenter():
    S = Simplex(3)
    X, labels = presentation(S, [S.vertex(0), S.vertex(1), S.vertex(2)])
    ids = {v: k for k, v in labels.items()}
    P = Prob(X, {X.atom_of(ids[S.vertex(0)]): F(1, 6), X.atom_of(ids[S.vertex(1)]): F(1, 3),
                 X.atom_of(ids[S.vertex(2)]): F(1, 2)})
    a = counit(S, P, labels)
    assert a == (F(1, 6), F(1, 3), F(1, 2))
    assert counit_oracle(S, P, a, labels).passed
    assert not counit_oracle(S, P, S.vertex(0), labels).passed


def test_counit_semilattice_is_meet_of_support():
    for A in semilattices(4):
        X, labels = presentation(A)
        for P in grid_probs(X, 2):
            support = [b[0] for b, w in zip(X.atoms, P.vector) if w]
            a = counit(A, P)
            assert a == A.meet_all(support)
            assert counit_oracle(A, P, a).passed


def test_counit_precondition():
    A = Semilattice.chain(2)
    X = FinMeasSpace(["0", "1"], [["0", "1"]])
    with pytest.raises(PreconditionError):
        counit(A, dirac(X, "0"))


def test_counit_naturality_and_affinity():
    A, B = Semilattice.chain(3), Semilattice.chain(2)
    X, _ = presentation(A)
    probes = grid_probs(X, 2)
    for m in hom_enum(A, B):
        for P in probes:
            assert counit_naturality(m, P).passed
    for P, Q in itertools.product(probes[:8], repeat=2):
        assert counit_affinity(A, P, Q).passed


def test_adjunct():
    X = D("a", "b")
    A = Semilattice.chain(3)
    XA, _ = presentation(A)
    for f in hom_set(X, XA):
        reports = adjunct_suite(f, A)
        assert all(r.passed for r in reports), [r.lemma for r in reports if not r.passed]
    f = MeasurableMap(X, XA, {"a": "0", "b": "2"})
    assert adjunct(f, A)(Prob(X, {"a": F(1, 2), "b": F(1, 2)})) == "0"


def test_adjunct_interval():
    I = IntervalQ()
    XI, labels = presentation(I, [F(0), F(1)])
    X = D("a", "b")
    f = MeasurableMap(X, XI, {"a": "0", "b": "1"})
    fhat = adjunct(f, I, labels)
    assert fhat(Prob(X, {"a": F(1, 4), "b": F(3, 4)})) == F(3, 4)


def test_triangles():
    X = D("a", "b")
    for A in [Semilattice.chain(3), semilattices(4)[1]]:
        assert all(r.passed for r in triangle_suite(X, A))
    S = Simplex(2)
    assert all(r.passed for r in triangle_suite(X, S, labels={"v0": S.vertex(0), "v1": S.vertex(1)}))


def test_probspace_cc():
    X = D("a", "b")
    PX = ProbSpace(X)
    assert PX.cc(dirac(X, "a"), dirac(X, "b"), F(1, 4)) == Prob(X, {"a": F(3, 4), "b": F(1, 4)})


def test_affine_measure_paths():
    X = D("a", "b")
    grid = [F(k, 4) for k in range(5)]
    affine = {r: Prob(X, {"a": 1 - r, "b": r}) for r in grid}
    assert affine_measure_path_check(X, affine).passed
    # kink at 1/2
    kinked = {r: Prob(X, {"a": 1 - min(r, F(1, 2)), "b": min(r, F(1, 2))}) for r in grid}
    report = affine_measure_path_check(X, kinked)
    assert not report.passed and report.witness
    with pytest.raises(InputError):
        affine_measure_path_check(X, {0: affine[0], 1: affine[1]})
