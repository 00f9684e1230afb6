"""Acceptance criteria 1-10, run exactly as stated.

Each test prints one ``criterion N: PASS|FAIL`` line (visible in ``pytest -v``
output) before asserting.
"""
import itertools
import random
import time

import pytest

from girylab.algebra import equivalence_roundtrip
from girylab.cli import main
from girylab.convex import AffineMap, IntervalQ, Simplex, hom_enum, semilattices
from girylab.factorization import (
    adjunct_suite,
    complement_law,
    counit,
    counit_naturality,
    counit_oracle,
    evaluation_functionals,
    spec2_naturality,
    spec2_roundtrip,
    triangle_suite,
    weakly_averaging_affine_functionals,
)
from girylab.finmeas import (
    FinMeasSpace,
    check_S_adjunction,
    compose,
    hom_and_function_space,
    hom_set,
    identity,
    induced_map,
    separate,
)
from girylab.giry import monad_law_suite
from girylab.probes import grid_probs, random_probs, random_tower, three_level_towers, two_level_towers
from girylab.rational import simplex_grid
from girylab.sigma import boolean_pairs, coordinate_functionals, presentation, sigma_functor

from conftest import spaces_up_to


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else ""))
        return ok

    return emit


def lattices_up_to(n):
    return [A for k in range(1, n + 1) for A in semilattices(k)]


def test_criterion_01_monad_laws(verdict):
    start = time.perf_counter()
    failures, cases = [], 0
    rng = random.Random(2024)
    for X in spaces_up_to(3):
        probes = grid_probs(X, 4) + two_level_towers(X) + three_level_towers(X)
        probes += [random_tower(rng, X, depth=rng.choice((1, 2, 3))) for _ in range(1000)]
        report = monad_law_suite(X, probes)
        cases += report.cases
        if not report.passed:
            failures.append((repr(X), report.witness))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    verdict(1, ok, f"{cases} cases, {elapsed:.1f}s")
    assert not failures, failures
    assert elapsed < 60


def test_criterion_02_separation(verdict):
    spaces = spaces_up_to(3)
    failures, cases = [], 0
    for X in spaces:
        Xs, q = separate(X)
        Xss, qs = separate(Xs)
        cases += 1
        if Xss != Xs or any(qs(p) != p for p in Xs.points):
            failures.append(("idempotence", repr(X)))
        if induced_map(identity(X)).graph != identity(Xs).graph:
            failures.append(("identity", repr(X)))
    homs = {(i, j): hom_set(X, Y) for i, X in enumerate(spaces) for j, Y in enumerate(spaces)}
    for (i, j), fs in homs.items():
        for k in range(len(spaces)):
            for f in fs:
                fs_ = induced_map(f)
                for g in homs[j, k]:
                    cases += 1
                    if induced_map(compose(g, f)).graph != compose(induced_map(g), fs_).graph:
                        failures.append(("functoriality", dict(f.graph), dict(g.graph)))
    for X in spaces:
        for Y in spaces:
            if Y.is_separated:
                report = check_S_adjunction(X, Y)
                cases += report.cases
                if not report.passed:
                    failures.append(("adjunction", repr(X), repr(Y), report.witness))
    verdict(2, not failures, f"{cases} cases")
    assert not failures, failures[:3]


def test_criterion_03_function_sep(verdict):
    separated = [X for X in spaces_up_to(3) if X.is_separated]
    failures = []
    for X, Y in itertools.product(separated, repeat=2):
        _, YX = hom_and_function_space(X, Y)
        if not YX.is_separated:
            failures.append((repr(X), repr(Y)))
    verdict(3, not failures, f"{len(separated) ** 2} pairs")
    assert not failures, failures


def test_criterion_04_spec2(verdict):
    spaces = spaces_up_to(4)
    targets = [FinMeasSpace(["u", "v"]), FinMeasSpace(["u", "v", "w"]), FinMeasSpace(["u", "v"], [["u", "v"]])]
    failures, cases = [], 0
    for n, X in enumerate(spaces):
        rng = random.Random(f"spec:{n}")
        maps = [f for T in targets for f in hom_set(X, T)] + [separate(X)[1]]
        for P in random_probs(n, X, 200):
            f = rng.choice(maps)
            for report in (spec2_roundtrip(P), spec2_naturality(P, f)):
                cases += report.cases
                if not report.passed:
                    failures.append(report.witness)
    verdict(4, not failures, f"{len(spaces)} spaces, {cases} cases")
    assert not failures, failures[:3]


def test_criterion_05_bijection(verdict):
    # stated: exactly the n evaluation maps, each satisfying the complement law
    start = time.perf_counter()
    exactly, complement, details = True, True, []
    for n in (2, 3):
        X = FinMeasSpace([f"p{i}" for i in range(n)])
        found = weakly_averaging_affine_functionals(X)
        evs = evaluation_functionals(X)
        exactly &= len(found) == n and all(a in evs for a in found) and all(e in found for e in evs)
        complement &= all(complement_law(X, a) for a in found)
        details.append(f"n={n}: {len(found)} maps, {len([a for a in found if a not in evs])} not evaluations")
    elapsed = time.perf_counter() - start
    verdict(5, exactly and complement and elapsed < 30, "; ".join(details) + f", {elapsed:.1f}s")
    assert exactly, details
    assert complement, details
    assert elapsed < 30


def test_criterion_06_counit(verdict):
    failures, cases = [], 0
    lattices = lattices_up_to(4)
    for A in lattices:
        X, _ = presentation(A)
        for P in grid_probs(X, 4):
            report = counit_oracle(A, P, counit(A, P))
            cases += report.cases
            if not report.passed:
                failures.append(("oracle", report.witness))
    for A, B in itertools.product(lattices, repeat=2):
        X, _ = presentation(A)
        for m in hom_enum(A, B):
            for P in grid_probs(X, 2):
                report = counit_naturality(m, P)
                cases += 1
                if not report.passed:
                    failures.append(("naturality", report.witness))
    for n in (1, 2, 3):
        S = Simplex(n)
        X, labels = presentation(S, list(simplex_grid(n, 2)))
        probes = [P for P in grid_probs(X, 4) if sum(1 for w in P.vector if w) <= 3]
        for P in probes:
            report = counit_oracle(S, P, counit(S, P, labels), labels)
            cases += report.cases
            if not report.passed:
                failures.append(("simplex oracle", report.witness))
        maps = [m for _, m in coordinate_functionals(S)]
        for j in range(1, 3):
            T = Simplex(j)
            for assign in itertools.product(range(j), repeat=n):
                matrix = tuple(tuple(1 if assign[i] == r else 0 for i in range(n)) for r in range(j))
                maps.append(AffineMap(S, T, "linear", (matrix, (0,) * j)))
        for m in maps:
            for P in probes[:40]:
                report = counit_naturality(m, P, labels)
                cases += 1
                if not report.passed:
                    failures.append(("simplex naturality", report.witness))
    verdict(6, not failures, f"{cases} cases")
    assert not failures, failures[:3]


def test_criterion_07_adjunction(verdict):
    failures, cases = [], 0
    lattices = lattices_up_to(3)
    S2 = Simplex(2)
    for X in spaces_up_to(3):
        probes, towers_ = grid_probs(X, 4), two_level_towers(X, 3, 4)
        for A in lattices:
            for report in triangle_suite(X, A, probes, towers_):
                cases += report.cases
                if not report.passed:
                    failures.append((report.lemma, report.witness))
            # the P(X) triangle and mu do not depend on A
            probes, towers_ = probes[:1], towers_[:1]
        for report in triangle_suite(X, S2, probes, towers_, labels={"v0": S2.vertex(0), "v1": S2.vertex(1)}):
            cases += report.cases
            if not report.passed:
                failures.append((report.lemma, report.witness))
        for A in lattices:
            SA, _ = presentation(A)
            for f in hom_set(X, SA):
                for report in adjunct_suite(f, A):
                    cases += report.cases
                    if not report.passed:
                        failures.append((report.lemma, report.witness))
    verdict(7, not failures, f"{cases} cases")
    assert not failures, failures[:3]


def test_criterion_08_equivalence(verdict):
    start = time.perf_counter()
    failures = []
    lattices = lattices_up_to(4)
    for A in lattices:
        for report in equivalence_roundtrip(A):
            if not report.passed:
                failures.append((A.to_json(), report.lemma, report.witness))
    elapsed = time.perf_counter() - start
    verdict(8, not failures and elapsed < 120, f"{len(lattices)} semilattices, {elapsed:.1f}s")
    assert not failures, failures[:3]
    assert elapsed < 120


def test_criterion_09_discrepancies(verdict):
    parts = sorted(p.label for p in boolean_pairs(IntervalQ()))
    interval_ok = parts == sorted(["empty", "{0}", "{1}", "full"])
    lattice_ok = all(
        len(sigma_functor(A, "sigmaI").space.atoms) == 1 and sigma_functor(A, "sigma2").space.is_separated
        for A in lattices_up_to(4)
    )
    verdict(9, interval_ok and lattice_ok,
            "expected outcomes: Boolean parts of I are only the four trivial ones; "
            "Sigma_I trivial and Sigma2 separating on every semilattice")
    assert interval_ok, parts
    assert lattice_ok


def test_criterion_10_determinism(verdict, tmp_path):
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    codes = [main(["check", "demo", "--suite", "all", "--seed", "7", "--out", str(p)]) for p in outs]
    same = outs[0].read_bytes() == outs[1].read_bytes()
    verdict(10, same and codes == [0, 0], f"exit codes {codes}")
    assert same
    assert codes == [0, 0]
