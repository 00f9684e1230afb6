"""Named check suites run by ``girylab check`` against a model file.

Each suite walks the relevant objects of the model in name order and returns
one record per (target, check). Records carry no timing unless asked, so
identical inputs give identical output.
"""
from __future__ import annotations

import itertools
import random
import time
from fractions import Fraction

from . import algebra as alg_mod
from . import factorization as fz
from .convex import (
    FiniteConvex,
    IntervalQ,
    RInfty,
    Semilattice,
    Simplex,
    axiom_suite,
    hom_enum,
    path,
)
from .finmeas import (
    FinMeasSpace,
    check_S_adjunction,
    hom_and_function_space,
    hom_set,
    induced_map,
    is_measurable,
    separate,
)
from .giry import (
    Kernel,
    Prob,
    dirac,
    identity_kernel,
    kleisli_compose,
    monad_law_suite,
    naturality_suite,
    pushforward,
)
from .io import Model
from .probes import grid_probs, random_probs, random_tower, three_level_towers, two_level_towers
from .reports import CheckReport
from .sigma import (
    boolean_pairs,
    chi_report,
    cosep_witness,
    mcoprod_check,
    presentation,
    separated_check,
    sigma_functor,
)

#: suite name -> (identifiers of the statements it checks, one-line summary)
SUITES = {
    "separation": (
        ["wellDefined", "inclusionRight", "separationIdempotent"],
        "separation quotient, induced maps and the separation/inclusion adjunction",
    ),
    "functionSep": (["functionSep", "evaluationSigma"], "function spaces with the evaluation sigma-algebra stay separated"),
    "separatedFactorization": (
        ["diracNonInjective", "GiryFactorsThroughSeparation"],
        "the Giry functor only sees the separation quotient",
    ),
    "monad": (["monadLaws", "naturality", "kleisli"], "unit, multiplication and Kleisli composition"),
    "sigma": (
        ["BooleanPair", "MCoprod", "CvxSep", "RInftyStructure", "SigmaFunctor"],
        "Boolean pairs, the Sigma functors, coproduct splitting and coseparation",
    ),
    "discrepancy": (
        ["I2L", "Sigma2VersusSigmaI"],
        "documented expected outcomes where the definitions disagree with a stated claim",
    ),
    "integral": (["integral"], "the integral pairing is affine in each argument"),
    "spec": (
        ["scale", "preserves", "L15", "noChoice", "bijection22A", "Spec2", "PII", "lastCor"],
        "Spec elements, their lemma suite and the measure round trip",
    ),
    "counit": (["counitBarycenter", "counitAffine", "counitNatural"], "the barycenter counit"),
    "adjunction": (["it", "triangleIdentities", "muIsSigmaCounit"], "the adjunction between P and Sigma"),
    "algebra": (
        ["comparison", "coequalizer", "theta", "equivalence"],
        "Giry algebras, the coequalizer and the equivalence round trips",
    ),
}


def list_suites() -> list:
    return [{"suite": k, "ids": ids, "summary": text} for k, (ids, text) in SUITES.items()]


def _row(suite: str, target: str, report: CheckReport, elapsed=None) -> dict:
    out = {"suite": suite, "target": target, **report.to_json()}
    if elapsed is not None:
        out["elapsed"] = round(elapsed, 4)
    return out


def _small(X: FinMeasSpace, atoms: int = 3) -> bool:
    return len(X.atoms) <= atoms


# -- individual suites ------------------------------------------------------------------

def _separation(model: Model, rng: random.Random):
    spaces = model.spaces
    for name, X in spaces.items():
        rep = CheckReport("separationIdempotent")
        Xs, q = separate(X)
        rep.record(separate(Xs)[0] == Xs, {"twice": repr(separate(Xs)[0])})
        rep.record(Xs.is_separated, {"not_separated": repr(Xs)})
        yield name, rep
    for (nx, X), (ny, Y) in itertools.product(spaces.items(), repeat=2):
        if not (_small(X) and _small(Y) and len(X.points) <= 4 and len(Y.points) <= 4):
            continue
        rep = CheckReport("wellDefined")
        maps = hom_set(X, Y)
        qx, qy = separate(X)[1], separate(Y)[1]
        for f in maps:
            fs = induced_map(f)
            rep.record(all(qy(f(p)) == fs(qx(p)) for p in X.points), lambda: {"map": dict(f.graph)})
        yield f"{nx}->{ny}", rep
        if Y.is_separated:
            yield f"{nx}->{ny}", check_S_adjunction(X, Y)


def _function_sep(model: Model, rng):
    sep = {n: X for n, X in model.spaces.items() if X.is_separated and len(X.points) <= 3}
    for (nx, X), (ny, Y) in itertools.product(sep.items(), repeat=2):
        rep = CheckReport("functionSep")
        maps, F = hom_and_function_space(X, Y)
        rep.record(F.is_separated, lambda: {"atoms": [list(b) for b in F.atoms]})
        rep.record(len(maps) == len(Y.points) ** len(X.points), {"count": len(maps)})
        yield f"{ny}^{nx}", rep


def _separated_factorization(model: Model, rng):
    for name, X in model.spaces.items():
        rep = CheckReport("diracNonInjective")
        for x, y in itertools.combinations(X.points, 2):
            rep.record((dirac(X, x) == dirac(X, y)) == (X.atom_of(x) == X.atom_of(y)), {"points": [x, y]})
        yield name, rep
        rep = CheckReport("GiryFactorsThroughSeparation")
        Xs, q = separate(X)
        probes = grid_probs(X, 4)
        images = [pushforward(q, P) for P in probes]
        rep.record(len(set(images)) == len(probes), {"collision": True})
        rep.record(set(images) == set(grid_probs(Xs, 4)), {"not_onto": True})
        yield name, rep


def _monad(model: Model, rng):
    for name, X in model.spaces.items():
        if not _small(X):
            continue
        probes = list(grid_probs(X, 4)) + two_level_towers(X, 2, 4) + three_level_towers(X, 1, 2)
        probes += [random_tower(rng, X, rng.randint(1, 3), 3, 12) for _ in range(100)]
        yield name, monad_law_suite(X, probes)
    for name, f in model.maps.items():
        towers = two_level_towers(f.dom, 2, 2) if _small(f.dom) else []
        yield name, naturality_suite(f, list(grid_probs(f.dom, 2)) + towers)
    kernels = list(model.kernels.items())
    for name, k in kernels:
        rep = CheckReport("kleisli")
        rep.record(kleisli_compose(identity_kernel(k.dom), k) == k, {"left_identity": name})
        rep.record(kleisli_compose(k, identity_kernel(k.cod)) == k, {"right_identity": name})
        for P in grid_probs(k.dom, 2):
            rep.record(k.apply(P) == fz_mix_rows(k, P), lambda: {"P": repr(P)})
        yield name, rep
    for (n1, k1), (n2, k2), (n3, k3) in itertools.product(kernels, repeat=3):
        if k1.cod == k2.dom and k2.cod == k3.dom:
            rep = CheckReport("kleisli")
            lhs = kleisli_compose(kleisli_compose(k1, k2), k3)
            rhs = kleisli_compose(k1, kleisli_compose(k2, k3))
            rep.record(lhs == rhs, {"kernels": [n1, n2, n3]})
            yield f"{n1};{n2};{n3}", rep


def fz_mix_rows(k: Kernel, P: Prob) -> Prob:
    """Independent evaluation of the Kleisli extension: mix the rows pairwise."""
    acc = None
    total = Fraction(0)
    for key, w in zip(P.space.atom_keys, P.vector):
        if not w:
            continue
        row = k.rows[key]
        total += w
        acc = row if acc is None else acc.mix(row, w / total)
    return acc


def _sigma(model: Model, rng):
    for name, A in model.convex.items():
        if A.finite or isinstance(A, (IntervalQ, RInfty)):
            rep = CheckReport("BooleanPair")
            for p in boolean_pairs(A):
                rep.absorb(chi_report(A, p.part))
            rep.notes.append("parts " + " ".join(p.label for p in boolean_pairs(A)))
            yield name, rep
        if A.finite:
            desc = sigma_functor(A, "join")
            rep = CheckReport("SigmaFunctor")
            for other_name, B in model.convex.items():
                if B.finite and len(B.elements()) ** len(A.elements()) <= 10**4:
                    SB = sigma_functor(B, "join").space
                    for m in hom_enum(A, B):

                        rep.record(
                            is_measurable({x: m(x) for x in A.elements()}, desc.space, SB),
                            lambda: {"to": other_name, "map": dict(m.payload)},
                        )
            yield name, rep
            for p in boolean_pairs(A):
                yield f"{name}|{p.label}", mcoprod_check(A, p)
            yield name, separated_check(A, "sigma2")
        elif isinstance(A, RInfty):
            rep = axiom_suite(A)
            rep.lemma = "RInftyStructure"
            w = cosep_witness(A, Fraction(1), Fraction(2))
            rep.notes.append("finite reals separated: " + ("yes" if w.found else "no, by construction of the Boolean pairs"))
            yield name, rep
        else:
            variant = "sigmaI"
            yield name, separated_check(A, variant, samples=30, seed=rng.randint(0, 10**9))


def _discrepancy(model: Model, rng):
    rep = CheckReport("I2L")
    labels = sorted(p.label for p in boolean_pairs(IntervalQ()))
    expected = sorted(["empty", "{0}", "{1}", "full"])
    rep.record(labels == expected, {"parts": labels})
    rep.notes.append("expected outcome: only four Boolean parts, so Sigma2 of I is coarser than Borel")
    yield "intervalQ", rep
    lattices = [(n, A) for n, A in model.convex.items() if isinstance(A, Semilattice)]
    for name, A in lattices:
        rep = CheckReport("Sigma2VersusSigmaI")
        sI = sigma_functor(A, "sigmaI").space
        s2 = sigma_functor(A, "sigma2").space
        rep.record(len(sI.atoms) == 1, {"sigmaI_atoms": [list(b) for b in sI.atoms]})
        rep.record(s2.is_separated, {"sigma2_atoms": [list(b) for b in s2.atoms]})
        rep.notes.append("expected outcome: Sigma_I trivial, Sigma2 separating")
        yield name, rep


def _integral(model: Model, rng):
    I = IntervalQ()
    for name, X in model.spaces.items():
        rep = CheckReport("integral")
        probes = grid_probs(X, 2)
        funcs = fz.probe_functions(X, 2) if len(X.atoms) <= 3 else fz.indicators(X)
        for P, Q in itertools.product(probes, repeat=2):
            for f in funcs[:20]:
                for al in (Fraction(1, 3), Fraction(1, 2)):
                    rep.record(
                        fz.integral(P.mix(Q, al), f) == I.cc(fz.integral(P, f), fz.integral(Q, f), al),
                        lambda: {"P": repr(P), "Q": repr(Q), "f": repr(f)},
                    )
        for P in probes:
            for f, g in itertools.product(funcs[:20], repeat=2):
                mixed = fz.ProbeFunction(X, {k: I.cc(a, b, Fraction(1, 2)) for k, a, b in zip(X.atom_keys, f.values, g.values)})
                rep.record(
                    fz.integral(P, mixed) == I.cc(fz.integral(P, f), fz.integral(P, g), Fraction(1, 2)),
                    lambda: {"P": repr(P), "f": repr(f), "g": repr(g)},
                )
        yield name, rep


def _spec(model: Model, rng):
    for name, X in model.spaces.items():
        if len(X.atoms) > 4:
            continue
        probes = random_probs(rng.randint(0, 10**9), X, 20)
        rt = CheckReport("Spec2")
        for P in probes:
            rt.absorb(fz.spec2_roundtrip(P))
        for fname, f in model.maps.items():
            if f.dom == X:
                for P in probes[:5]:
                    rt.absorb(fz.spec2_naturality(P, f))
        yield name, rt
        for P in probes[:3]:
            for r in fz.lemma_suite_scale_preserve(fz.spec_from_measure(P)):
                yield f"{name}:{P.key()}", r
        if X.is_separated and len(X.points) <= 3:
            rep = CheckReport("noChoice")
            for x in X.points:
                el = fz.spec_from_measure(dirac(X, x))
                rep.record(fz.point_from_alpha2(el) == x, {"point": x})
            yield name, rep
            rep = CheckReport("bijection22A")
            found = fz.weakly_averaging_affine_functionals(X)
            evals = fz.evaluation_functionals(X)
            rep.record(all(e in found for e in evals), {"missing_evaluation": True})
            lawful = [a for a in found if fz.complement_law(X, a)]
            rep.record(sorted(map(sorted, map(dict.items, lawful))) == sorted(map(sorted, map(dict.items, evals))),
                       {"complement_law_survivors": len(lawful)})
            rep.notes.append(f"{len(found)} weakly averaging affine maps; the complement law keeps {len(lawful)}")
            yield name, rep
        grid = [Fraction(i, 4) for i in range(5)]
        if len(probes) >= 2:
            P, Q = probes[0], probes[1]
            fam = {r: P.mix(Q, r) for r in grid}
            rep = fz.affine_measure_path_check(X, fam)
            yield name, rep
            rep = CheckReport("lastCor")
            specs = {r: fz.spec_from_measure(fam[r]) for r in grid}
            for f in fz.probe_functions(X, 2)[:30]:
                curve = path(IntervalQ(), fz.integral(P, f), fz.integral(Q, f))
                rep.record(all(specs[r].alpha_I(f) == curve(r) for r in grid), lambda: {"f": repr(f)})
            yield name, rep


def _counit_targets(model: Model):
    for name, A in model.convex.items():
        if A.finite and len(A.elements()) <= 4:
            X, labels = presentation(A)
            yield name, A, X, labels, grid_probs(X, 4)
        elif isinstance(A, Simplex) and A.n <= 3:
            verts = [A.vertex(i) for i in range(A.n)]
            X, labels = presentation(A, verts)
            yield name, A, X, labels, grid_probs(X, 4)


def _counit(model: Model, rng):
    for name, A, X, labels, probes in _counit_targets(model):
        rep = CheckReport("counitBarycenter")
        for P in probes:
            rep.absorb(fz.counit_oracle(A, P, fz.counit(A, P, labels), labels))
        yield name, rep
        rep = CheckReport("counitAffine")
        for P, Q in itertools.product(probes[:12], repeat=2):
            rep.absorb(fz.counit_affinity(A, P, Q, labels))
        yield name, rep
        rep = CheckReport("counitNatural")
        for other, B in model.convex.items():
            if A.finite and B.finite and len(B.elements()) ** len(A.elements()) <= 10**4:
                for m in hom_enum(A, B):
                    for P in probes:
                        rep.absorb(fz.counit_naturality(m, P, labels))
        yield name, rep


def _adjunction(model: Model, rng):
    for name, A, X, labels, probes in _counit_targets(model):
        if not A.finite:
            continue
        for sname, Y in model.spaces.items():
            if not _small(Y) or len(A.elements()) ** len(Y.atoms) > 256:
                continue
            for f in hom_set(Y, X)[:8]:
                for r in fz.adjunct_suite(f, A, labels):
                    yield f"{sname}->{name}", r
    for sname, Y in model.spaces.items():
        if _small(Y):
            for A in (f for f in model.convex.values() if f.finite and len(f.elements()) <= 4):
                for r in fz.triangle_suite(Y, A, towers=two_level_towers(Y, 3, 4)):
                    yield sname, r
                break


def _algebra(model: Model, rng):
    done = set()
    for name, spec in model.algebras.items():
        if spec.convex is not None:
            A = model.convex[spec.convex]
            done.add(spec.convex)
            for r in alg_mod.equivalence_roundtrip(A):
                yield name, r
        else:
            X = model.spaces[spec.space]
            alg = alg_mod.GiryAlgebra.from_table(X, spec.table, name=name)
            for r in alg.reports:
                yield name, r
    for name, A in model.convex.items():
        if isinstance(A, FiniteConvex) and name not in done and len(A.elements()) <= 3:
            for r in alg_mod.equivalence_roundtrip(A):
                yield name, r


RUNNERS: dict = {
    "separation": _separation,
    "functionSep": _function_sep,
    "separatedFactorization": _separated_factorization,
    "monad": _monad,
    "sigma": _sigma,
    "discrepancy": _discrepancy,
    "integral": _integral,
    "spec": _spec,
    "counit": _counit,
    "adjunction": _adjunction,
    "algebra": _algebra,
}


def run_suites(model: Model, names, seed: int = 0, timings: bool = False) -> dict:
    """Run the named suites (in registry order) and assemble the report."""
    selected = [n for n in SUITES if n in set(names)]
    records = []
    for suite in selected:
        rng = random.Random(f"{seed}:{suite}")
        start = time.perf_counter()
        for target, report in RUNNERS[suite](model, rng):
            now = time.perf_counter()
            records.append(_row(suite, target, report, now - start if timings else None))
            start = now
    failed = [r for r in records if r["status"] == "fail"]
    return {
        "seed": seed,
        "suites": selected,
        "checks": records,
        "summary": {"checks": len(records), "failed": len(failed)},
        "status": "fail" if failed else "pass",
    }
