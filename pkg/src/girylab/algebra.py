"""Giry algebras, the comparison with convex spaces, and the coequalizer.

An algebra is a finite measurable space X with an evaluator ``h`` from
finitely supported measures on X to points of X. The constructor checks the
unit law on every point and the multiplication law on a bounded family of
probe towers.
"""
from __future__ import annotations

import functools
import itertools
import random
from fractions import Fraction
from typing import Callable, Mapping

from .convex import (
    CANONICAL_ALPHAS,
    ConvexSpace,
    FiniteConvex,
    axiom_suite,
    function_map,
)
from .errors import ConsistencyError, InputError, PreconditionError
from .factorization import ProbSpace, counit
from .finmeas import FinMeasSpace, MeasurableMap, is_measurable
from .giry import MetaProb, Prob, dirac, mu, pushforward
from .probes import grid_probs, random_tower, towers
from .reports import CheckReport
from .sigma import presentation

ZERO = Fraction(0)
ONE = Fraction(1)


@functools.lru_cache(maxsize=16)
def probe_towers(X: FinMeasSpace, seed: int = 0, random_count: int = 100) -> tuple:
    """Two-level towers used for the algebra laws: every tower with support
    <= 3 and denominators <= 4 over the denominator-4 grid, then seeded
    random towers."""
    out = towers(grid_probs(X, 4), 3, 4)
    rng = random.Random(seed)
    out.extend(random_tower(rng, X, 2, 3, 12) for _ in range(random_count))
    return tuple(out)


def _g_h(h: Callable, M: MetaProb) -> Prob:
    """``G(h)(M)``: the image of M under h, a measure on the points of X."""
    X = M.base
    index = X._atom_index()
    vec = [ZERO] * len(X.atoms)
    for w, P in M.support:
        vec[index[h(P)]] += w
    return Prob._trusted(X, tuple(vec))


def law_reports(X: FinMeasSpace, h: Callable, towers_=None) -> list:
    unit = CheckReport("algebra_unit")
    for x in X.points:
        got = h(dirac(X, x))
        unit.record(X.atom_of(got) == X.atom_of(x), lambda: {"point": x, "h(dirac)": got})
    assoc = CheckReport("algebra_mu")
    for M in probe_towers(X) if towers_ is None else towers_:
        if not assoc.record(h(mu(M)) == h(_g_h(h, M)), lambda: {"M": repr(M)}):
            break
    return [unit, assoc]


class GiryAlgebra:
    """``(X, h)``; construct through :meth:`checked` or the helpers below."""

    def __init__(self, space: FinMeasSpace, h: Callable, reports: list, name: str = "algebra"):
        self.space = space
        self._h = h
        self.reports = reports
        self.name = name

    @classmethod
    def checked(cls, space: FinMeasSpace, h: Callable, towers_=None, name: str = "algebra") -> "GiryAlgebra":
        cache: dict = {}

        def memo(P: Prob) -> str:
            if P.space != space:
                raise InputError("measure lives on a different space")
            v = cache.get(P)
            if v is None:
                v = h(P)
                if v not in space.points:
                    raise ConsistencyError(f"evaluator returned {v!r}, not a point")
                cache[P] = v
            return v

        reports = law_reports(space, memo, towers_)
        for r in reports:
            if not r.passed:
                raise ConsistencyError(f"{r.lemma} fails: {r.witness}")
        return cls(space, memo, reports, name)

    @classmethod
    def from_table(cls, space: FinMeasSpace, table: Mapping[str, str], name: str = "algebra") -> "GiryAlgebra":
        """h given on finitely many measures by probKey. Laws are checked on
        the towers whose items and derived measures all appear in the table."""
        parsed = {Prob.parse_key(space, k): v for k, v in table.items()}

        def h(P):
            try:
                return parsed[P]
            except KeyError:
                raise InputError(f"algebra table has no entry for {P.key()}") from None

        for x in space.points:
            if dirac(space, x) not in parsed:
                raise InputError(f"algebra table misses the dirac at {x}")
        items = list(parsed)
        candidates = towers(items, 2, 4) if len(items) <= 40 else towers(items, 1, 4)
        usable = [M for M in candidates if mu(M) in parsed]
        alg = cls.checked(space, h, [M for M in usable if _g_h(h, M) in parsed], name)
        alg.reports[1].notes.append(f"{len(usable)} towers inside the table")
        return alg

    def __call__(self, P: Prob) -> str:
        return self._h(P)

    def to_json(self, space_name="X", probes=None) -> dict:
        probes = grid_probs(self.space, 2) if probes is None else probes
        return {"space": space_name, "h": {P.key(): self(P) for P in probes}}


def algebra_from_convex(A: ConvexSpace, towers_=None) -> GiryAlgebra:
    """The comparison functor on objects: h is the barycenter on the
    presentation of A."""
    if not A.finite:
        raise InputError("algebra_from_convex needs a finite carrier")
    X, labels = presentation(A)
    if not X.is_separated:
        raise PreconditionError(f"the induced sigma-algebra on {A!r} is not separated")
    return GiryAlgebra.checked(X, lambda P: counit(A, P, labels), towers_, name=getattr(A, "name", "A"))


# -- coequalizer ----------------------------------------------------------------------

class CongruenceQuotient(FiniteConvex):
    """Measures on X modulo ``P ~ Q iff h(P) = h(Q)``; each class is named by
    the point h sends it to, and ``a +_r b := h((1-r) dirac_a + r dirac_b)``."""

    kind = "coequalizer"

    def __init__(self, alg: GiryAlgebra):
        X = alg.space
        self.algebra = alg

        def combine(a, b, alpha):
            return alg(dirac(X, a).mix(dirac(X, b), alpha))

        super().__init__(X.atom_keys, combine, name=f"CoEq({alg.name})")

    def q(self, P: Prob) -> str:
        return self.algebra(P)

    def classes(self, probes) -> dict:
        out: dict = {}
        for P in probes:
            out.setdefault(self.q(P), []).append(P)
        return out


def _free_map(T: ConvexSpace, X: FinMeasSpace, values: Mapping) -> Callable:
    """The affine map P(X) -> T extending ``dirac_x -> values[x]``."""
    return lambda P: T.combo([(w, values[k]) for k, w in zip(X.atom_keys, P.vector) if w])


def coequalizer(alg: GiryAlgebra, test_codomains=None, towers_=None) -> tuple:
    """``(CoEq, q, reports)``. The universal property is checked against every
    affine map P(X) -> T for T in ``test_codomains`` (default: 2, the
    3-chain and CoEq itself)."""
    from .convex import TWO, Semilattice

    X = alg.space
    Q = CongruenceQuotient(alg)
    q = function_map(ProbSpace(X), Q, Q.q, name="q")
    towers_ = probe_towers(X) if towers_ is None else towers_
    probes = grid_probs(X, 2)
    reports = []

    axioms = axiom_suite(Q)
    axioms.lemma = "CoEq_axioms"
    reports.append(axioms)

    affine = CheckReport("q_affine")
    for P1, P2 in itertools.product(probes, repeat=2):
        for al in CANONICAL_ALPHAS:
            affine.record(q(P1.mix(P2, al)) == Q.cc(q(P1), q(P2), al), lambda: {"P": repr(P1), "Q": repr(P2), "alpha": al})
    reports.append(affine)

    congruence = CheckReport("congruence")
    classes = Q.classes(probes)
    for members in classes.values():
        for P1, Q1 in itertools.combinations(members[:6], 2):
            for P2, Q2 in itertools.product(probes, repeat=2):
                if q(P2) != q(Q2):
                    continue
                for al in CANONICAL_ALPHAS:
                    congruence.record(
                        q(P1.mix(P2, al)) == q(Q1.mix(Q2, al)),
                        lambda: {"pair1": [repr(P1), repr(Q1)], "pair2": [repr(P2), repr(Q2)], "alpha": al},
                    )
    reports.append(congruence)

    # the barycenter of P(X) is mu (checked by the triangle suite), so
    # q after the barycenter is q(mu(M))
    cofork = CheckReport("coforks")
    for M in towers_:
        if not cofork.record(q(mu(M)) == q(_g_h(alg, M)), lambda: {"M": repr(M)}):
            break
    reports.append(cofork)

    codomains = [TWO, Semilattice.chain(3), Q] if test_codomains is None else test_codomains
    universal = CheckReport("coequalizer_universal")
    small = [M for M in towers(probes, 2, 2)]
    for T in codomains:
        for values in itertools.product(T.elements(), repeat=len(X.atoms)):
            vals = dict(zip(X.atom_keys, values))
            g = _free_map(T, X, vals)
            coforks = all(g(mu(M)) == g(_g_h(alg, M)) for M in small)
            # q(dirac_x) = x, so a factorization k must send x to g(dirac_x)
            k = {x: vals[x] for x in X.atom_keys}
            factors = all(k[q(P)] == g(P) for P in probes) and all(
                k[Q.cc(a, b, al)] == T.cc(k[a], k[b], al) for a in Q.elements() for b in Q.elements() for al in CANONICAL_ALPHAS
            )
            universal.record(coforks == factors, lambda: {"codomain": repr(T), "values": vals, "coforks": coforks})
    universal.notes.append("k is unique because q(dirac_x) = x makes q surjective")
    reports.append(universal)
    return Q, q, reports


def theta_check(alg: GiryAlgebra, coeq: CongruenceQuotient | None = None) -> CheckReport:
    """``theta(x) = q(dirac_x)`` is a measurable bijection onto the
    presentation of CoEq, with measurable inverse, and an algebra morphism."""
    X = alg.space
    Q = CongruenceQuotient(alg) if coeq is None else coeq
    report = CheckReport("theta")
    Y, labels = presentation(Q)
    graph = {x: Q.q(dirac(X, x)) for x in X.points}
    images = set(graph.values())
    if not report.record(len(images) == len(X.points) and images == set(Y.points), {"theta": graph}):
        return report
    report.record(is_measurable(graph, X, Y), {"theta_not_measurable": graph})
    inverse = {v: k for k, v in graph.items()}
    report.record(is_measurable(inverse, Y, X), {"inverse_not_measurable": inverse})
    theta = MeasurableMap(X, Y, graph, check=False)
    for P in grid_probs(X, 4):
        lhs = graph[alg(P)]
        rhs = counit(Q, pushforward(theta, P), labels)
        if not report.record(lhs == rhs, lambda: {"P": repr(P), "theta_h": lhs, "counit": rhs}):
            break
    return report


def find_isomorphism(A: FiniteConvex, B: FiniteConvex) -> tuple:
    """``(bijection or None, mismatch)``: a bijection matching the canonical
    combination tables, or the first mismatched triple of the last candidate."""
    ea, eb = A.elements(), B.elements()
    if len(ea) != len(eb):
        return None, {"sizes": [len(ea), len(eb)]}
    ta, tb = A.table(), B.table()
    mismatch = None
    for perm in itertools.permutations(eb):
        f = dict(zip(ea, perm))
        bad = next(((a, b, al) for (a, b, al), c in ta.items() if f[c] != tb[f[a], f[b], al]), None)
        if bad is None:
            return f, None
        mismatch = {"triple": list(bad), "bijection": f}
    return None, mismatch


def equivalence_roundtrip(A: FiniteConvex, towers_=None) -> list:
    """A -> algebra -> CoEq is isomorphic to A, and rebuilding the algebra from
    CoEq gives back h up to theta."""
    alg = algebra_from_convex(A, towers_)
    Q, q, coeq_reports = coequalizer(alg, towers_=towers_)
    iso = CheckReport("roundtrip_iso")
    f, mismatch = find_isomorphism(Q, A)
    iso.record(f is not None, lambda: mismatch)
    if f is not None:
        iso.notes.append("bijection " + ",".join(f"{k}>{v}" for k, v in sorted(f.items())))
    theta = theta_check(alg, Q)
    back = CheckReport("roundtrip_algebra")
    # alg2 is compared with alg pointwise below, so its own law check can use
    # the support <= 2 towers
    X = alg.space
    alg2 = algebra_from_convex(Q, [M for M in (probe_towers(X) if towers_ is None else towers_) if len(M.support) <= 2])
    graph = {x: Q.q(dirac(X, x)) for x in X.points}
    if set(graph.values()) == set(alg2.space.points):
        theta_map = MeasurableMap(X, alg2.space, graph, check=False)
        for P in grid_probs(X, 4):
            if not back.record(alg2(pushforward(theta_map, P)) == graph[alg(P)], lambda: {"P": repr(P)}):
                break
    else:
        back.record(False, {"theta": graph})
    return alg.reports + coeq_reports + [iso, theta, back]
