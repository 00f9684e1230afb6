"""Integral functionals, Spec elements, the barycenter counit and the adjunction.

A :class:`SpecElement` is the pair ``(alpha_I, alpha_2)`` of evaluators on
``I^X`` and ``2^X``. Elements built from a measure are exact; hand-built
functionals pass a validation gate that recovers the measure from indicator
values and rejects anything that is not an integral.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Mapping

from .convex import (
    TWO,
    AffineMap,
    ConvexSpace,
    FiniteConvex,
    IntervalQ,
    affinity_report,
    element_to_json,
    function_map,
    hom_enum,
)
from .errors import ConsistencyError, InputError, PreconditionError
from .finmeas import FinMeasSpace, MeasurableMap
from .giry import Prob, dirac, mu, pushforward, unit_lift
from .rational import CANONICAL_ALPHAS, format_rational, unit_grid
from .reports import CheckReport
from .sigma import boolean_pairs, coordinate_functionals, element_id, presentation

ZERO = Fraction(0)
ONE = Fraction(1)


class ProbeFunction:
    """A measurable function X -> I (or X -> 2 when every value is 0 or 1),
    stored by atom."""

    __slots__ = ("space", "values")

    def __init__(self, space: FinMeasSpace, values: Mapping[str, object]):
        missing = [k for k in space.atom_keys if k not in values]
        if missing:
            raise InputError(f"probe function has no value on atoms {missing}")
        vals = tuple(Fraction(values[k]) for k in space.atom_keys)
        if any(not 0 <= v <= 1 for v in vals):
            raise InputError("probe function values must lie in [0, 1]")
        self.space = space
        self.values = vals

    @classmethod
    def constant(cls, X: FinMeasSpace, u) -> "ProbeFunction":
        return cls(X, {k: u for k in X.atom_keys})

    @classmethod
    def indicator(cls, X: FinMeasSpace, members) -> "ProbeFunction":
        s = set(members)
        if not X.is_measurable_set(s):
            raise InputError(f"{sorted(s)} is not measurable")
        return cls(X, {k: ONE if k in s else ZERO for k in X.atom_keys})

    @property
    def two_valued(self) -> bool:
        return all(v in (0, 1) for v in self.values)

    def __call__(self, point: str) -> Fraction:
        return self.values[self.space.atom_keys.index(self.space.atom_of(point))]

    def map_values(self, fn: Callable) -> "ProbeFunction":
        return ProbeFunction(self.space, {k: fn(v) for k, v in zip(self.space.atom_keys, self.values)})

    def pullback(self, f: MeasurableMap) -> "ProbeFunction":
        """``self ∘ f`` on the domain of ``f``."""
        if f.cod != self.space:
            raise InputError("pullback along a map into a different space")
        return ProbeFunction(f.dom, {b[0]: self(f(b[0])) for b in f.dom.atoms})

    def ones(self) -> frozenset:
        """``f^-1(1)`` as a set of points."""
        return frozenset(p for b, v in zip(self.space.atoms, self.values) if v == 1 for p in b)

    def __eq__(self, other):
        return isinstance(other, ProbeFunction) and (self.space, self.values) == (other.space, other.values)

    def __hash__(self):
        return hash((self.space, self.values))

    def __repr__(self):
        return "ProbeFunction(" + ",".join(f"{k}:{format_rational(v)}" for k, v in zip(self.space.atom_keys, self.values)) + ")"

    def to_json(self, space_name="X"):
        return {"space": space_name, "values": {k: format_rational(v) for k, v in zip(self.space.atom_keys, self.values)}}


def integral(P: Prob, f: ProbeFunction) -> Fraction:
    """``sum over atoms of P(a) f(a)``."""
    if P.space != f.space:
        raise InputError("measure and function live on different spaces")
    return sum((p * v for p, v in zip(P.vector, f.values) if p), ZERO)


def epsilon2_value(r) -> int:
    return 1 if r == 1 else 0


def probe_functions(X: FinMeasSpace, max_den: int = 2) -> list:
    """Every I-valued function on X with values of denominator <= max_den."""
    grid = unit_grid(max_den)
    return [ProbeFunction(X, dict(zip(X.atom_keys, vals))) for vals in itertools.product(grid, repeat=len(X.atoms))]


def indicators(X: FinMeasSpace) -> list:
    return [ProbeFunction.indicator(X, U) for U in X.measurable_sets()]


# -- Spec elements -----------------------------------------------------------------

class SpecElement:
    """Evaluators ``alpha_I`` on I^X and ``alpha_2`` on 2^X, carried by a measure."""

    def __init__(self, base: FinMeasSpace, measure: Prob, alpha_I: Callable, alpha_2: Callable):
        self.base = base
        self.measure = measure
        self.alpha_I = alpha_I
        self.alpha_2 = alpha_2

    def __repr__(self):
        return f"SpecElement({self.measure!r})"


def spec_from_measure(P: Prob) -> SpecElement:
    alpha_I = lambda f: integral(P, f)

    def alpha_2(g: ProbeFunction) -> int:
        if not g.two_valued:
            raise InputError("alpha_2 takes a 2-valued function")
        return epsilon2_value(integral(P, g))

    return SpecElement(P.space, P, alpha_I, alpha_2)


def _recover(X: FinMeasSpace, alpha_I: Callable) -> Prob:
    weights = {}
    for k in X.atom_keys:
        v = Fraction(alpha_I(ProbeFunction.indicator(X, X.atom_members(k))))
        if not 0 <= v <= 1:
            raise ConsistencyError(f"alpha_I of an indicator is {v}, outside [0, 1]")
        weights[k] = v
    total = sum(weights.values(), ZERO)
    if total != 1:
        raise ConsistencyError(f"atom indicators sum to {format_rational(total)}, not 1")
    return Prob(X, weights)


def spec_from_functional(X: FinMeasSpace, alpha_I: Callable, max_den: int = 2) -> SpecElement:
    """Validation gate for hand-built functionals on I^X.

    Checks weak averaging and finite additivity on indicators, then that the
    functional is the integral against the recovered measure on a probe grid.
    """
    for u in unit_grid(4):
        if alpha_I(ProbeFunction.constant(X, u)) != u:
            raise ConsistencyError(f"not weakly averaging at constant {format_rational(u)}")
    sets = list(X.measurable_sets())
    for U, V in itertools.combinations(sets, 2):
        if U & V:
            continue
        lhs = alpha_I(ProbeFunction.indicator(X, U | V))
        rhs = alpha_I(ProbeFunction.indicator(X, U)) + alpha_I(ProbeFunction.indicator(X, V))
        if lhs != rhs:
            raise ConsistencyError(f"not finitely additive on {sorted(U)} and {sorted(V)}")
    P = _recover(X, alpha_I)
    for f in probe_functions(X, max_den):
        if alpha_I(f) != integral(P, f):
            raise ConsistencyError(f"functional disagrees with the recovered measure at {f!r}")
    el = spec_from_measure(P)
    return SpecElement(X, P, alpha_I, el.alpha_2)


def measure_from_spec(alpha: SpecElement) -> Prob:
    """``P(U) := alpha_I(chi_U)``, recomputed from the evaluator."""
    return _recover(alpha.base, alpha.alpha_I)


def spec_pushforward(alpha: SpecElement, f: MeasurableMap) -> SpecElement:
    """``alpha ∘ (_)^f``: evaluate on ``g ∘ f``."""
    if f.dom != alpha.base:
        raise InputError("map does not start at the base of the Spec element")
    return spec_from_functional(f.cod, lambda g: alpha.alpha_I(g.pullback(f)))


def spec2_naturality(P: Prob, f: MeasurableMap) -> CheckReport:
    report = CheckReport("Spec2_naturality")
    lhs = spec_from_measure(pushforward(f, P))
    rhs = spec_pushforward(spec_from_measure(P), f)
    report.record(measure_from_spec(lhs) == measure_from_spec(rhs), lambda: {"P": repr(P), "map": dict(f.graph)})
    for g in probe_functions(f.cod, 2):
        if not report.record(lhs.alpha_I(g) == rhs.alpha_I(g), lambda: {"P": repr(P), "g": repr(g)}):
            break
    return report


def spec2_roundtrip(P: Prob) -> CheckReport:
    report = CheckReport("Spec2_roundtrip")
    alpha = spec_from_measure(P)
    back = measure_from_spec(alpha)
    report.record(back == P, lambda: {"P": repr(P), "back": repr(back)})
    again = spec_from_functional(P.space, alpha.alpha_I)
    report.record(measure_from_spec(again) == P, lambda: {"P": repr(P), "stage": "functional"})
    return report


def _decreasing_chains(X: FinMeasSpace):
    """Maximal chains X = U_0 ⊃ U_1 ⊃ ... ⊃ U_n = ∅, one per atom ordering."""
    for order in itertools.permutations(X.atoms):
        chain = []
        remaining = [p for b in X.atoms for p in b]
        chain.append(frozenset(remaining))
        for b in order:
            remaining = [p for p in remaining if p not in b]
            chain.append(frozenset(remaining))
        yield chain


def lemma_suite_scale_preserve(alpha: SpecElement, probes=None) -> list:
    """Weak averaging, scaling, path and epsilon2 naturality squares, and
    limit preservation on stabilising sequences."""
    X = alpha.base
    probes = probe_functions(X, 2) if probes is None else list(probes)
    grid = unit_grid(4)

    scale = CheckReport("scale")
    for u in grid:
        scale.record(alpha.alpha_I(ProbeFunction.constant(X, u)) == u, {"constant": u})
    for f in probes:
        af = alpha.alpha_I(f)
        for v in grid:
            scale.record(alpha.alpha_I(f.map_values(lambda x: v * x)) == v * af, lambda: {"f": repr(f), "v": v})
    paths = CheckReport("path_naturality")
    I = IntervalQ()
    for f in probes:
        af = alpha.alpha_I(f)
        for u, v in itertools.product(grid, repeat=2):
            lhs = alpha.alpha_I(f.map_values(lambda r: I.cc(u, v, r)))
            paths.record(lhs == I.cc(u, v, af), lambda: {"f": repr(f), "u": u, "v": v})
    square = CheckReport("epsilon2_square")
    for f in probes:
        lhs = alpha.alpha_2(f.map_values(lambda r: ONE if r == 1 else ZERO))
        square.record(lhs == epsilon2_value(alpha.alpha_I(f)), lambda: {"f": repr(f)})

    preserves = CheckReport("preserves")
    for f, g in itertools.product(probes, repeat=2):
        # g, g, ..., g, f, f, f, ... converges pointwise to f
        seq = [g] * 3 + [f] * 3
        vals = [alpha.alpha_I(h) for h in seq]
        preserves.record(vals[-1] == alpha.alpha_I(f), lambda: {"f": repr(f), "g": repr(g)})
    l15 = CheckReport("L15")
    for chain in _decreasing_chains(X):
        v2 = [alpha.alpha_2(ProbeFunction.indicator(X, U)) for U in chain]
        vI = [alpha.alpha_I(ProbeFunction.indicator(X, U)) for U in chain]
        ok = v2[-1] == 0 and vI[-1] == 0 and all(a >= b for a, b in zip(vI, vI[1:]))
        ok = ok and all(a >= b for a, b in zip(v2, v2[1:]))
        l15.record(ok, lambda: {"chain": [sorted(U) for U in chain], "alpha2": v2})
    return [scale, paths, square, preserves, l15]


# -- points from 0-1 functionals ---------------------------------------------------

def function_space_two(X: FinMeasSpace) -> tuple:
    """``2^X`` as a finite convex space with the pointwise structure.

    Elements are named by the atoms where the function is 1, e.g. ``"{a,c}"``.
    Returns ``(space, name -> frozenset of atom keys)``.
    """
    keys = X.atom_keys
    subsets = {}
    for r in range(len(keys) + 1):
        for combo in itertools.combinations(keys, r):
            subsets["{" + ",".join(combo) + "}"] = frozenset(combo)
    by_set = {v: k for k, v in subsets.items()}

    def combine(a, b, alpha):
        ua, ub = subsets[a], subsets[b]
        out = frozenset(k for k in keys if TWO.cc("1" if k in ua else "0", "1" if k in ub else "0", alpha) == "1")
        return by_set[out]

    return FiniteConvex(list(subsets), combine, name=f"2^{len(keys)}"), subsets


def weakly_averaging_affine_functionals(X: FinMeasSpace) -> list:
    """Every affine ``2^X -> 2`` sending the constants to themselves.

    Returned as dicts ``name -> "0" | "1"`` over the elements of ``2^X``.
    """
    space, subsets = function_space_two(X)
    full = "{" + ",".join(X.atom_keys) + "}"
    return [
        dict(m.payload)
        for m in hom_enum(space, TWO)
        if m("{}") == "0" and m(full) == "1"
    ]


def evaluation_functionals(X: FinMeasSpace) -> list:
    _, subsets = function_space_two(X)
    return [{name: "1" if k in s else "0" for name, s in subsets.items()} for k in X.atom_keys]


def complement_law(X: FinMeasSpace, alpha2: Mapping[str, str]) -> bool:
    """``alpha_2(chi_U) = 1`` iff ``alpha_2(chi_{U^c}) = 0`` for every U."""
    _, subsets = function_space_two(X)
    by_set = {v: k for k, v in subsets.items()}
    keys = frozenset(X.atom_keys)
    return all((alpha2[name] == "1") == (alpha2[by_set[keys - s]] == "0") for name, s in subsets.items())


def point_from_alpha2(alpha, base: FinMeasSpace | None = None) -> str:
    """The unique point ``a`` with ``alpha_2 = ev_a``.

    ``alpha`` is a SpecElement or a callable on 2-valued ProbeFunctions.
    """
    X = alpha.base if isinstance(alpha, SpecElement) else base
    alpha2 = alpha.alpha_2 if isinstance(alpha, SpecElement) else alpha
    if X is None:
        raise InputError("a raw alpha_2 needs its base space")
    if not X.is_separated:
        raise PreconditionError("point_from_alpha2 needs a separated base")
    sets = list(X.measurable_sets())
    full = frozenset(X.points)
    value = {U: alpha2(ProbeFunction.indicator(X, U)) for U in sets}
    for U in sets:
        if (value[U] == 1) != (value[full - U] == 0):
            raise ConsistencyError(f"complement law fails at {sorted(U)}: alpha_2 is not an evaluation")
    ones = [U for U in sets if value[U] == 1]
    inter = frozenset.intersection(*ones) if ones else frozenset()
    if len(inter) != 1:
        raise ConsistencyError(f"intersection of the 1-sets is {sorted(inter)}, not a single point")
    return next(iter(inter))


# -- counit and adjunction -----------------------------------------------------------

class ProbSpace(ConvexSpace):
    """``P(X)`` as a convex space: Probs on X mixed pointwise."""

    kind = "prob"
    geometric = True

    def __init__(self, X: FinMeasSpace):
        self.X = X

    def contains(self, x) -> bool:
        return isinstance(x, Prob) and x.space == self.X

    def _cc(self, a, b, alpha):
        return a.mix(b, alpha)

    def ambient(self, x) -> tuple:
        return x.vector

    def __eq__(self, other):
        return isinstance(other, ProbSpace) and other.X == self.X

    def __hash__(self):
        return hash(("prob", self.X))

    def __repr__(self):
        return f"P({self.X!r})"


def _labels_for(A: ConvexSpace, P: Prob, labels):
    if labels is not None:
        return labels
    if A.finite:
        return {x: x for x in A.elements()}
    raise InputError("measures on infinite carriers need an id -> element labelling")


def counit(A: ConvexSpace, P: Prob, labels: Mapping | None = None):
    """The barycenter of a finitely supported measure on the elements of A."""
    labels = _labels_for(A, P, labels)
    pairs = []
    for block, w in zip(P.space.atoms, P.vector):
        if not w:
            continue
        if len(block) != 1:
            raise PreconditionError(f"support atom {block} is not a single element")
        if block[0] not in labels:
            raise InputError(f"support point {block[0]!r} is not an element of the carrier")
        pairs.append((w, labels[block[0]]))
    return A.combo(pairs)


def _boolean_oracle_parts(A: ConvexSpace):
    """Boolean parts used to test barycenters: all pairs for finite carriers
    and the interval, faces from coordinate functionals for simplices and
    polytopes."""
    if A.finite or isinstance(A, IntervalQ):
        return [(p.label, p.part) for p in boolean_pairs(A)]
    faces = []
    for label, m in coordinate_functionals(A):
        faces.append((f"{label}=1", _Face(m, ONE)))
        faces.append((f"{label}=0", _Face(m, ZERO)))
    return faces


class _Face:
    def __init__(self, m, value):
        self.m = m
        self.value = value

    def __contains__(self, x):
        return self.m(x) == self.value


def counit_oracle(A: ConvexSpace, P: Prob, a, labels: Mapping | None = None) -> CheckReport:
    """``ev_a`` agrees with ``alpha_2`` of P on every Boolean part:
    ``P(part) = 1`` iff ``a`` lies in the part."""
    labels = _labels_for(A, P, labels)
    report = CheckReport("counit_oracle")
    for name, part in _boolean_oracle_parts(A):
        mass = sum((w for b, w in zip(P.space.atoms, P.vector) if w and labels[b[0]] in part), ZERO)
        report.record((mass == 1) == (a in part), lambda: {"part": name, "mass": mass, "a": element_to_json(a)})
    return report


def push_elements(m: AffineMap, P: Prob, labels: Mapping) -> tuple:
    """``Sigma(m)`` applied to a measure on elements: the image measure on a
    presentation of the image elements."""
    images = {i: m(x) for i, x in labels.items()}
    Y, ylabels = presentation(m.cod, list(images.values()))
    weights: dict = {}
    for block, w in zip(P.space.atoms, P.vector):
        if w:
            img = images[block[0]]
            key = Y.atom_of(element_id(img) if not m.cod.finite else img)
            weights[key] = weights.get(key, ZERO) + w
    return Prob(Y, weights), ylabels


def counit_naturality(m: AffineMap, P: Prob, labels: Mapping | None = None) -> CheckReport:
    labels = _labels_for(m.dom, P, labels)
    report = CheckReport("counit_naturality")
    lhs = m(counit(m.dom, P, labels))
    Q, qlabels = push_elements(m, P, labels)
    rhs = counit(m.cod, Q, qlabels)
    report.record(lhs == rhs, lambda: {"P": repr(P), "lhs": element_to_json(lhs), "rhs": element_to_json(rhs)})
    return report


def counit_affinity(A: ConvexSpace, P: Prob, Q: Prob, labels: Mapping | None = None) -> CheckReport:
    """``counit(P +_a Q) = counit(P) +_a counit(Q)`` on the canonical alphas."""
    labels = _labels_for(A, P, labels)
    report = CheckReport("counit_affine")
    for al in CANONICAL_ALPHAS:
        lhs = counit(A, P.mix(Q, al), labels)
        rhs = A.cc(counit(A, P, labels), counit(A, Q, labels), al)
        report.record(lhs == rhs, lambda: {"P": repr(P), "Q": repr(Q), "alpha": al})
    return report


def adjunct(f: MeasurableMap, A: ConvexSpace, labels: Mapping | None = None) -> AffineMap:
    """``f^ = counit_A ∘ P(f)`` as an affine map ``P(X) -> A``."""
    labels = _labels_for(A, None, labels)
    unknown = [p for p in f.cod.points if p not in labels]
    if unknown:
        raise InputError(f"codomain points {unknown} are not labelled by elements of A")
    return function_map(ProbSpace(f.dom), A, lambda P: counit(A, pushforward(f, P), labels), name="adjunct")


def _free_extension(A: ConvexSpace, X: FinMeasSpace, vertex_values: Mapping) -> AffineMap:
    """The affine map ``P(X) -> A`` with prescribed values on diracs."""
    return function_map(
        ProbSpace(X), A,
        lambda P: A.combo([(w, vertex_values[k]) for k, w in zip(X.atom_keys, P.vector) if w]),
        name="extension",
    )


def adjunct_suite(f: MeasurableMap, A: ConvexSpace, labels: Mapping | None = None, probes=None) -> list:
    """Commutativity ``Sigma(f^) ∘ eta = f``, affinity of f^, and uniqueness
    among all competitors (finite carriers)."""
    labels = _labels_for(A, None, labels)
    X = f.dom
    fhat = adjunct(f, A, labels)
    commute = CheckReport("adjunct_commutes")
    for x in X.points:
        commute.record(fhat(dirac(X, x)) == labels[f(x)], {"point": x})
    from .probes import grid_probs

    probes = grid_probs(X, 2) if probes is None else probes
    triples = [(P, Q, al) for P in probes for Q in probes for al in CANONICAL_ALPHAS]
    affine = affinity_report(fhat, triples)
    affine.lemma = "adjunct_affine"
    unique = CheckReport("adjunct_unique")
    if A.finite:
        winners = []
        for values in itertools.product(A.elements(), repeat=len(X.atoms)):
            g = _free_extension(A, X, dict(zip(X.atom_keys, values)))
            if all(g(dirac(X, x)) == labels[f(x)] for x in X.points):
                winners.append(g)
        unique.record(len(winners) == 1, {"solutions": len(winners)})
        if winners:
            unique.record(all(winners[0](P) == fhat(P) for P in probes), {"disagrees_with_adjunct": True})
    else:
        unique.notes.append("competitor enumeration needs a finite carrier")
    return [commute, affine, unique]


def triangle_suite(X: FinMeasSpace, A: ConvexSpace, probes=None, towers=None, labels=None) -> list:
    """Both triangle identities and ``mu = Sigma(counit_{P(X)})``."""
    from .probes import grid_probs, two_level_towers

    probes = grid_probs(X, 4) if probes is None else probes
    towers = two_level_towers(X) if towers is None else towers
    PX = ProbSpace(X)

    left = CheckReport("triangle_PX")
    for P in probes:
        bary = PX.combo(unit_lift(P).support)
        if not left.record(bary == P, lambda: {"P": repr(P), "got": repr(bary)}):
            break
    right = CheckReport("triangle_SigmaA")
    if A.finite:
        elements = A.elements()
        SA, lab = presentation(A)
    else:
        SA, lab = presentation(A, list(labels.values())) if labels else (None, {})
        elements = list(lab)
    for e in elements:
        a = lab[e] if not A.finite else e
        got = counit(A, dirac(SA, e), lab)
        right.record(got == a, lambda: {"element": element_to_json(a), "got": element_to_json(got)})
    mult = CheckReport("mu_is_Sigma_counit")
    for M in towers:
        bary = PX.combo(M.support)
        if not mult.record(bary == mu(M), lambda: {"M": repr(M)}):
            break
    return [left, right, mult]


def affine_measure_path_check(X: FinMeasSpace, family: Mapping, functions=None) -> CheckReport:
    """A family ``r -> P_r`` on a rational grid is affine in r exactly when the
    curried functional ``f -> (r -> integral(P_r, f))`` is affine in r for
    every probe f."""
    grid = sorted(Fraction(r) for r in family)
    if len(grid) < 3:
        raise InputError("need at least three grid points")
    fam = {Fraction(r): P for r, P in family.items()}
    I = IntervalQ()
    triples = [(r, s, t) for r in grid for s in grid for t in grid if I.cc(r, s, t) in fam]
    functions = probe_functions(X, 2) if functions is None else functions
    report = CheckReport("PII")
    fam_witness = None
    for r, s, t in triples:
        if fam[I.cc(r, s, t)] != fam[r].mix(fam[s], t):
            fam_witness = (r, s, t)
            break
    cur_witness = None
    for f in functions:
        for r, s, t in triples:
            if integral(fam[I.cc(r, s, t)], f) != I.cc(integral(fam[r], f), integral(fam[s], f), t):
                cur_witness = (r, s, t)
                break
        if cur_witness:
            break
    report.record((fam_witness is None) == (cur_witness is None), {"equivalence_broken": [fam_witness, cur_witness]})
    report.record(fam_witness is None, lambda: {"triple": list(fam_witness)})
    report.notes.append(f"{len(triples)} grid triples")
    return report
