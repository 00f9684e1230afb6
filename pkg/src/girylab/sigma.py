"""Sigma-algebras induced on convex spaces.

Three variants are supported:

* ``sigma2`` -- generated by affine characteristic maps into 2 (Boolean pairs),
* ``sigmaI`` -- generated by preimages of ``[0, u)`` under affine maps into I,
* ``join``   -- generated by both (the default downstream).

Finite carriers get an explicit :class:`FinMeasSpace`. Infinite carriers get
a generator family with a membership oracle that only answers for set
expressions built from its generators.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .convex import (
    INF,
    TWO,
    AffineMap,
    ConvexSpace,
    IntervalQ,
    Polytope,
    RInfty,
    Semilattice,
    Simplex,
    affinity_report,
    default_probes,
    element_to_json,
    finite_grid_affine_maps,
    function_map,
    hom_enum,
)
from .errors import InputError
from .finmeas import FinMeasSpace, generate_sigma
from .rational import format_rational, unit_grid
from .reports import CheckReport

VARIANTS = ("sigma2", "sigmaI", "join")
ZERO = Fraction(0)
ONE = Fraction(1)


def _variant(variant: str) -> str:
    if variant not in VARIANTS:
        raise InputError(f"unknown sigma variant {variant!r}; expected one of {VARIANTS}")
    return variant


# -- Boolean pairs -----------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """A described subset of an infinite carrier."""

    name: str
    test: Callable = field(compare=False, repr=False)

    def __contains__(self, x) -> bool:
        return bool(self.test(x))


def _interval_regions(max_den: int = 4) -> list:
    regions = [
        Region("empty", lambda x: False),
        Region("{0}", lambda x: x == 0),
        Region("{1}", lambda x: x == 1),
        Region("full", lambda x: True),
    ]
    for c in unit_grid(max_den):
        if 0 < c < 1:
            cs = format_rational(c)
            regions.append(Region(f"[0,{cs})", lambda x, c=c: x < c))
            regions.append(Region(f"[{cs},1]", lambda x, c=c: x >= c))
            regions.append(Region(f"[0,{cs}]", lambda x, c=c: x <= c))
            regions.append(Region(f"({cs},1]", lambda x, c=c: x > c))
    return regions


def _rinfty_regions() -> list:
    regions = [
        Region("empty", lambda x: False),
        Region("{inf}", lambda x: x is INF),
        Region("finite", lambda x: x is not INF),
        Region("full", lambda x: True),
    ]
    for c in (Fraction(0), Fraction(1)):
        cs = format_rational(c)
        regions.append(Region(f"[{cs},inf]", lambda x, c=c: x is INF or x >= c))
        regions.append(Region(f"(-inf,{cs})", lambda x, c=c: x is not INF and x < c))
    return regions


@dataclass(frozen=True)
class BooleanPair:
    """A part of a convex space whose characteristic map into 2 is affine.

    ``part`` is a frozenset of element ids for finite carriers and a
    :class:`Region` otherwise.
    """

    space: ConvexSpace = field(compare=False)
    part: object

    def __contains__(self, x) -> bool:
        return x in self.part

    def chi(self, x) -> str:
        return "1" if x in self.part else "0"

    def characteristic(self) -> AffineMap:
        return function_map(self.space, TWO, self.chi, name=f"chi[{self.label}]")

    def complement_part(self):
        if isinstance(self.part, Region):
            p = self.part
            return Region(f"not {p.name}", lambda x: x not in p)
        return frozenset(self.space.elements()) - self.part

    @property
    def label(self) -> str:
        if isinstance(self.part, Region):
            return self.part.name
        return "{" + ",".join(sorted(self.part)) + "}"

    def to_json(self):
        return {"part": self.label}


def chi_report(A: ConvexSpace, region) -> CheckReport:
    """Affinity of the characteristic map of ``region`` on the probe grid."""
    chi = lambda x: "1" if x in region else "0"
    return affinity_report(chi, default_probes(A), dom=A, cod=TWO)


def boolean_pairs(A: ConvexSpace) -> list:
    """All Boolean pairs of a finite carrier; for I and R-infinity, the members
    of a candidate family of described regions that pass the probe oracle."""
    if A.finite:
        return [
            BooleanPair(A, frozenset(x for x in A.elements() if m(x) == "1"))
            for m in hom_enum(A, TWO)
        ]
    if isinstance(A, IntervalQ):
        candidates = _interval_regions()
    elif isinstance(A, RInfty):
        candidates = _rinfty_regions()
    else:
        raise InputError(f"Boolean pairs are not enumerable for {A!r}")
    return [BooleanPair(A, r) for r in candidates if chi_report(A, r).passed]


# -- generator families for infinite carriers -----------------------------------------

@dataclass(frozen=True)
class ThresholdFamily:
    """Sets ``{x : m(x) < u}`` for rational ``u``, with ``m`` affine into I."""

    m: AffineMap
    label: str

    def member(self, u, x) -> bool:
        return self.m(x) < Fraction(u)

    def describe(self, u) -> str:
        return f"{self.label}^-1([0,{format_rational(Fraction(u))}))"

    def cutpoints(self, xs) -> list:
        """Thresholds realising every distinct trace on the finite set ``xs``."""
        vals = sorted({self.m(x) for x in xs})
        return vals + [vals[-1] + 1] if vals else []


@dataclass(frozen=True)
class FixedSet:
    """A single generator set (a Boolean part or a face)."""

    region: object
    label: str

    def member(self, _u, x) -> bool:
        return x in self.region

    def describe(self, _u=None) -> str:
        return self.label

    def cutpoints(self, xs) -> list:
        return [None]


def coordinate_functionals(A: ConvexSpace) -> list:
    """Affine maps into I used as generators and witnesses.

    Simplex: sums of barycentric coordinates over nonempty vertex sets.
    Polytope: each ambient coordinate rescaled by its range over the generators.
    Interval: the identity.
    """
    I = IntervalQ()
    if isinstance(A, IntervalQ):
        return [("id", AffineMap(A, I, "linear", (((1,),), (0,)), name="id"))]
    if isinstance(A, Simplex):
        out = []
        for r in range(1, A.n + 1):
            for S in itertools.combinations(range(A.n), r):
                row = tuple(1 if j in S else 0 for j in range(A.n))
                label = "x" + "+x".join(str(j) for j in S)
                out.append((label, AffineMap(A, I, "linear", ((row,), (0,)), name=label)))
        return out
    if isinstance(A, Polytope):
        out = []
        for j in range(A.dim):
            lo = min(g[j] for g in A.generators)
            hi = max(g[j] for g in A.generators)
            if lo == hi:
                continue
            row = tuple(ONE / (hi - lo) if k == j else ZERO for k in range(A.dim))
            label = f"(x{j}-{format_rational(lo)})/{format_rational(hi - lo)}"
            out.append((label, AffineMap(A, I, "linear", ((row,), (-lo / (hi - lo),)), name=label)))
        return out
    return []


@dataclass
class SigmaDescriptor:
    """The sigma-algebra induced on ``source`` by one of the variants."""

    source: ConvexSpace
    variant: str
    space: FinMeasSpace | None = None
    families: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def explicit(self) -> bool:
        return self.space is not None

    # set expressions: ("gen", i, u) | ("not", e) | ("or", e, e) | ("and", e, e)
    def gen(self, index: int, u=None) -> tuple:
        if not 0 <= index < len(self.families):
            raise InputError(f"no generator family {index}")
        return ("gen", index, u)

    def contains(self, expr, x) -> bool:
        """Membership of ``x`` in a set built from the generators."""
        if not isinstance(expr, tuple) or not expr:
            raise InputError(f"not a described set: {expr!r}")
        op = expr[0]
        if op == "gen":
            _, i, u = expr
            if not 0 <= i < len(self.families):
                raise InputError(f"no generator family {i}")
            return self.families[i].member(u, x)
        if op == "not":
            return not self.contains(expr[1], x)
        if op == "or":
            return self.contains(expr[1], x) or self.contains(expr[2], x)
        if op == "and":
            return self.contains(expr[1], x) and self.contains(expr[2], x)
        raise InputError(f"not a described set: {expr!r}")

    def describe(self, expr) -> str:
        op = expr[0]
        if op == "gen":
            return self.families[expr[1]].describe(expr[2])
        if op == "not":
            return f"complement({self.describe(expr[1])})"
        return f"{op}({self.describe(expr[1])}, {self.describe(expr[2])})"

    def to_json(self, space_name="A") -> dict:
        out = {"variant": self.variant, "space": space_name}
        if self.explicit:
            out["atoms"] = [list(b) for b in self.space.atoms]
        else:
            out["generators"] = [_family_json(f) for f in self.families]
        return out


def _family_json(f) -> str:
    if isinstance(f, ThresholdFamily):
        return f"{f.label}^-1([0,u))"
    return f.label


def _finite_generators(A: ConvexSpace, variant: str) -> list:
    gens = []
    if variant in ("sigma2", "join"):
        gens += [sorted(p.part) for p in boolean_pairs(A)]
    if variant in ("sigmaI", "join"):
        for m in finite_grid_affine_maps(A):
            for u in unit_grid(4):
                gens.append([x for x in A.elements() if m(x) < u])
    return gens


def sigma_functor(A: ConvexSpace, variant: str = "join") -> SigmaDescriptor:
    variant = _variant(variant)
    if A.finite:
        # finite carriers are immutable, so the atoms are cached per instance
        cache = A.__dict__.setdefault("_sigma_spaces", {})
        if variant not in cache:
            cache[variant] = generate_sigma(A.elements(), _finite_generators(A, variant))
        return SigmaDescriptor(A, variant, space=cache[variant])
    desc = SigmaDescriptor(A, variant)
    if variant in ("sigmaI", "join"):
        for label, m in coordinate_functionals(A):
            desc.families.append(ThresholdFamily(m, label))
        if isinstance(A, RInfty):
            desc.notes.append("R-infinity admits only constant affine maps into I")
    if variant in ("sigma2", "join"):
        if isinstance(A, (IntervalQ, RInfty)):
            for p in boolean_pairs(A):
                desc.families.append(FixedSet(p.part, p.label))
        elif isinstance(A, (Simplex, Polytope)):
            e2 = lambda r: r == 1
            for label, m in coordinate_functionals(A):
                face = Region(f"{label}=1", lambda x, m=m: e2(m(x)))
                desc.families.append(FixedSet(face, f"face {label}=1"))
        else:
            raise InputError(f"unsupported combination {A!r} / {variant}")
    return desc


def is_measurable_affine(m: AffineMap, variant: str = "join") -> bool:
    """Graph of an affine table map is measurable between induced spaces."""
    from .finmeas import is_measurable

    SA = sigma_functor(m.dom, variant).space
    SB = sigma_functor(m.cod, variant).space
    return is_measurable({x: m(x) for x in m.dom.elements()}, SA, SB)


# -- coproduct decomposition -------------------------------------------------------

def mcoprod_check(A: ConvexSpace, pair: BooleanPair) -> CheckReport:
    """Sigma2(A) is the disjoint union of Sigma2 of the two parts."""
    if not A.finite:
        raise InputError("mcoprod_check needs a finite carrier")
    if not chi_report(A, pair.part).passed:
        raise InputError(f"{pair.label} is not a Boolean pair")
    report = CheckReport("MCoprod")
    whole = sigma_functor(A, "sigma2").space
    parts = [p for p in (pair.part, pair.complement_part()) if p]
    atoms_union = []
    for part in parts:
        sub = A.restrict(part)
        own = sigma_functor(sub, "sigma2").space
        restricted = sorted(tuple(sorted(set(b) & part)) for b in whole.atoms if set(b) & part)
        report.record(
            sorted(own.atoms) == restricted,
            lambda: {"part": sorted(part), "own": own.atoms, "restricted": restricted},
        )
        atoms_union += list(own.atoms)
    coproduct = FinMeasSpace(A.elements(), atoms_union)
    report.record(coproduct == whole, lambda: {"coproduct": coproduct.atoms, "sigma2": whole.atoms})
    # no atom of the whole straddles the split
    report.record(all(set(b) <= pair.part or not set(b) & pair.part for b in whole.atoms), {"straddling": True})
    return report


# -- coseparation ------------------------------------------------------------------

@dataclass
class Witness:
    found: bool
    variant: str
    generator: str = ""
    set_description: str = ""
    contains: tuple = ()
    excludes: tuple = ()
    expr: tuple | None = None
    members: frozenset | None = None

    def to_json(self):
        out = {"found": self.found, "variant": self.variant}
        if self.found:
            out.update(
                generator=self.generator,
                set=self.set_description,
                contains=[element_to_json(x) for x in self.contains],
                excludes=[element_to_json(x) for x in self.excludes],
            )
        else:
            out["reason"] = self.set_description
        return out


def cosep_witness(A: ConvexSpace, a1, a2, variant: str = "join") -> Witness:
    """A measurable set of the induced sigma-algebra holding exactly one of a1, a2."""
    variant = _variant(variant)
    a1, a2 = A.check(a1), A.check(a2)
    if a1 == a2:
        raise InputError("cosep_witness needs distinct elements")
    if A.finite:
        if variant in ("sigma2", "join"):
            if isinstance(A, Semilattice):
                for a, b in ((a1, a2), (a2, a1)):
                    f = A.up_set(a)
                    if b not in f:
                        return Witness(True, variant, f"principal filter of {a}", "{" + ",".join(sorted(f)) + "}",
                                       (a,), (b,), members=f)
            for p in boolean_pairs(A):
                if (a1 in p) != (a2 in p):
                    inside, outside = (a1, a2) if a1 in p else (a2, a1)
                    return Witness(True, variant, "Boolean pair", p.label, (inside,), (outside,), members=p.part)
        if variant in ("sigmaI", "join"):
            for m in finite_grid_affine_maps(A):
                if m(a1) != m(a2):
                    lo, hi = sorted((m(a1), m(a2)))
                    members = frozenset(x for x in A.elements() if m(x) < hi)
                    inside, outside = (a1, a2) if a1 in members else (a2, a1)
                    return Witness(True, variant, "affine map into I", f"m^-1([0,{format_rational(hi)}))",
                                   (inside,), (outside,), members=members)
        return Witness(False, variant, set_description=f"no {variant} generator separates the pair")
    desc = sigma_functor(A, variant)
    for i, fam in enumerate(desc.families):
        if isinstance(fam, ThresholdFamily):
            v1, v2 = fam.m(a1), fam.m(a2)
            if v1 == v2:
                continue
            u = (v1 + v2) / 2
            expr = desc.gen(i, u)
            if v2 < v1:
                expr = ("not", expr)
            return Witness(True, variant, fam.label, desc.describe(expr), (a1,), (a2,), expr=expr)
        if fam.member(None, a1) != fam.member(None, a2):
            expr = desc.gen(i)
            if not fam.member(None, a1):
                expr = ("not", expr)
            return Witness(True, variant, fam.label, desc.describe(expr), (a1,), (a2,), expr=expr)
    return Witness(False, variant, set_description=f"no {variant} generator separates the pair")


def _sample_pairs(A: ConvexSpace, count: int, seed: int) -> list:
    rng = random.Random(seed)

    def draw():
        if isinstance(A, IntervalQ):
            d = rng.randint(1, 12)
            return Fraction(rng.randint(0, d), d)
        if isinstance(A, Simplex):
            from .rational import random_simplex_point
            return random_simplex_point(rng, A.n, 12)
        if isinstance(A, Polytope):
            from .rational import random_simplex_point
            return A.from_coeffs(random_simplex_point(rng, len(A.generators), 12))
        if isinstance(A, RInfty):
            return INF if rng.random() < 0.2 else Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        raise InputError(f"cannot sample {A!r}")

    out = []
    while len(out) < count:
        a, b = draw(), draw()
        if a != b:
            out.append((a, b))
    return out


def separated_check(A: ConvexSpace, variant: str = "join", samples: int = 50, seed: int = 0) -> CheckReport:
    """Every (sampled) pair of distinct elements has a coseparation witness."""
    report = CheckReport(f"CvxSep[{variant}]")
    if A.finite:
        pairs_ = list(itertools.combinations(A.elements(), 2))
    else:
        pairs_ = _sample_pairs(A, samples, seed)
    for a, b in pairs_:
        w = cosep_witness(A, a, b, variant)
        if w.found:
            ok = _verify_witness(A, variant, w, a, b)
        else:
            ok = False
        report.record(ok, lambda: {"pair": [element_to_json(a), element_to_json(b)], "witness": w.to_json()})
    return report


def _verify_witness(A, variant, w: Witness, a, b) -> bool:
    if w.members is not None:
        return (a in w.members) != (b in w.members)
    desc = sigma_functor(A, variant)
    return desc.contains(w.expr, a) != desc.contains(w.expr, b)


# -- finite presentations -----------------------------------------------------------

def element_id(x) -> str:
    """A string id for an element (finite carriers already use string ids)."""
    if isinstance(x, str):
        return x
    if x is INF:
        return "inf"
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, tuple):
        return "(" + ",".join(format_rational(c) for c in x) + ")"
    if hasattr(x, "point"):
        return "(" + ",".join(format_rational(c) for c in x.point) + ")"
    return repr(x)


def presentation(A: ConvexSpace, elements=None, variant: str = "join") -> tuple:
    """``(X, labels)``: the trace of the induced sigma-algebra on a finite set
    of elements, as a FinMeasSpace on element ids, plus ``id -> element``."""
    variant = _variant(variant)
    if A.finite:
        desc = sigma_functor(A, variant)
        if elements is None:
            return desc.space, {x: x for x in A.elements()}
        ids = sorted(set(A.check(x) for x in elements))
        gens = [[x for x in ids if x in set(b)] for b in desc.space.atoms]
        return generate_sigma(ids, gens), {x: x for x in ids}
    if elements is None:
        raise InputError("infinite carriers need an explicit finite element set")
    labels = {}
    for x in elements:
        x = A.check(x)
        labels[element_id(x)] = x
    xs = list(labels.items())
    desc = sigma_functor(A, variant)
    gens = []
    for fam in desc.families:
        for u in fam.cutpoints([x for _, x in xs]):
            gens.append([i for i, x in xs if fam.member(u, x)])
    return generate_sigma(list(labels), gens), labels
