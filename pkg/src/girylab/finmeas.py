"""Finite measurable spaces.

A sigma-algebra on a finite set is stored as its atom partition: the
measurable sets are exactly the unions of atoms. Point identifiers are opaque
strings; every enumeration walks them in sorted order.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping

from . import kernels
from .errors import ConsistencyError, InputError, PreconditionError, ResourceError
from .reports import CheckReport


@dataclass(frozen=True, init=False, eq=False)
class FinMeasSpace:
    points: tuple
    atoms: tuple

    def __init__(self, points: Iterable[str], atoms: Iterable[Iterable[str]] | None = None):
        raw = list(points)
        pts = tuple(sorted(set(raw)))
        if len(pts) != len(raw):
            raise InputError(f"duplicate point ids in {raw!r}")
        if not all(isinstance(p, str) for p in pts):
            raise InputError("point ids must be strings")
        if atoms is None:
            blocks = [(p,) for p in pts]
        else:
            blocks = [tuple(sorted(set(b))) for b in atoms]
            seen: set = set()
            for b in blocks:
                if not b:
                    raise InputError("atoms must be nonempty")
                if seen.intersection(b):
                    raise InputError(f"atoms overlap at {sorted(seen.intersection(b))}")
                unknown = set(b) - set(pts)
                if unknown:
                    raise InputError(f"atom mentions unknown points {sorted(unknown)}")
                seen.update(b)
            if seen != set(pts):
                raise InputError(f"atoms do not cover points {sorted(set(pts) - seen)}")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "atoms", tuple(sorted(blocks, key=lambda b: b[0])))

    def __hash__(self):
        cached = self.__dict__.get("_hash_cache")
        if cached is None:
            cached = hash((self.points, self.atoms))
            object.__setattr__(self, "_hash_cache", cached)
        return cached

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FinMeasSpace) and self.points == other.points and self.atoms == other.atoms

    # -- queries ---------------------------------------------------------------
    @property
    def atom_keys(self) -> tuple:
        """Canonical atom names: the least member of each atom."""
        return tuple(b[0] for b in self.atoms)

    def _atom_index(self) -> dict:
        cached = self.__dict__.get("_atom_index_cache")
        if cached is None:
            cached = {p: i for i, b in enumerate(self.atoms) for p in b}
            object.__setattr__(self, "_atom_index_cache", cached)
        return cached

    def atom_of(self, point: str) -> str:
        try:
            return self.atoms[self._atom_index()[point]][0]
        except KeyError:
            raise InputError(f"unknown point {point!r}") from None

    def atom_members(self, key: str) -> tuple:
        for b in self.atoms:
            if b[0] == key:
                return b
        raise InputError(f"unknown atom key {key!r}")

    @property
    def is_separated(self) -> bool:
        return all(len(b) == 1 for b in self.atoms)

    def is_measurable_set(self, members: Iterable[str]) -> bool:
        s = set(members)
        if not s <= set(self.points):
            raise InputError(f"unknown points {sorted(s - set(self.points))}")
        return all(set(b) <= s or not s.intersection(b) for b in self.atoms)

    def measurable_sets(self):
        """Every measurable set (as a frozenset), smallest atom-unions first."""
        for r in range(len(self.atoms) + 1):
            for combo in itertools.combinations(self.atoms, r):
                yield frozenset(p for b in combo for p in b)

    def measset(self, members: Iterable[str]) -> "MeasSet":
        return MeasSet(self, frozenset(members))

    def to_json(self) -> dict:
        return {"points": list(self.points), "atoms": [list(b) for b in self.atoms]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "FinMeasSpace":
        try:
            return cls(obj["points"], obj.get("atoms"))
        except (KeyError, TypeError) as exc:
            raise InputError(f"bad space object: {exc}") from None

    def __repr__(self):
        body = " ".join("{" + ",".join(b) + "}" for b in self.atoms)
        return f"FinMeasSpace({body})"


@dataclass(frozen=True)
class MeasSet:
    space: FinMeasSpace
    members: frozenset

    def __post_init__(self):
        if not self.space.is_measurable_set(self.members):
            raise InputError(f"{sorted(self.members)} is not a union of atoms of {self.space!r}")

    def complement(self) -> "MeasSet":
        return MeasSet(self.space, frozenset(self.space.points) - self.members)

    @property
    def atom_keys(self) -> tuple:
        return tuple(k for k in self.space.atom_keys if k in self.members)


@dataclass(frozen=True, init=False)
class MeasurableMap:
    dom: FinMeasSpace
    cod: FinMeasSpace
    graph: tuple  # ((point, image), ...) in dom point order

    def __init__(self, dom: FinMeasSpace, cod: FinMeasSpace, graph: Mapping[str, str], *, check=True):
        missing = [p for p in dom.points if p not in graph]
        if missing:
            raise InputError(f"map is not total, missing {missing}")
        extra = set(graph) - set(dom.points)
        if extra:
            raise InputError(f"map mentions unknown domain points {sorted(extra)}")
        bad = sorted({v for v in graph.values() if v not in set(cod.points)})
        if bad:
            raise InputError(f"map image leaves the codomain: {bad}")
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "cod", cod)
        object.__setattr__(self, "graph", tuple((p, graph[p]) for p in dom.points))
        if check and not is_measurable(dict(self.graph), dom, cod):
            raise InputError(f"map {dict(self.graph)} is not measurable")

    def __call__(self, point: str) -> str:
        return self.table[point]

    @property
    def table(self) -> dict:
        cached = self.__dict__.get("_table")
        if cached is None:
            cached = dict(self.graph)
            object.__setattr__(self, "_table", cached)
        return cached

    def preimage(self, members: Iterable[str]) -> frozenset:
        s = set(members)
        return frozenset(p for p, v in self.graph if v in s)

    def then(self, other: "MeasurableMap") -> "MeasurableMap":
        """``other ∘ self``."""
        if other.dom != self.cod:
            raise InputError("maps are not composable")
        return MeasurableMap(self.dom, other.cod, {p: other(v) for p, v in self.graph}, check=False)

    def to_json(self, dom_name="dom", cod_name="cod") -> dict:
        return {"dom": dom_name, "cod": cod_name, "graph": dict(self.graph)}


def identity(X: FinMeasSpace) -> MeasurableMap:
    return MeasurableMap(X, X, {p: p for p in X.points}, check=False)


def compose(g: MeasurableMap, f: MeasurableMap) -> MeasurableMap:
    """``g ∘ f``."""
    return f.then(g)


# -- operations -------------------------------------------------------------------

def generate_sigma(points: Iterable[str], generators: Iterable[Iterable[str]]) -> FinMeasSpace:
    """Smallest sigma-algebra on ``points`` containing every generator."""
    pts = tuple(sorted(set(points)))
    index = {p: i for i, p in enumerate(pts)}
    gens = []
    for g in generators:
        g = list(g)
        unknown = [p for p in g if p not in index]
        if unknown:
            raise InputError(f"generator mentions unknown points {sorted(unknown)}")
        gens.append([index[p] for p in g])
    labels = kernels.refine_partition(len(pts), gens)
    blocks: dict = {}
    for p, lab in zip(pts, labels):
        blocks.setdefault(lab, []).append(p)
    return FinMeasSpace(pts, blocks.values())


def is_measurable(graph: Mapping[str, str], dom: FinMeasSpace, cod: FinMeasSpace) -> bool:
    """Preimage of every codomain atom is a union of domain atoms."""
    for block in dom.atoms:
        if len({cod.atom_of(graph[p]) for p in block}) > 1:
            return False
    return True


def separate(X: FinMeasSpace) -> tuple:
    """The separation quotient ``(X_s, q)``; points of X_s are atom keys."""
    keys = X.atom_keys
    # final sigma-algebra: W measurable iff q^{-1}(W) measurable
    q_graph = {p: X.atom_of(p) for p in X.points}
    generators = []
    for k in keys:
        pre = [p for p in X.points if q_graph[p] == k]
        if not X.is_measurable_set(pre):
            raise ConsistencyError(f"preimage of {k!r} under q is not measurable")
        generators.append([k])
    Xs = generate_sigma(keys, generators)
    if not Xs.is_separated:
        raise ConsistencyError("final sigma-algebra on the quotient is not discrete")
    return Xs, MeasurableMap(X, Xs, q_graph, check=False)


def induced_map(f: MeasurableMap) -> MeasurableMap:
    """``f_s([x]) = [f(x)]`` between separation quotients."""
    Xs, _ = separate(f.dom)
    Ys, _ = separate(f.cod)
    graph: dict = {}
    for block in f.dom.atoms:
        images = {f.cod.atom_of(f(p)) for p in block}
        if len(images) != 1:
            raise ConsistencyError(f"atom {block} is split by the map; not measurable")
        graph[block[0]] = images.pop()
    return MeasurableMap(Xs, Ys, graph, check=False)


def _graph_id(X: FinMeasSpace, graph: tuple) -> str:
    return ",".join(f"{p}>{v}" for p, v in graph)


def hom_set(X: FinMeasSpace, Y: FinMeasSpace, cap: int | None = None) -> list:
    """All measurable maps X -> Y, in lexicographic graph order."""
    cap = kernels.max_enum() if cap is None else cap
    candidates = len(Y.points) ** len(X.points)
    if candidates > cap:
        raise ResourceError(f"{candidates} candidate graphs exceed the cap {cap}")
    dom_block = [X._atom_index()[p] for p in X.points]
    cod_block = [Y._atom_index()[p] for p in Y.points]
    graphs = kernels.measurable_graphs(dom_block, cod_block, len(Y.points))
    return [
        MeasurableMap(X, Y, {p: Y.points[i] for p, i in zip(X.points, g)}, check=False)
        for g in graphs
    ]


def hom_and_function_space(X: FinMeasSpace, Y: FinMeasSpace, cap: int | None = None) -> tuple:
    """``(maps, Y^X)`` where Y^X carries the evaluation sigma-algebra.

    Points of ``Y^X`` are named ``"x>y,..."`` after their graphs.
    """
    maps = hom_set(X, Y, cap)
    ids = [_graph_id(X, m.graph) for m in maps]
    generators = []
    for x in X.points:
        for block in Y.atoms:
            bs = set(block)
            generators.append([i for i, m in zip(ids, maps) if m(x) in bs])
    return maps, generate_sigma(ids, generators)


def function_space_point(f: MeasurableMap) -> str:
    return _graph_id(f.dom, f.graph)


def check_S_adjunction(X: FinMeasSpace, Y: FinMeasSpace, cap: int | None = None) -> CheckReport:
    """Precomposition with q_X is a bijection Hom(X_s, Y) -> Hom(X, Y), and
    separation is an idempotent monad."""
    if not Y.is_separated:
        raise PreconditionError("the codomain must be separated")
    report = CheckReport("inclusionRight")
    Xs, q = separate(X)
    lhs = hom_set(Xs, Y, cap)
    rhs = hom_set(X, Y, cap)
    image = [q.then(g).graph for g in lhs]
    report.record(len(set(image)) == len(image), {"non_injective": True})
    missing = sorted(set(m.graph for m in rhs) - set(image))
    report.record(not missing, {"unreached": [dict(g) for g in missing[:1]]})
    report.record(set(image) <= set(m.graph for m in rhs), {"non_measurable_image": True})
    # idempotence: S S X = S X and the multiplication S S X -> S X is the identity
    Xss, qs = separate(Xs)
    report.record(Xss == Xs, {"separate_twice": repr(Xss)})
    report.record(all(qs(p) == p for p in Xs.points), {"multiplication_not_identity": True})
    return report
