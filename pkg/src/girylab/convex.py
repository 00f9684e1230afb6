"""Finitely presented convex spaces and affine maps.

``cc(a, b, alpha)`` is the binary combination ``(1 - alpha) a + alpha b``;
every variant below interprets it in its own way. Finite carriers use string
element ids so they double as points of measurable spaces.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from . import kernels
from .errors import ConsistencyError, InputError, ResourceError
from .rational import CANONICAL_ALPHAS, format_rational, parse_rational, unit_grid
from .reports import CheckReport

ZERO = Fraction(0)
ONE = Fraction(1)


def _alpha(alpha) -> Fraction:
    a = Fraction(alpha)
    if not 0 <= a <= 1:
        raise InputError(f"alpha {a} outside [0, 1]")
    return a


class ConvexSpace:
    """Base class. Subclasses implement ``_cc`` and ``contains``."""

    kind = "abstract"
    finite = False
    geometric = False

    def contains(self, x) -> bool:
        raise NotImplementedError

    def _cc(self, a, b, alpha: Fraction):
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise InputError(f"{x!r} is not an element of {self!r}")
        return x

    def cc(self, a, b, alpha):
        return self._cc(self.check(a), self.check(b), _alpha(alpha))

    def combo(self, pairs: Iterable[tuple]):
        """Finite convex sum of ``(weight, element)`` pairs, folding cc left to right."""
        pairs = [(Fraction(w), self.check(x)) for w, x in pairs]
        if not pairs:
            raise InputError("empty convex combination")
        if any(w < 0 for w, _ in pairs):
            raise InputError("negative weight in convex combination")
        if sum((w for w, _ in pairs), ZERO) != 1:
            raise InputError("weights of a convex combination must sum to 1")
        pairs = [(w, x) for w, x in pairs if w]
        acc_w, acc = pairs[0]
        for w, x in pairs[1:]:
            total = acc_w + w
            acc = self._cc(acc, x, w / total)
            acc_w = total
        return acc

    def elements(self) -> tuple:
        raise InputError(f"{self!r} does not have a finite carrier")

    def __repr__(self):
        return f"{type(self).__name__}()"


# -- geometric spaces --------------------------------------------------------------

class IntervalQ(ConvexSpace):
    """Rationals in [0, 1] with the ambient structure."""

    kind = "intervalQ"
    geometric = True

    def contains(self, x) -> bool:
        return isinstance(x, Fraction) and 0 <= x <= 1 or isinstance(x, int) and not isinstance(x, bool) and 0 <= x <= 1

    def check(self, x):
        if not self.contains(x):
            raise InputError(f"{x!r} is not a rational in [0, 1]")
        return Fraction(x)

    def _cc(self, a, b, alpha):
        return (1 - alpha) * a + alpha * b

    def ambient(self, x) -> tuple:
        return (Fraction(x),)

    def __eq__(self, other):
        return isinstance(other, IntervalQ)

    def __hash__(self):
        return hash("intervalQ")

    def to_json(self):
        return {"kind": "intervalQ"}


class Simplex(ConvexSpace):
    """Barycentric vectors of length ``n``."""

    kind = "simplex"
    geometric = True

    def __init__(self, n: int):
        if n < 1:
            raise InputError("a simplex needs at least one vertex")
        self.n = n

    def contains(self, x) -> bool:
        return (
            isinstance(x, tuple)
            and len(x) == self.n
            and all(isinstance(c, (Fraction, int)) and c >= 0 for c in x)
            and sum(x) == 1
        )

    def check(self, x):
        x = super().check(x)
        return tuple(Fraction(c) for c in x)

    def vertex(self, i: int) -> tuple:
        return tuple(ONE if j == i else ZERO for j in range(self.n))

    def _cc(self, a, b, alpha):
        return tuple((1 - alpha) * x + alpha * y for x, y in zip(a, b))

    def ambient(self, x) -> tuple:
        return tuple(x)

    def __eq__(self, other):
        return isinstance(other, Simplex) and other.n == self.n

    def __hash__(self):
        return hash(("simplex", self.n))

    def __repr__(self):
        return f"Simplex({self.n})"

    def to_json(self):
        return {"kind": "simplex", "n": self.n}


class PolyPoint:
    """A polytope element: generator coefficients plus the ambient point.

    Equality and hashing use the ambient point only.
    """

    __slots__ = ("coeffs", "point")

    def __init__(self, coeffs: tuple, point: tuple):
        self.coeffs = coeffs
        self.point = point

    def __eq__(self, other):
        return isinstance(other, PolyPoint) and self.point == other.point

    def __hash__(self):
        return hash(self.point)

    def __repr__(self):
        return "PolyPoint(" + ", ".join(format_rational(c) for c in self.point) + ")"


class Polytope(ConvexSpace):
    """Convex hull of finitely many rational generators in Q^dim."""

    kind = "polytope"
    geometric = True

    def __init__(self, dim: int, generators: Sequence[Sequence]):
        gens = tuple(tuple(Fraction(c) for c in g) for g in generators)
        if not gens:
            raise InputError("a polytope needs at least one generator")
        if any(len(g) != dim for g in gens):
            raise InputError(f"generators must have dimension {dim}")
        self.dim = dim
        self.generators = gens

    def from_coeffs(self, coeffs: Sequence) -> PolyPoint:
        cs = tuple(Fraction(c) for c in coeffs)
        if len(cs) != len(self.generators) or any(c < 0 for c in cs) or sum(cs) != 1:
            raise InputError(f"bad generator coefficients {coeffs!r}")
        point = tuple(sum((c * g[j] for c, g in zip(cs, self.generators)), ZERO) for j in range(self.dim))
        return PolyPoint(cs, point)

    def generator(self, i: int) -> PolyPoint:
        return self.from_coeffs([ONE if j == i else ZERO for j in range(len(self.generators))])

    def contains(self, x) -> bool:
        # raw ambient membership needs an LP; elements always carry coefficients
        if not isinstance(x, PolyPoint) or len(x.coeffs) != len(self.generators):
            return False
        return self.from_coeffs(x.coeffs).point == x.point

    def _cc(self, a, b, alpha):
        return self.from_coeffs(tuple((1 - alpha) * x + alpha * y for x, y in zip(a.coeffs, b.coeffs)))

    def ambient(self, x) -> tuple:
        return x.point

    def __eq__(self, other):
        return isinstance(other, Polytope) and (self.dim, self.generators) == (other.dim, other.generators)

    def __hash__(self):
        return hash(("polytope", self.generators))

    def __repr__(self):
        return f"Polytope(dim={self.dim}, {len(self.generators)} generators)"

    def to_json(self):
        return {
            "kind": "polytope",
            "dim": self.dim,
            "generators": [[format_rational(c) for c in g] for g in self.generators],
        }


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "∞"

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()


class RInfty(ConvexSpace):
    """Rationals together with a top element ∞ that absorbs every
    combination giving it positive weight."""

    kind = "rinfty"

    def contains(self, x) -> bool:
        return x is INF or isinstance(x, (Fraction, int)) and not isinstance(x, bool)

    def check(self, x):
        x = super().check(x)
        return x if x is INF else Fraction(x)

    def _cc(self, a, b, alpha):
        if b is INF and alpha > 0:
            return INF
        if a is INF and alpha < 1:
            return INF
        if alpha == 1:
            return b
        if alpha == 0:
            return a
        return (1 - alpha) * a + alpha * b

    def __eq__(self, other):
        return isinstance(other, RInfty)

    def __hash__(self):
        return hash("rinfty")

    def to_json(self):
        return {"kind": "rinfty"}


# -- finite carriers ---------------------------------------------------------------

class FiniteConvex(ConvexSpace):
    """A finite carrier of string ids with an arbitrary combination rule."""

    kind = "finite"
    finite = True

    def __init__(self, elements: Iterable[str], combine: Callable, name: str = "finite"):
        self._elements = tuple(elements)
        if len(set(self._elements)) != len(self._elements):
            raise InputError("duplicate element ids")
        self._set = frozenset(self._elements)
        self._combine = combine
        self._memo: dict = {}
        self.name = name

    def elements(self) -> tuple:
        return self._elements

    def contains(self, x) -> bool:
        return isinstance(x, str) and x in self._set

    def _cc(self, a, b, alpha):
        if alpha == 0:
            return a
        if alpha == 1:
            return b
        key = (a, b, alpha)
        out = self._memo.get(key)
        if out is None:
            out = self._memo[key] = self._combine(a, b, alpha)
        return out

    def restrict(self, subset: Iterable[str], name: str | None = None) -> "FiniteConvex":
        """The induced structure on a subset closed under combination."""
        sub = tuple(x for x in self._elements if x in set(subset))
        for a, b in itertools.product(sub, repeat=2):
            for alpha in CANONICAL_ALPHAS:
                if self._cc(a, b, alpha) not in sub:
                    raise InputError(f"subset is not closed: {a} +_{alpha} {b} leaves it")
        return FiniteConvex(sub, self._combine, name or f"{self.name}|sub")

    def table(self, alphas=CANONICAL_ALPHAS) -> dict:
        return {(a, b, al): self._cc(a, b, al) for a in self._elements for b in self._elements for al in alphas}

    def __repr__(self):
        return f"{type(self).__name__}({self.name}: {','.join(self._elements)})"


class Semilattice(FiniteConvex):
    """A finite meet-semilattice; interior combinations are meets."""

    kind = "semilattice"

    def __init__(self, elements: Iterable[str], meet: Mapping[tuple, str], name: str = "semilattice"):
        elements = tuple(elements)
        table = {}
        for a in elements:
            for b in elements:
                if (a, b) in meet:
                    table[a, b] = meet[a, b]
                elif (b, a) in meet:
                    table[a, b] = meet[b, a]
                elif a == b:
                    table[a, b] = a
                else:
                    raise InputError(f"meet table has no entry for {a}, {b}")
        for (a, b), c in table.items():
            if c not in elements:
                raise InputError(f"meet of {a}, {b} is not an element")
        self.meet_table = table
        for a in elements:
            if table[a, a] != a:
                raise InputError(f"meet is not idempotent at {a}")
            for b in elements:
                if table[a, b] != table[b, a]:
                    raise InputError(f"meet is not commutative at {a}, {b}")
                for c in elements:
                    if table[table[a, b], c] != table[a, table[b, c]]:
                        raise InputError(f"meet is not associative at {a}, {b}, {c}")
        super().__init__(elements, lambda a, b, alpha: self.meet_table[a, b], name)

    @classmethod
    def from_order(cls, elements: Iterable[str], leq: Iterable[tuple], name="semilattice") -> "Semilattice":
        """Meets from a partial order given by generating pairs ``a <= b``."""
        elements = tuple(elements)
        le = {(a, a) for a in elements} | {tuple(p) for p in leq}
        changed = True
        while changed:  # transitive closure
            changed = False
            for (a, b), (c, d) in itertools.product(list(le), repeat=2):
                if b == c and (a, d) not in le:
                    le.add((a, d))
                    changed = True
        meet = {}
        for a, b in itertools.product(elements, repeat=2):
            lower = [c for c in elements if (c, a) in le and (c, b) in le]
            greatest = [c for c in lower if all((d, c) in le for d in lower)]
            if len(greatest) != 1:
                raise InputError(f"{a} and {b} have no meet")
            meet[a, b] = greatest[0]
        return cls(elements, meet, name)

    @classmethod
    def chain(cls, n: int) -> "Semilattice":
        els = [str(i) for i in range(n)]
        return cls.from_order(els, [(els[i], els[i + 1]) for i in range(n - 1)], name=f"chain{n}")

    def meet(self, a: str, b: str) -> str:
        return self.meet_table[self.check(a), self.check(b)]

    def leq(self, a: str, b: str) -> bool:
        return self.meet(a, b) == a

    def up_set(self, a: str) -> frozenset:
        return frozenset(x for x in self._elements if self.leq(a, x))

    def meet_all(self, xs: Iterable[str]) -> str:
        xs = list(xs)
        out = xs[0]
        for x in xs[1:]:
            out = self.meet_table[out, x]
        return out

    def filters(self) -> list:
        """All filters (up-closed, meet-closed subsets), including the empty one."""
        out = []
        for r in range(len(self._elements) + 1):
            for sub in itertools.combinations(self._elements, r):
                s = set(sub)
                up = all(y in s for x in s for y in self._elements if self.leq(x, y))
                closed = all(self.meet_table[x, y] in s for x in s for y in s)
                if up and closed:
                    out.append(frozenset(s))
        return out

    def __eq__(self, other):
        return isinstance(other, Semilattice) and self._elements == other._elements and self.meet_table == other.meet_table

    def __hash__(self):
        return hash(("semilattice", self._elements))

    def to_json(self):
        triples = [[a, b, self.meet_table[a, b]] for a, b in itertools.combinations(self._elements, 2)]
        return {"kind": "semilattice", "elements": list(self._elements), "meet": triples}


TWO = Semilattice.chain(2)
TWO.name = "2"


def semilattices(n: int) -> list:
    """Every meet-semilattice on n elements up to isomorphism, on carriers
    ``"0".."n-1"`` numbered along a linear extension of the order."""
    els = [str(i) for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    seen = set()
    out = []
    for mask in range(1 << len(pairs)):
        lt = {p for k, p in enumerate(pairs) if mask >> k & 1}
        if any((a, b) in lt and (b, c) in lt and (a, c) not in lt for a in range(n) for b in range(n) for c in range(n)):
            continue
        try:
            S = Semilattice.from_order(els, [(els[a], els[b]) for a, b in lt], name=f"semilattice{n}_{len(out)}")
        except InputError:
            continue
        canon = min(
            tuple(sorted((perm[a], perm[b]) for a, b in lt)) for perm in itertools.permutations(range(n))
        )
        if canon in seen:
            continue
        seen.add(canon)
        out.append(S)
    return out


class Quotient(FiniteConvex):
    """A finite space modulo a congruence given as a partition of elements.

    Classes are named by their least member.
    """

    kind = "quotient"

    def __init__(self, base: FiniteConvex, partition: Iterable[Iterable[str]]):
        blocks = [tuple(sorted(b)) for b in partition]
        rep = {x: b[0] for b in blocks for x in b}
        if set(rep) != set(base.elements()):
            raise InputError("congruence classes must cover the base carrier")
        for a, b in itertools.product(base.elements(), repeat=2):
            for a2, b2 in itertools.product(
                [x for x in base.elements() if rep[x] == rep[a]], [x for x in base.elements() if rep[x] == rep[b]]
            ):
                for alpha in CANONICAL_ALPHAS:
                    if rep[base.cc(a, b, alpha)] != rep[base.cc(a2, b2, alpha)]:
                        raise InputError(f"partition is not a congruence at {a},{b} vs {a2},{b2}")
        self.base = base
        self.rep = rep
        reps = sorted({b[0] for b in blocks})
        super().__init__(reps, lambda a, b, alpha: rep[base.cc(a, b, alpha)], name=f"{base.name}/~")


# -- affine maps -------------------------------------------------------------------

class AffineMap:
    """A structure-preserving map. ``body`` is one of ``"table"``, ``"linear"``,
    ``"path"`` or ``"function"``."""

    def __init__(self, dom: ConvexSpace, cod: ConvexSpace, body: str, payload, name: str = ""):
        self.dom = dom
        self.cod = cod
        self.body = body
        self.payload = payload
        self.name = name
        if body == "table":
            graph = dict(payload)
            if set(graph) != set(dom.elements()):
                raise InputError("table map must be total on the finite domain")
            for v in graph.values():
                cod.check(v)
            self.payload = graph
        elif body == "linear":
            matrix, offset = payload
            self.payload = (
                tuple(tuple(Fraction(c) for c in row) for row in matrix),
                tuple(Fraction(c) for c in offset),
            )
        elif body == "path":
            a1, a2 = payload
            if not isinstance(dom, IntervalQ):
                raise InputError("path maps are defined on the unit interval")
            self.payload = (cod.check(a1), cod.check(a2))
        elif body != "function":
            raise InputError(f"unknown affine map body {body!r}")

    def __call__(self, x):
        x = self.dom.check(x)
        if self.body == "table":
            return self.payload[x]
        if self.body == "path":
            a1, a2 = self.payload
            return self.cod.cc(a1, a2, x)
        if self.body == "linear":
            matrix, offset = self.payload
            v = self.dom.ambient(x)
            out = tuple(sum((m * c for m, c in zip(row, v)), ZERO) + o for row, o in zip(matrix, offset))
            if isinstance(self.cod, IntervalQ):
                return self.cod.check(out[0])
            return self.cod.check(out)
        return self.cod.check(self.payload(x))

    def __repr__(self):
        label = self.name or self.body
        return f"AffineMap[{label}]({self.dom!r} -> {self.cod!r})"

    def to_json(self):
        if self.body == "table":
            return {"body": "table", "graph": dict(self.payload)}
        if self.body == "linear":
            matrix, offset = self.payload
            return {
                "body": "linear",
                "matrix": [[format_rational(c) for c in row] for row in matrix],
                "offset": [format_rational(c) for c in offset],
            }
        if self.body == "path":
            return {"body": "path", "endpoints": [_elem_json(e) for e in self.payload]}
        return {"body": "function", "name": self.name}


def _elem_json(x):
    if x is INF:
        return "inf"
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, tuple):
        return [format_rational(c) for c in x]
    if isinstance(x, PolyPoint):
        return {"coeffs": [format_rational(c) for c in x.coeffs]}
    return x


def element_to_json(x):
    return _elem_json(x)


def element_from_json(A: ConvexSpace, obj):
    if isinstance(A, RInfty) and obj == "inf":
        return INF
    if isinstance(A, (IntervalQ, RInfty)):
        return A.check(parse_rational(obj))
    if isinstance(A, Simplex):
        return A.check(tuple(parse_rational(c) for c in obj))
    if isinstance(A, Polytope):
        return A.from_coeffs([parse_rational(c) for c in obj["coeffs"]])
    return A.check(obj)


def table_map(dom: ConvexSpace, cod: ConvexSpace, graph: Mapping, name="") -> AffineMap:
    return AffineMap(dom, cod, "table", graph, name)


def path(cod: ConvexSpace, a1, a2) -> AffineMap:
    """``r -> a1 +_r a2``."""
    return AffineMap(IntervalQ(), cod, "path", (a1, a2), name="path")


def function_map(dom: ConvexSpace, cod: ConvexSpace, fn: Callable, name="function") -> AffineMap:
    return AffineMap(dom, cod, "function", fn, name)


def epsilon2() -> AffineMap:
    """The non-constant affine map I -> 2 sending only 1 to 1."""
    return function_map(IntervalQ(), TWO, lambda r: "1" if r == 1 else "0", name="epsilon2")


def constant_map(dom: ConvexSpace, cod: ConvexSpace, value) -> AffineMap:
    cod.check(value)
    if dom.finite:
        return table_map(dom, cod, {x: value for x in dom.elements()}, name="const")
    return function_map(dom, cod, lambda x: value, name="const")


# -- probes and checks --------------------------------------------------------------

def default_probes(A: ConvexSpace, max_den: int = 6) -> list:
    """Probe triples ``(a, b, alpha)``: exhaustive over pairs for finite
    carriers, a rational grid for the interval, vertices plus midpoints for
    simplices and polytopes."""
    if A.finite:
        els = A.elements()
        return [(a, b, al) for a in els for b in els for al in CANONICAL_ALPHAS]
    if isinstance(A, IntervalQ):
        grid = unit_grid(max_den)
        return [(a, b, al) for a in grid for b in grid for al in grid]
    if isinstance(A, RInfty):
        pts = [Fraction(-2), ZERO, Fraction(1, 2), Fraction(3), INF]
        return [(a, b, al) for a in pts for b in pts for al in CANONICAL_ALPHAS]
    if isinstance(A, (Simplex, Polytope)):
        if isinstance(A, Simplex):
            verts = [A.vertex(i) for i in range(A.n)]
        else:
            verts = [A.generator(i) for i in range(len(A.generators))]
        pts = list(verts)
        for u, v in itertools.combinations(verts, 2):
            pts.append(A.cc(u, v, Fraction(1, 2)))
        pts.append(A.combo([(Fraction(1, len(verts)), v) for v in verts]) if len(verts) > 1 else verts[0])
        return [(a, b, al) for a in pts for b in pts for al in CANONICAL_ALPHAS]
    raise InputError(f"no default probes for {A!r}")


def is_affine(m, probes=None, dom: ConvexSpace | None = None, cod: ConvexSpace | None = None) -> bool:
    """Affinity equation on every probe. ``m`` is an AffineMap or any callable
    (then pass ``dom`` and ``cod``)."""
    return affinity_report(m, probes, dom, cod).passed


def affinity_report(m, probes=None, dom=None, cod=None) -> CheckReport:
    dom = dom if dom is not None else m.dom
    cod = cod if cod is not None else m.cod
    probes = default_probes(dom) if probes is None else probes
    report = CheckReport("affine")
    for a, b, al in probes:
        lhs = m(dom.cc(a, b, al))
        rhs = cod.cc(m(a), m(b), al)
        if not report.record(lhs == rhs, lambda: {"a": _elem_json(a), "b": _elem_json(b), "alpha": al}):
            break
    return report


def _axiom_triples(A: ConvexSpace, probes):
    if probes is not None:
        return probes
    if A.finite:
        els = A.elements()
        return [(a, b, c) for a in els for b in els for c in els]
    pts = sorted({t[0] for t in default_probes(A)}, key=repr)
    return [(a, b, c) for a in pts for b in pts for c in pts]


def axiom_suite(A: ConvexSpace, probes=None, alphas=CANONICAL_ALPHAS) -> CheckReport:
    """Idempotence, parametric commutativity and parametric associativity.

    Associativity is checked as
    ``(a +_r b) +_s c == a +_t (b +_u c)`` with ``t = r + s - rs`` and
    ``u = s / t`` (any u when t = 0, where both sides are ``a``).
    """
    report = CheckReport("convex_axioms")
    for a, b, c in _axiom_triples(A, probes):
        for r in alphas:
            if not report.record(A.cc(a, a, r) == a, lambda: {"axiom": "idempotence", "a": _elem_json(a), "alpha": r}):
                return report
            ok = A.cc(a, b, r) == A.cc(b, a, 1 - r)
            if not report.record(ok, lambda: {"axiom": "commutativity", "a": _elem_json(a), "b": _elem_json(b), "alpha": r}):
                return report
            for s in alphas:
                t = r + s - r * s
                u = s / t if t else ZERO
                lhs = A.cc(A.cc(a, b, r), c, s)
                rhs = A.cc(a, A.cc(b, c, u), t)
                w = lambda: {"axiom": "associativity", "triple": [_elem_json(a), _elem_json(b), _elem_json(c)], "r": r, "s": s}
                if not report.record(lhs == rhs, w):
                    return report
    return report


def _comb_table(A: FiniteConvex, alphas) -> tuple:
    els = A.elements()
    idx = {x: i for i, x in enumerate(els)}
    flat = [idx[A.cc(a, b, al)] for a in els for b in els for al in alphas]
    return els, idx, flat


def hom_enum(A: ConvexSpace, B: ConvexSpace, cap: int | None = None, alphas=CANONICAL_ALPHAS) -> list:
    """Every table map A -> B passing the exhaustive affinity check."""
    if not (A.finite and B.finite):
        raise InputError("hom_enum needs finite carriers on both sides")
    cap = kernels.max_enum() if cap is None else cap
    count = len(B.elements()) ** len(A.elements())
    if count > cap:
        raise ResourceError(f"{count} candidate graphs exceed the cap {cap}")
    ea, _, ta = _comb_table(A, alphas)
    eb, _, tb = _comb_table(B, alphas)
    graphs = kernels.affine_graphs(ta, tb, len(ea), len(eb), len(alphas))
    return [table_map(A, B, {a: eb[g[i]] for i, a in enumerate(ea)}) for g in graphs]


def finite_grid_affine_maps(A: ConvexSpace, max_den: int = 4, cap: int | None = None) -> list:
    """Affine maps from a finite carrier into the unit interval whose values
    lie on the denominator grid, found by brute-force filtering."""
    if not A.finite:
        raise InputError("needs a finite carrier")
    cap = kernels.max_enum() if cap is None else cap
    grid = unit_grid(max_den)
    els = A.elements()
    if len(grid) ** len(els) > cap:
        raise ResourceError("grid enumeration exceeds the cap")
    _, _, flat = _comb_table(A, CANONICAL_ALPHAS)
    n, k = len(els), len(CANONICAL_ALPHAS)
    eqs = [(a, b, al, flat[(a * n + b) * k + j]) for a in range(n) for b in range(n) for j, al in enumerate(CANONICAL_ALPHAS)]
    out = []
    for values in itertools.product(grid, repeat=n):
        if all(values[c] == (1 - al) * values[a] + al * values[b] for a, b, al, c in eqs):
            out.append(table_map(A, IntervalQ(), dict(zip(els, values))))
    return out


def interval_table_restrictions(max_den: int = 4) -> list:
    """Table maps grid -> grid on the denominator grid of [0,1] that satisfy
    the affinity equation wherever the combination stays on the grid."""
    grid = unit_grid(max_den)
    gset = set(grid)
    I = IntervalQ()
    triples = [(a, b, al) for a in grid for b in grid for al in CANONICAL_ALPHAS if I.cc(a, b, al) in gset]
    # exhaustive backtracking; a triple is checked once all three points are assigned
    order = {x: i for i, x in enumerate(grid)}
    by_last: dict = {}
    for a, b, al in triples:
        c = I.cc(a, b, al)
        by_last.setdefault(max(order[a], order[b], order[c]), []).append((a, b, al, c))
    out = []
    g: dict = {}

    def extend(i):
        if i == len(grid):
            out.append(dict(g))
            return
        for v in grid:
            g[grid[i]] = v
            if all(g[c] == I.cc(g[a], g[b], al) for a, b, al, c in by_last.get(i, ())):
                extend(i + 1)
        del g[grid[i]]

    extend(0)
    return out


def space_from_json(obj: Mapping) -> ConvexSpace:
    try:
        kind = obj["kind"]
    except (KeyError, TypeError):
        raise InputError("convex space object needs 'kind'") from None
    if kind == "simplex":
        return Simplex(int(obj["n"]))
    if kind == "intervalQ":
        return IntervalQ()
    if kind == "rinfty":
        return RInfty()
    if kind == "polytope":
        return Polytope(int(obj["dim"]), [[parse_rational(c) for c in g] for g in obj["generators"]])
    if kind == "semilattice":
        els = [str(e) for e in obj["elements"]]
        if "order" in obj:
            return Semilattice.from_order(els, [tuple(p) for p in obj["order"]], name=obj.get("name", "semilattice"))
        raw = obj.get("meet", {})
        meet = {}
        if isinstance(raw, dict):
            for k, v in raw.items():
                a, _, b = k.partition(",")
                meet[a.strip(), b.strip()] = v
        else:
            for a, b, c in raw:
                meet[a, b] = c
        return Semilattice(els, meet, name=obj.get("name", "semilattice"))
    raise InputError(f"unsupported convex space kind {kind!r}")


def check_closed(A: FiniteConvex) -> None:
    """Every canonical combination stays in the carrier."""
    for (a, b, al), c in A.table().items():
        if c not in A.elements():
            raise ConsistencyError(f"{a} +_{al} {b} = {c!r} leaves the carrier")
