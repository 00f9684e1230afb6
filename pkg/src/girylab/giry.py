"""The finitely-supported Giry monad on finite measurable spaces.

Measures are keyed by atoms, so ``dirac(x) == dirac(y)`` whenever x and y
share an atom. Meta-measures (elements of G(G(X)), G(G(G(X))), ...) are
finitely supported lists of weighted inner measures.
"""
from __future__ import annotations

import functools
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import InputError
from .finmeas import FinMeasSpace, MeasurableMap, identity
from .rational import format_rational, parse_rational
from .reports import CheckReport

ZERO = Fraction(0)
ONE = Fraction(1)


class Prob:
    """A rational probability measure on a finite measurable space."""

    __slots__ = ("space", "vector", "_hash")

    def __init__(self, space: FinMeasSpace, weights: Mapping[str, object]):
        keys = space.atom_keys
        unknown = set(weights) - set(keys)
        if unknown:
            raise InputError(f"weights mention non-atom keys {sorted(unknown)}")
        vec = tuple(Fraction(weights.get(k, 0)) for k in keys)
        if any(w < 0 for w in vec):
            raise InputError(f"negative weight in {dict(zip(keys, vec))}")
        total = sum(vec, ZERO)
        if total != 1:
            raise InputError(f"weights sum to {format_rational(total)}, not 1")
        self.space = space
        self.vector = vec
        self._hash = hash((space, vec))

    @classmethod
    def from_vector(cls, space: FinMeasSpace, vector: Iterable) -> "Prob":
        vec = tuple(Fraction(w) for w in vector)
        if len(vec) != len(space.atoms):
            raise InputError(f"expected {len(space.atoms)} weights, got {len(vec)}")
        if any(w < 0 for w in vec):
            raise InputError(f"negative weight in {vec}")
        if sum(vec, ZERO) != 1:
            raise InputError(f"weights sum to {format_rational(sum(vec, ZERO))}, not 1")
        return cls._trusted(space, vec)

    @classmethod
    def _trusted(cls, space: FinMeasSpace, vec: tuple) -> "Prob":
        # vec is already a validated tuple of Fractions aligned with atom_keys
        self = object.__new__(cls)
        self.space = space
        self.vector = vec
        self._hash = hash((space, vec))
        return self

    @classmethod
    def from_points(cls, space: FinMeasSpace, weights: Mapping[str, object]) -> "Prob":
        """Build from point weights, adding up points that share an atom."""
        acc: dict = {}
        for p, w in weights.items():
            k = space.atom_of(p)
            acc[k] = acc.get(k, ZERO) + Fraction(w)
        return cls(space, acc)

    # -- mapping interface ---------------------------------------------------
    def __getitem__(self, atom_key: str) -> Fraction:
        try:
            return self.vector[self.space.atom_keys.index(atom_key)]
        except ValueError:
            raise InputError(f"unknown atom key {atom_key!r}") from None

    def weights(self) -> dict:
        return dict(zip(self.space.atom_keys, self.vector))

    def support(self) -> tuple:
        return tuple(k for k, w in zip(self.space.atom_keys, self.vector) if w)

    def measure(self, members: Iterable[str]) -> Fraction:
        """Measure of a measurable set given by its points."""
        s = frozenset(members)
        if not self.space.is_measurable_set(s):
            raise InputError(f"{sorted(s)} is not measurable")
        return sum((w for k, w in zip(self.space.atom_keys, self.vector) if k in s), ZERO)

    def mix(self, other: "Prob", alpha) -> "Prob":
        """``(1 - alpha) self + alpha other``."""
        if other.space != self.space:
            raise InputError("cannot mix measures on different spaces")
        a = Fraction(alpha)
        if not 0 <= a <= 1:
            raise InputError(f"alpha {a} outside [0, 1]")
        return Prob._trusted(self.space, tuple((1 - a) * p + a * q for p, q in zip(self.vector, other.vector)))

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Prob) or self._hash != other._hash:
            return False
        return self.space == other.space and self.vector == other.vector

    def __hash__(self):
        return self._hash

    def key(self) -> str:
        """Canonical serialization, e.g. ``"a:1/3,c:2/3"`` (zero weights omitted)."""
        return ",".join(f"{k}:{format_rational(w)}" for k, w in zip(self.space.atom_keys, self.vector) if w)

    def sort_key(self):
        return self.vector

    def __repr__(self):
        return f"Prob({self.key()})"

    def to_json(self, space_name="X") -> dict:
        return {"space": space_name, "weights": {k: format_rational(w) for k, w in self.weights().items()}}

    @classmethod
    def from_json(cls, space: FinMeasSpace, obj: Mapping) -> "Prob":
        try:
            raw = obj["weights"]
        except (KeyError, TypeError):
            raise InputError("measure object needs 'weights'") from None
        return cls(space, {k: parse_rational(v) for k, v in raw.items()})

    @classmethod
    def parse_key(cls, space: FinMeasSpace, key: str) -> "Prob":
        weights = {}
        for part in filter(None, key.split(",")):
            atom, _, w = part.partition(":")
            weights[atom] = parse_rational(w)
        return cls(space, weights)


class MetaProb:
    """A finitely supported measure whose support items are Probs or MetaProbs.

    ``depth`` is 2 for elements of G(G(X)), 3 for G(G(G(X))), and so on.
    """

    __slots__ = ("base", "support", "depth", "_hash")

    def __init__(self, base: FinMeasSpace, support: Iterable[tuple]):
        pairs = [(Fraction(w), item) for w, item in support]
        if not pairs:
            raise InputError("empty support")
        depths = {_depth(item) for _, item in pairs}
        if len(depths) != 1:
            raise InputError("support items have mixed depths")
        for w, item in pairs:
            if w <= 0:
                raise InputError(f"support weight {format_rational(w)} is not positive")
            if item_base(item) != base:
                raise InputError("support item lives on a different base space")
        items = [item for _, item in pairs]
        if len(set(items)) != len(items):
            raise InputError("support items are not pairwise distinct")
        total = sum((w for w, _ in pairs), ZERO)
        if total != 1:
            raise InputError(f"weights sum to {format_rational(total)}, not 1")
        self.base = base
        self.support = tuple(sorted(pairs, key=lambda wi: _sort_key(wi[1])))
        self.depth = depths.pop() + 1
        self._hash = hash((base, self.support))

    @classmethod
    def merged(cls, base: FinMeasSpace, pairs: Iterable[tuple]) -> "MetaProb":
        """Like the constructor, but adds up weights of repeated items and
        drops zero weights."""
        acc: dict = {}
        depth = None
        for w, item in pairs:
            w = Fraction(w)
            if w < 0:
                raise InputError(f"negative weight {format_rational(w)}")
            if w:
                acc[item] = acc.get(item, ZERO) + w
                d = _depth(item)
                if depth is not None and d != depth:
                    raise InputError("support items have mixed depths")
                depth = d
                if item_base(item) != base:
                    raise InputError("support item lives on a different base space")
        if not acc:
            raise InputError("empty support")
        if sum(acc.values(), ZERO) != 1:
            raise InputError(f"weights sum to {format_rational(sum(acc.values(), ZERO))}, not 1")
        self = object.__new__(cls)
        self.base = base
        self.support = tuple(sorted(((w, it) for it, w in acc.items()), key=lambda wi: _sort_key(wi[1])))
        self.depth = depth + 1
        self._hash = hash((base, self.support))
        return self

    def map(self, fn: Callable) -> "MetaProb":
        """Pushforward along ``fn`` applied to each support item."""
        images = [(w, fn(item)) for w, item in self.support]
        return MetaProb.merged(item_base(images[0][1]), images)

    def items(self):
        return [item for _, item in self.support]

    def __eq__(self, other):
        return isinstance(other, MetaProb) and self.base == other.base and self.support == other.support

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return tuple((w, _sort_key(item)) for w, item in self.support)

    def __repr__(self):
        inner = " + ".join(f"{format_rational(w)}·{item!r}" for w, item in self.support)
        return f"MetaProb[{self.depth}]({inner})"

    def to_json(self, space_name="X"):
        return {
            "base": space_name,
            "support": [
                {"weight": format_rational(w), "item": it.to_json(space_name)} for w, it in self.support
            ],
        }


def _depth(item) -> int:
    return 1 if isinstance(item, Prob) else item.depth


def item_base(item) -> FinMeasSpace:
    return item.space if isinstance(item, Prob) else item.base


def _sort_key(item):
    return (_depth(item), item.sort_key())


# -- unit, functor, multiplication ------------------------------------------------

@functools.lru_cache(maxsize=4096)
def dirac(X: FinMeasSpace, x: str) -> Prob:
    return Prob(X, {X.atom_of(x): ONE})


def delta(item) -> MetaProb:
    """The unit one level up: the point mass at a Prob or MetaProb."""
    return MetaProb(item_base(item), [(ONE, item)])


def pushforward(f: MeasurableMap, P: Prob) -> Prob:
    if P.space != f.dom:
        raise InputError("measure does not live on the map's domain")
    acc: dict = {}
    for block, w in zip(f.dom.atoms, P.vector):
        if w:
            k = f.cod.atom_of(f(block[0]))
            acc[k] = acc.get(k, ZERO) + w
    return Prob(f.cod, acc)


def push_tower(f: MeasurableMap, M):
    """Apply G^k(f) to a Prob (k = 1) or MetaProb at every level."""
    if isinstance(M, Prob):
        return pushforward(f, M)
    return M.map(lambda item: push_tower(f, item))


def unit_lift(P: Prob) -> MetaProb:
    """``G(eta)(P)``: the measure over diracs with the weights of P."""
    X = P.space
    return MetaProb(X, [(w, dirac(X, k)) for k, w in zip(X.atom_keys, P.vector) if w])


def mu(M: MetaProb):
    """Flatten one level: ``mu(M)(U) = sum_i w_i P_i(U)``."""
    if not isinstance(M, MetaProb):
        raise InputError("mu expects a MetaProb")
    if M.depth == 2:
        X = M.base
        vec = [ZERO] * len(X.atoms)
        for w, P in M.support:
            for i, p in enumerate(P.vector):
                if p:
                    vec[i] += w * p
        return Prob._trusted(X, tuple(vec))
    return MetaProb.merged(M.base, ((w * v, inner) for w, N in M.support for v, inner in N.support))


def mix_meta(M1: MetaProb, M2: MetaProb, alpha) -> MetaProb:
    """``(1 - alpha) M1 + alpha M2`` as a meta-measure."""
    a = Fraction(alpha)
    pairs = [((1 - a) * w, it) for w, it in M1.support] + [(a * w, it) for w, it in M2.support]
    return MetaProb.merged(M1.base, pairs)


# -- kernels ----------------------------------------------------------------------

class Kernel:
    """A Markov kernel: one Prob on ``cod`` per atom of ``dom``."""

    __slots__ = ("dom", "cod", "rows")

    def __init__(self, dom: FinMeasSpace, cod: FinMeasSpace, rows: Mapping[str, Prob]):
        missing = [k for k in dom.atom_keys if k not in rows]
        if missing:
            raise InputError(f"kernel has no row for atoms {missing}")
        extra = set(rows) - set(dom.atom_keys)
        if extra:
            raise InputError(f"kernel rows for non-atoms {sorted(extra)}")
        for k, row in rows.items():
            if row.space != cod:
                raise InputError(f"row {k!r} does not live on the codomain")
        self.dom = dom
        self.cod = cod
        self.rows = {k: rows[k] for k in dom.atom_keys}

    def __call__(self, point: str) -> Prob:
        return self.rows[self.dom.atom_of(point)]

    def apply(self, P: Prob) -> Prob:
        """Average the rows against P (the Kleisli extension)."""
        if P.space != self.dom:
            raise InputError("measure does not live on the kernel's domain")
        return mu(MetaProb.merged(self.cod, ((w, self.rows[k]) for k, w in P.weights().items())))

    def __eq__(self, other):
        return isinstance(other, Kernel) and (self.dom, self.cod, self.rows) == (other.dom, other.cod, other.rows)

    def __hash__(self):
        return hash((self.dom, self.cod, tuple(self.rows.values())))

    def __repr__(self):
        return "Kernel(" + "; ".join(f"{k}->{r.key()}" for k, r in self.rows.items()) + ")"

    def to_json(self, dom_name="X", cod_name="Y") -> dict:
        return {
            "dom": dom_name,
            "cod": cod_name,
            "rows": {k: r.to_json(cod_name) for k, r in self.rows.items()},
        }

    @classmethod
    def from_json(cls, dom: FinMeasSpace, cod: FinMeasSpace, obj: Mapping) -> "Kernel":
        rows = {}
        for k, row in obj["rows"].items():
            try:
                rows[k] = Prob.from_json(cod, row)
            except InputError as exc:
                raise InputError(f"row {k!r}: {exc}") from None
        return cls(dom, cod, rows)


def identity_kernel(X: FinMeasSpace) -> Kernel:
    return Kernel(X, X, {k: dirac(X, k) for k in X.atom_keys})


def kernel_from_map(f: MeasurableMap) -> Kernel:
    return Kernel(f.dom, f.cod, {b[0]: dirac(f.cod, f(b[0])) for b in f.dom.atoms})


def kleisli_compose(k1: Kernel, k2: Kernel) -> Kernel:
    """``x -> sum_b k1(x)(b) k2(b)``."""
    if k1.cod != k2.dom:
        raise InputError("kernels are not composable: codomain and domain differ")
    Y, Z = k2.dom, k2.cod
    rows = {}
    for x, row in k1.rows.items():
        vec = [ZERO] * len(Z.atoms)
        for b, wb in zip(Y.atom_keys, row.vector):
            if wb:
                for i, wz in enumerate(k2.rows[b].vector):
                    vec[i] += wb * wz
        rows[x] = Prob._trusted(Z, tuple(vec))
    return Kernel(k1.dom, Z, rows)


# -- law suite --------------------------------------------------------------------

def monad_law_suite(X: FinMeasSpace, probes: Iterable, mu_impl: Callable = mu) -> CheckReport:
    """Unit laws on every probe and associativity on every tower of depth >= 3.

    ``mu_impl`` replaces the multiplication (negative controls).
    """
    report = CheckReport("monad_laws")
    for probe in probes:
        if item_base(probe) != X:
            raise InputError("probe lives on a different space")
        left = mu_impl(delta(probe))
        if not report.record(left == probe, lambda: {"law": "left_unit", "probe": repr(probe), "got": repr(left)}):
            break
        if isinstance(probe, Prob):
            right = mu_impl(unit_lift(probe))
        else:
            right = mu_impl(probe.map(delta))
        if not report.record(right == probe, lambda: {"law": "right_unit", "probe": repr(probe), "got": repr(right)}):
            break
        if isinstance(probe, MetaProb) and probe.depth >= 3:
            a = mu_impl(mu_impl(probe))
            b = mu_impl(probe.map(mu_impl))
            if not report.record(a == b, lambda: {"law": "associativity", "probe": repr(probe), "lhs": repr(a), "rhs": repr(b)}):
                break
    return report


def naturality_suite(f: MeasurableMap, probes: Iterable) -> CheckReport:
    """eta and mu are natural along ``f``; G preserves identities."""
    report = CheckReport("giry_naturality")
    ident = identity(f.dom)
    for x in f.dom.points:
        report.record(pushforward(f, dirac(f.dom, x)) == dirac(f.cod, f(x)), {"eta": x})
    for M in probes:
        if isinstance(M, Prob):
            report.record(pushforward(ident, M) == M, lambda: {"identity": repr(M)})
            continue
        lhs = push_tower(f, mu(M))
        rhs = mu(push_tower(f, M))
        report.record(lhs == rhs, lambda: {"mu": repr(M)})
    return report
