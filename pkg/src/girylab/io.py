"""Model files: named spaces, measures, kernels, convex spaces, maps and algebras.

Every section is optional. Cross-references are by name and resolved on load.
Canonical output is sorted-key JSON with "p/q" rationals and LF newlines.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .convex import (
    AffineMap,
    ConvexSpace,
    element_from_json,
    path,
    space_from_json,
    table_map,
)
from .errors import InputError
from .finmeas import FinMeasSpace, MeasurableMap
from .giry import Kernel, Prob
from .rational import parse_rational

SECTIONS = ("spaces", "measures", "kernels", "maps", "convex", "affine", "convex_measures", "algebras")


@dataclass
class ConvexMeasure:
    """A finitely supported measure on the elements of a convex space."""

    convex: str
    support: list  # [(weight, element), ...]


@dataclass
class AlgebraSpec:
    """An algebra entry: either ``convex`` (the comparison functor applied to a
    named finite space) or an explicit ``table`` over ``space``."""

    space: str | None = None
    table: dict | None = None
    convex: str | None = None


@dataclass
class Model:
    spaces: dict = field(default_factory=dict)
    measures: dict = field(default_factory=dict)
    kernels: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    convex: dict = field(default_factory=dict)
    affine: dict = field(default_factory=dict)
    convex_measures: dict = field(default_factory=dict)
    algebras: dict = field(default_factory=dict)

    def space_name(self, X: FinMeasSpace) -> str:
        for name, Y in self.spaces.items():
            if Y == X:
                return name
        return "X"

    def get(self, section: str, name: str):
        table = getattr(self, section)
        if name not in table:
            raise InputError(f"no {section[:-1] if section.endswith('s') else section} named {name!r}")
        return table[name]


def _section(raw: Mapping, key: str) -> dict:
    value = raw.get(key, {})
    if not isinstance(value, dict):
        raise InputError(f"section {key!r} must be an object")
    return value


def _ref(model: Model, section: str, name, where: str):
    if not isinstance(name, str) or name not in getattr(model, section):
        raise InputError(f"{where}: unknown {section} reference {name!r}")
    return getattr(model, section)[name]


def load_model(raw: Mapping) -> Model:
    """Build a Model from parsed JSON, resolving every reference."""
    if not isinstance(raw, dict):
        raise InputError("model file must be a JSON object")
    unknown = set(raw) - set(SECTIONS)
    if unknown:
        raise InputError(f"unknown model sections {sorted(unknown)}")
    m = Model()
    for name, obj in sorted(_section(raw, "spaces").items()):
        try:
            m.spaces[name] = FinMeasSpace.from_json(obj)
        except InputError as exc:
            raise InputError(f"space {name!r}: {exc}") from None
    for name, obj in sorted(_section(raw, "measures").items()):
        X = _ref(m, "spaces", obj.get("space") if isinstance(obj, dict) else None, f"measure {name!r}")
        try:
            m.measures[name] = Prob.from_json(X, obj)
        except InputError as exc:
            raise InputError(f"measure {name!r}: {exc}") from None
    for name, obj in sorted(_section(raw, "kernels").items()):
        if not isinstance(obj, dict):
            raise InputError(f"kernel {name!r} must be an object")
        dom = _ref(m, "spaces", obj.get("dom"), f"kernel {name!r}")
        cod = _ref(m, "spaces", obj.get("cod"), f"kernel {name!r}")
        try:
            m.kernels[name] = Kernel.from_json(dom, cod, obj)
        except (InputError, KeyError) as exc:
            raise InputError(f"kernel {name!r}: {exc}") from None
    for name, obj in sorted(_section(raw, "maps").items()):
        dom = _ref(m, "spaces", obj.get("dom"), f"map {name!r}")
        cod = _ref(m, "spaces", obj.get("cod"), f"map {name!r}")
        try:
            m.maps[name] = MeasurableMap(dom, cod, obj.get("graph", {}))
        except InputError as exc:
            raise InputError(f"map {name!r}: {exc}") from None
    for name, obj in sorted(_section(raw, "convex").items()):
        try:
            A = space_from_json(obj)
        except (InputError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"convex space {name!r}: {exc}") from None
        if hasattr(A, "name"):
            A.name = name
        m.convex[name] = A
    for name, obj in sorted(_section(raw, "affine").items()):
        m.affine[name] = _affine_from_json(m, name, obj)
    for name, obj in sorted(_section(raw, "convex_measures").items()):
        A = _ref(m, "convex", obj.get("convex"), f"convex measure {name!r}")
        try:
            support = [(parse_rational(w), element_from_json(A, e)) for w, e in obj["support"]]
        except (InputError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"convex measure {name!r}: {exc}") from None
        m.convex_measures[name] = ConvexMeasure(obj["convex"], support)
    for name, obj in sorted(_section(raw, "algebras").items()):
        h = obj.get("h")
        if isinstance(h, dict) and "convex" in h:
            _ref(m, "convex", h["convex"], f"algebra {name!r}")
            m.algebras[name] = AlgebraSpec(convex=h["convex"])
        elif isinstance(h, dict):
            _ref(m, "spaces", obj.get("space"), f"algebra {name!r}")
            m.algebras[name] = AlgebraSpec(space=obj["space"], table=dict(h))
        else:
            raise InputError(f"algebra {name!r} needs an 'h' object")
    return m


def _affine_from_json(m: Model, name: str, obj: Mapping) -> AffineMap:
    where = f"affine map {name!r}"
    dom: ConvexSpace = _ref(m, "convex", obj.get("dom"), where)
    cod: ConvexSpace = _ref(m, "convex", obj.get("cod"), where)
    body = obj.get("body")
    try:
        if body == "table":
            graph = {k: element_from_json(cod, v) for k, v in obj["graph"].items()}
            return table_map(dom, cod, graph, name=name)
        if body == "linear":
            matrix = [[parse_rational(c) for c in row] for row in obj["matrix"]]
            offset = [parse_rational(c) for c in obj["offset"]]
            return AffineMap(dom, cod, "linear", (matrix, offset), name=name)
        if body == "path":
            a1, a2 = (element_from_json(cod, e) for e in obj["endpoints"])
            return path(cod, a1, a2)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None
    raise InputError(f"{where}: unsupported body {body!r}")


def read_model(path_: str | Path) -> Model:
    try:
        text = Path(path_).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path_}: {exc.strerror}") from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path_}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return load_model(raw)


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indent, trailing LF."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_output(obj: Any, out: str | None) -> str:
    text = canonical_json(obj)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
