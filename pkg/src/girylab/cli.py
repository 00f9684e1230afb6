"""``girylab`` command line: run check suites, compose kernels, barycenters and
separation quotients on JSON model files.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import os
import sys
from importlib import resources

from . import kernels
from .errors import GiryLabError, InputError, ResourceError
from .factorization import counit
from .finmeas import separate
from .giry import Prob, kleisli_compose
from .io import read_model, write_output
from .convex import element_to_json
from .sigma import element_id, presentation
from .suites import SUITES, list_suites, run_suites

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def demo_path() -> str:
    """Path of the bundled demo model."""
    return str(resources.files("girylab") / "data" / "demo.json")


def _resolve(path: str) -> str:
    return demo_path() if path == "demo" else path


def cmd_check(args) -> int:
    if args.list_suites:
        _emit({"suites": list_suites()}, args.out)
        return EXIT_OK
    if args.file is None:
        raise InputError("check needs a model file (or 'demo')")
    names = list(SUITES) if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise InputError(f"unknown suite(s) {unknown}; see --list-suites")
    model = read_model(_resolve(args.file))
    report = run_suites(model, names, seed=args.seed, timings=args.timings)
    _emit(report, args.out)
    return EXIT_OK if report["status"] == "pass" else EXIT_FAIL


def cmd_compose(args) -> int:
    model = read_model(_resolve(args.file))
    k1, k2 = model.get("kernels", args.k1), model.get("kernels", args.k2)
    k = kleisli_compose(k1, k2)
    _emit(k.to_json(model.space_name(k.dom), model.space_name(k.cod)), args.out)
    return EXIT_OK


def cmd_barycenter(args) -> int:
    model = read_model(_resolve(args.file))
    A = model.get("convex", args.convex)
    cm = model.get("convex_measures", args.measure)
    if cm.convex != args.convex:
        raise InputError(f"measure {args.measure!r} lives on {cm.convex!r}, not {args.convex!r}")
    X, labels = presentation(A, [x for _, x in cm.support])
    weights: dict = {}
    for w, x in cm.support:
        k = X.atom_of(element_id(x))
        weights[k] = weights.get(k, 0) + w
    a = counit(A, Prob(X, weights), labels)
    _emit({"convex": args.convex, "measure": args.measure, "barycenter": element_to_json(a)}, args.out)
    return EXIT_OK


def cmd_separate(args) -> int:
    model = read_model(_resolve(args.file))
    X = model.get("spaces", args.space)
    Xs, q = separate(X)
    _emit({"space": args.space, "separated": Xs.to_json(), "q": dict(q.graph), "identity": X.is_separated}, args.out)
    return EXIT_OK


def _emit(obj, out) -> None:
    text = write_output(obj, out)
    if not out:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="girylab", description=__doc__.splitlines()[0])
    parser.add_argument("--max-enum", type=int, default=None, help="enumeration cap (also GIRYLAB_MAX_ENUM)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run check suites on a model file")
    p.add_argument("file", nargs="?", help="model JSON, or 'demo' for the bundled model")
    p.add_argument("--suite", default="all", help="suite name, comma list, or 'all'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--list-suites", action="store_true")
    p.add_argument("--timings", action="store_true", help="add per-check elapsed seconds (not reproducible)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("compose", help="Kleisli composite of two named kernels")
    p.add_argument("file")
    p.add_argument("k1")
    p.add_argument("k2")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_compose)

    p = sub.add_parser("barycenter", help="barycenter of a named measure on a convex space")
    p.add_argument("file")
    p.add_argument("convex")
    p.add_argument("measure")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_barycenter)

    p = sub.add_parser("separate", help="separation quotient of a named space")
    p.add_argument("file")
    p.add_argument("space")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_separate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max_enum",):
        value = getattr(args, name, None)
        if value is not None:
            if value < 1:
                parser.error("--max-enum must be positive")
            os.environ[kernels.MAX_ENUM_ENV] = str(value)
    try:
        return args.func(args)
    except (InputError, ResourceError) as exc:
        print(f"girylab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GiryLabError as exc:
        print(f"girylab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
