"""Compare the compiled and pure-Python enumeration kernels.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import random
import timeit

from girylab import _kernels_py
from girylab.convex import CANONICAL_ALPHAS, Semilattice, _comb_table

try:
    from girylab import _kernels
except ImportError:
    _kernels = None


def cases():
    """(label, function name, args) triples sized to take a noticeable time."""
    big = Semilattice.chain(7)
    two = Semilattice.chain(2)
    c4 = Semilattice.chain(4)
    ea, _, ta = _comb_table(big, CANONICAL_ALPHAS)
    eb, _, tb = _comb_table(c4, CANONICAL_ALPHAS)
    e2, _, t2 = _comb_table(two, CANONICAL_ALPHAS)
    k = len(CANONICAL_ALPHAS)
    rng = random.Random(0)
    gens = [[p for p in range(400) if rng.random() < 0.5] for _ in range(60)]
    dom = [i // 2 for i in range(8)]
    return [
        ("affine_graphs 7-chain -> 4-chain", "affine_graphs", (ta, tb, len(ea), len(eb), k)),
        ("affine_graphs 7-chain -> 2", "affine_graphs", (ta, t2, len(ea), len(e2), k)),
        ("measurable_graphs 8 -> 6 points", "measurable_graphs", (dom, list(range(6)), 6)),
        ("refine_partition 400 points, 60 sets", "refine_partition", (400, gens)),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled kernels not built; only the pure-Python timings are shown")
    print(f"{'case':40s} {'python s':>10s} {'cython s':>10s} {'speedup':>8s}")
    for label, fn, fargs in cases():
        py = min(timeit.repeat(lambda: getattr(_kernels_py, fn)(*fargs), number=1, repeat=args.repeat))
        if _kernels is None:
            print(f"{label:40s} {py:10.4f} {'-':>10s} {'-':>8s}")
            continue
        assert getattr(_kernels, fn)(*fargs) == getattr(_kernels_py, fn)(*fargs), label
        cy = min(timeit.repeat(lambda: getattr(_kernels, fn)(*fargs), number=1, repeat=args.repeat))
        print(f"{label:40s} {py:10.4f} {cy:10.4f} {py / cy:8.1f}x")


if __name__ == "__main__":
    main()
