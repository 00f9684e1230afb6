import itertools

import pytest
from hypothesis import given, settings, strategies as st

from girylab import _kernels_py, kernels

try:
    from girylab import _kernels
except ImportError:  # extension not built
    _kernels = None

BACKENDS = [_kernels_py] + ([_kernels] if _kernels is not None else [])


def brute_measurable(dom_block, cod_block, n_cod):
    n = len(dom_block)
    return [
        g
        for g in itertools.product(range(n_cod), repeat=n)
        if all(cod_block[g[i]] == cod_block[g[j]] for i in range(n) for j in range(n) if dom_block[i] == dom_block[j])
    ]


def brute_refine(n, generators):
    sig = [tuple(p in set(g) for g in generators) for p in range(n)]
    first = {}
    return [first.setdefault(s, len(first)) for s in sig]


@pytest.mark.parametrize("impl", BACKENDS)
@given(
    dom=st.lists(st.integers(0, 2), min_size=0, max_size=4),
    cod=st.lists(st.integers(0, 2), min_size=1, max_size=4),
)
@settings(max_examples=60, deadline=None)
def test_measurable_graphs_match_brute_force(impl, dom, cod):
    assert impl.measurable_graphs(dom, cod, len(cod)) == brute_measurable(dom, cod, len(cod))


@pytest.mark.parametrize("impl", BACKENDS)
@given(
    n=st.integers(0, 8),
    gens=st.lists(st.lists(st.integers(0, 7)), max_size=5),
)
@settings(max_examples=80, deadline=None)
def test_refine_partition_matches_signatures(impl, n, gens):
    gens = [[p for p in g if p < n] for g in gens]
    assert list(impl.refine_partition(n, gens)) == brute_refine(n, gens)


def test_affine_graphs_backends_agree():
    from girylab.convex import CANONICAL_ALPHAS, Semilattice, _comb_table

    a, b = Semilattice.chain(4), Semilattice.chain(3)
    ea, _, ta = _comb_table(a, CANONICAL_ALPHAS)
    eb, _, tb = _comb_table(b, CANONICAL_ALPHAS)
    k = len(CANONICAL_ALPHAS)
    results = [impl.affine_graphs(ta, tb, len(ea), len(eb), k) for impl in BACKENDS]
    assert all(r == results[0] for r in results)
    # maps between chains are affine iff monotone: C(4 + 3 - 1, 4) = 15
    assert len(results[0]) == 15


def test_backend_selection(monkeypatch):
    assert kernels.BACKEND in ("cython", "python")
    if _kernels is not None:
        assert kernels.BACKEND == "cython"


def test_max_enum_env(monkeypatch):
    monkeypatch.setenv("GIRYLAB_MAX_ENUM", "17")
    assert kernels.max_enum() == 17
    monkeypatch.delenv("GIRYLAB_MAX_ENUM")
    assert kernels.max_enum() == kernels.DEFAULT_MAX_ENUM
