# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled enumeration kernels; same contracts as ``_kernels_py``."""
from libc.stdlib cimport malloc, free


cdef int* _to_c(seq, Py_ssize_t n) except NULL:
    cdef int* buf = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = seq[i]
    return buf


cdef inline bint _advance(int* g, Py_ssize_t n, int base) noexcept:
    cdef Py_ssize_t i = n - 1
    while i >= 0:
        g[i] += 1
        if g[i] < base:
            return True
        g[i] = 0
        i -= 1
    return False


def measurable_graphs(dom_block, cod_block, int n_cod):
    cdef Py_ssize_t n = len(dom_block), i
    if n == 0:
        return [()]
    if n_cod == 0:
        return []
    cdef int* cb = _to_c(cod_block, len(cod_block))
    cdef int* firsts = <int*> malloc(n * sizeof(int))
    cdef int* g = <int*> malloc(n * sizeof(int))
    out = []
    rep = {}
    try:
        for i in range(n):
            b = dom_block[i]
            if b in rep:
                firsts[i] = rep[b]
            else:
                rep[b] = i
                firsts[i] = i
            g[i] = 0
        while True:
            for i in range(n):
                if cb[g[i]] != cb[g[firsts[i]]]:
                    break
            else:
                out.append(tuple([g[i] for i in range(n)]))
            if not _advance(g, n, n_cod):
                break
    finally:
        free(cb)
        free(firsts)
        free(g)
    return out


def affine_graphs(comb_a, comb_b, int na, int nb, int k):
    if na == 0:
        return [()]
    if nb == 0:
        return []
    cdef int* ca = _to_c(comb_a, len(comb_a))
    cdef int* cb = _to_c(comb_b, len(comb_b))
    cdef int* g = <int*> malloc(na * sizeof(int))
    cdef int a, b, j, base_a, base_b
    cdef bint ok
    out = []
    try:
        for a in range(na):
            g[a] = 0
        while True:
            ok = True
            for a in range(na):
                for b in range(na):
                    base_a = (a * na + b) * k
                    base_b = (g[a] * nb + g[b]) * k
                    for j in range(k):
                        if g[ca[base_a + j]] != cb[base_b + j]:
                            ok = False
                            break
                    if not ok:
                        break
                if not ok:
                    break
            if ok:
                out.append(tuple([g[a] for a in range(na)]))
            if not _advance(g, na, nb):
                break
    finally:
        free(ca)
        free(cb)
        free(g)
    return out


def refine_partition(int n, generators):
    cdef int* labels = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int* inside = <int*> malloc((n if n > 0 else 1) * sizeof(int))
    cdef int* remap = <int*> malloc((2 * n + 2) * sizeof(int))
    cdef int i, nxt, key
    try:
        for i in range(n):
            labels[i] = 0
        for gen in generators:
            for i in range(n):
                inside[i] = 0
            for p in gen:
                inside[<int> p] = 1
            for i in range(2 * n + 2):
                remap[i] = -1
            nxt = 0
            for i in range(n):
                key = 2 * labels[i] + inside[i]
                if remap[key] < 0:
                    remap[key] = nxt
                    nxt += 1
                labels[i] = remap[key]
        return [labels[i] for i in range(n)]
    finally:
        free(labels)
        free(inside)
        free(remap)
