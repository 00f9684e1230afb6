"""Pure-Python enumeration kernels (fallback for the compiled ``_kernels``).

All inputs are integer-encoded: points/elements are ``0..n-1``. Graphs are
enumerated in lexicographic order with the first coordinate most significant.
"""


def _odometer(n, base):
    g = [0] * n
    while True:
        yield g
        i = n - 1
        while i >= 0:
            g[i] += 1
            if g[i] < base:
                break
            g[i] = 0
            i -= 1
        if i < 0:
            return


def measurable_graphs(dom_block, cod_block, n_cod):
    """Functions ``range(len(dom_block)) -> range(n_cod)`` sending each
    domain block into a single codomain block."""
    n = len(dom_block)
    if n == 0:
        return [()]
    if n_cod == 0:
        return []
    # first representative of each domain block
    rep = {}
    firsts = []
    for i, b in enumerate(dom_block):
        if b in rep:
            firsts.append(rep[b])
        else:
            rep[b] = i
            firsts.append(i)
    out = []
    for g in _odometer(n, n_cod):
        for i in range(n):
            if cod_block[g[i]] != cod_block[g[firsts[i]]]:
                break
        else:
            out.append(tuple(g))
    return out


def affine_graphs(comb_a, comb_b, na, nb, k):
    """Graphs ``g: na -> nb`` with ``g[A(a,b,j)] == B(g[a],g[b],j)`` for all
    ``a, b`` and every alpha index ``j < k``.

    ``comb_a`` / ``comb_b`` are flat tables indexed ``(a * n + b) * k + j``.
    """
    if na == 0:
        return [()]
    if nb == 0:
        return []
    out = []
    for g in _odometer(na, nb):
        ok = True
        for a in range(na):
            ga = g[a]
            for b in range(na):
                base_a = (a * na + b) * k
                base_b = (ga * nb + g[b]) * k
                for j in range(k):
                    if g[comb_a[base_a + j]] != comb_b[base_b + j]:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            out.append(tuple(g))
    return out


def refine_partition(n, generators):
    """Coarsest partition of ``range(n)`` refining every generator split.

    Returns block labels numbered by first appearance.
    """
    labels = [0] * n
    for gen in generators:
        inside = [0] * n
        for p in gen:
            inside[p] = 1
        seen = {}
        for i in range(n):
            key = (labels[i], inside[i])
            if key not in seen:
                seen[key] = len(seen)
            labels[i] = seen[key]
    seen = {}
    for i in range(n):
        if labels[i] not in seen:
            seen[labels[i]] = len(seen)
        labels[i] = seen[labels[i]]
    return labels
