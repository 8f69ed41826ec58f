"""Pure-Python backtracking core for nowhere-zero flow search.

This is the fallback twin of the compiled extension ``signedflow._kernel``;
both expose the same ``search`` function and must stay behaviourally
identical (same node counts, same witnesses).  All pre-processing (edge
ordering, symmetry flags, loop stripping) lives in :mod:`signedflow.kernel`.
"""

from __future__ import annotations

BACKEND_NAME = "python"


def search(n_vertices, va, ca, vb, cb, positive_only, fixed, k, node_limit):
    """Exhaustive search for values x_i in {+-1..+-(k-1)} with zero vertex sums.

    Edge i contributes ``ca[i]*x_i`` at vertex ``va[i]`` and, when
    ``vb[i] >= 0``, ``cb[i]*x_i`` at ``vb[i]``.  ``positive_only[i]`` restricts
    edge i to positive values (sign-symmetry breaking); ``fixed[i] != 0`` pins
    its value.  Returns ``(status, values, nodes)`` with status 1 (found),
    0 (exhausted: no solution), -1 (node budget hit).
    """
    m = len(va)
    if m == 0:
        return 1, [], 0
    vsum = [0] * n_vertices
    rem = [0] * n_vertices
    wrem = [0] * n_vertices
    for i in range(m):
        rem[va[i]] += 1
        wrem[va[i]] += abs(ca[i])
        if vb[i] >= 0:
            rem[vb[i]] += 1
            wrem[vb[i]] += abs(cb[i])

    span = k - 1
    values = [0] * m
    ptr = [0] * m
    nodes = 0
    pos = 0

    def domain_size(i):
        if fixed[i]:
            return 1
        return span if positive_only[i] else 2 * span

    def candidate(i, ci):
        if fixed[i]:
            return fixed[i]
        if positive_only[i]:
            return ci + 1
        mag = ci // 2 + 1
        return mag if ci % 2 == 0 else -mag

    def vertex_ok(v):
        r = rem[v]
        s = vsum[v]
        if r == 0:
            return s == 0
        if s > wrem[v] * span or -s > wrem[v] * span:
            return False
        if r == 1:
            if s == 0:
                return False
            if wrem[v] == 2 and s % 2 != 0:
                return False
        return True

    def apply(i, x):
        v = va[i]
        vsum[v] += ca[i] * x
        rem[v] -= 1
        wrem[v] -= abs(ca[i])
        ok = vertex_ok(v)
        w = vb[i]
        if w >= 0:
            vsum[w] += cb[i] * x
            rem[w] -= 1
            wrem[w] -= abs(cb[i])
            if ok:
                ok = vertex_ok(w)
        if ok:
            return True
        undo(i, x)
        return False

    def undo(i, x):
        v = va[i]
        vsum[v] -= ca[i] * x
        rem[v] += 1
        wrem[v] += abs(ca[i])
        w = vb[i]
        if w >= 0:
            vsum[w] -= cb[i] * x
            rem[w] += 1
            wrem[w] += abs(cb[i])

    while True:
        if pos == m:
            return 1, list(values), nodes
        placed = False
        ci = ptr[pos]
        limit = domain_size(pos)
        while ci < limit:
            x = candidate(pos, ci)
            nodes += 1
            if node_limit and nodes > node_limit:
                return -1, None, nodes
            if apply(pos, x):
                values[pos] = x
                ptr[pos] = ci + 1
                pos += 1
                if pos < m:
                    ptr[pos] = 0
                placed = True
                break
            ci += 1
        if placed:
            continue
        pos -= 1
        if pos < 0:
            return 0, None, nodes
        undo(pos, values[pos])
