# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backtracking core for nowhere-zero flow search.

Behaviourally identical to signedflow._kernel_py.search (same node counts,
same witnesses); see that module for the contract.
"""

from libc.stdlib cimport malloc, free

BACKEND_NAME = "cython"


cdef inline long long _llabs(long long x):
    return -x if x < 0 else x


def search(n_vertices, va, ca, vb, cb, positive_only, fixed, k, node_limit):
    cdef int m = len(va)
    if m == 0:
        return 1, [], 0
    cdef int n = n_vertices
    cdef int span = k - 1
    cdef long long limit_nodes = node_limit

    cdef int *c_va = <int *> malloc(m * sizeof(int))
    cdef int *c_ca = <int *> malloc(m * sizeof(int))
    cdef int *c_vb = <int *> malloc(m * sizeof(int))
    cdef int *c_cb = <int *> malloc(m * sizeof(int))
    cdef int *c_pos = <int *> malloc(m * sizeof(int))
    cdef int *c_fix = <int *> malloc(m * sizeof(int))
    cdef int *c_val = <int *> malloc(m * sizeof(int))
    cdef int *c_ptr = <int *> malloc(m * sizeof(int))
    cdef long long *vsum = <long long *> malloc(n * sizeof(long long))
    cdef int *rem = <int *> malloc(n * sizeof(int))
    cdef int *wrem = <int *> malloc(n * sizeof(int))
    if (c_va == NULL or c_ca == NULL or c_vb == NULL or c_cb == NULL or
            c_pos == NULL or c_fix == NULL or c_val == NULL or c_ptr == NULL or
            vsum == NULL or rem == NULL or wrem == NULL):
        raise MemoryError()

    cdef int i, v, w
    cdef long long nodes = 0
    cdef int pos = 0
    cdef int ci, dsize, x, mag
    cdef bint placed, ok
    cdef long long s
    cdef int r

    try:
        for i in range(n):
            vsum[i] = 0
            rem[i] = 0
            wrem[i] = 0
        for i in range(m):
            c_va[i] = va[i]
            c_ca[i] = ca[i]
            c_vb[i] = vb[i]
            c_cb[i] = cb[i]
            c_pos[i] = positive_only[i]
            c_fix[i] = fixed[i]
            c_ptr[i] = 0
            rem[c_va[i]] += 1
            wrem[c_va[i]] += c_ca[i] if c_ca[i] > 0 else -c_ca[i]
            if c_vb[i] >= 0:
                rem[c_vb[i]] += 1
                wrem[c_vb[i]] += c_cb[i] if c_cb[i] > 0 else -c_cb[i]

        while True:
            if pos == m:
                return 1, [c_val[i] for i in range(m)], nodes
            placed = False
            ci = c_ptr[pos]
            if c_fix[pos] != 0:
                dsize = 1
            elif c_pos[pos]:
                dsize = span
            else:
                dsize = 2 * span
            while ci < dsize:
                if c_fix[pos] != 0:
                    x = c_fix[pos]
                elif c_pos[pos]:
                    x = ci + 1
                else:
                    mag = ci // 2 + 1
                    x = mag if ci % 2 == 0 else -mag
                nodes += 1
                if limit_nodes and nodes > limit_nodes:
                    return -1, None, nodes

                # apply with rollback
                v = c_va[pos]
                vsum[v] += c_ca[pos] * x
                rem[v] -= 1
                wrem[v] -= c_ca[pos] if c_ca[pos] > 0 else -c_ca[pos]
                s = vsum[v]
                r = rem[v]
                ok = True
                if r == 0:
                    ok = s == 0
                else:
                    if s > <long long> wrem[v] * span or -s > <long long> wrem[v] * span:
                        ok = False
                    elif r == 1:
                        if s == 0:
                            ok = False
                        elif wrem[v] == 2 and s % 2 != 0:
                            ok = False
                w = c_vb[pos]
                if w >= 0:
                    vsum[w] += c_cb[pos] * x
                    rem[w] -= 1
                    wrem[w] -= c_cb[pos] if c_cb[pos] > 0 else -c_cb[pos]
                    if ok:
                        s = vsum[w]
                        r = rem[w]
                        if r == 0:
                            ok = s == 0
                        else:
                            if s > <long long> wrem[w] * span or -s > <long long> wrem[w] * span:
                                ok = False
                            elif r == 1:
                                if s == 0:
                                    ok = False
                                elif wrem[w] == 2 and s % 2 != 0:
                                    ok = False
                if ok:
                    c_val[pos] = x
                    c_ptr[pos] = ci + 1
                    pos += 1
                    if pos < m:
                        c_ptr[pos] = 0
                    placed = True
                    break
                # rollback
                vsum[v] -= c_ca[pos] * x
                rem[v] += 1
                wrem[v] += c_ca[pos] if c_ca[pos] > 0 else -c_ca[pos]
                if w >= 0:
                    vsum[w] -= c_cb[pos] * x
                    rem[w] += 1
                    wrem[w] += c_cb[pos] if c_cb[pos] > 0 else -c_cb[pos]
                ci += 1
            if placed:
                continue
            pos -= 1
            if pos < 0:
                return 0, None, nodes
            x = c_val[pos]
            v = c_va[pos]
            vsum[v] -= c_ca[pos] * x
            rem[v] += 1
            wrem[v] += c_ca[pos] if c_ca[pos] > 0 else -c_ca[pos]
            w = c_vb[pos]
            if w >= 0:
                vsum[w] -= c_cb[pos] * x
                rem[w] += 1
                wrem[w] += c_cb[pos] if c_cb[pos] > 0 else -c_cb[pos]
    finally:
        free(c_va); free(c_ca); free(c_vb); free(c_cb)
        free(c_pos); free(c_fix); free(c_val); free(c_ptr)
        free(vsum); free(rem); free(wrem)
