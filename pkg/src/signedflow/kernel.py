"""Backend selection and shared pre-processing for the flow-search kernel.

The compiled Cython core is used when available; otherwise the pure-Python
twin.  Pre-processing is shared so both backends explore identical search
trees: edges with no net boundary effect (positive loops) are stripped,
edges are ordered connectivity-first, and sign symmetry is broken on the
first free edge of every prescription-free component.
"""

from __future__ import annotations

try:
    from signedflow._kernel import search as _search, BACKEND_NAME as _backend
except ImportError:  # extension not built
    from signedflow._kernel_py import search as _search, BACKEND_NAME as _backend

from signedflow import _kernel_py

BACKEND = _backend

STATUS_YES = 1
STATUS_NO = 0
STATUS_UNKNOWN = -1


def backend_search(name: str | None):
    if name is None:
        return _search
    if name == "python":
        return _kernel_py.search
    if name == BACKEND == "cython":
        return _search
    if name == "cython":
        raise RuntimeError("compiled kernel not available")
    raise ValueError(f"unknown backend {name!r}")


def plan(edge_entries: dict, prescribed: dict | None = None):
    """Order edges and compute per-edge flags for the core search.

    ``edge_entries`` maps edge id -> list of (vertex, coefficient) with at
    most two entries and no zero coefficients.  Returns (order, free_loops,
    arrays) where ``free_loops`` are stripped zero-effect edges.
    """
    prescribed = prescribed or {}
    active = {}
    free_loops = []
    for eid in sorted(edge_entries):
        entries = [(v, c) for v, c in edge_entries[eid] if c != 0]
        if len(entries) == 2 and entries[0][0] == entries[1][0]:
            c = entries[0][1] + entries[1][1]
            entries = [(entries[0][0], c)] if c != 0 else []
        if not entries:
            free_loops.append(eid)
        else:
            active[eid] = entries

    # component labels over vertices, via the active edges
    comp = {}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for eid, entries in active.items():
        for v, _ in entries:
            comp.setdefault(v, v)
        if len(entries) == 2:
            a, b = find(entries[0][0]), find(entries[1][0])
            if a != b:
                comp[a] = b

    # connectivity-first order: prescribed edges first, then greedily the
    # edge touching the most already-touched vertices, ties by id
    order = sorted(e for e in active if e in prescribed)
    touched = set()
    for e in order:
        touched.update(v for v, _ in active[e])
    remaining = [e for e in sorted(active) if e not in prescribed]
    while remaining:
        best = None
        best_key = None
        for e in remaining:
            score = sum(1 for v, _ in active[e] if v in touched)
            key = (-score, e)
            if best_key is None or key < best_key:
                best, best_key = e, key
        order.append(best)
        remaining.remove(best)
        touched.update(v for v, _ in active[best])

    comp_has_prescription = set()
    for e in prescribed:
        if e in active:
            comp_has_prescription.add(find(active[e][0][0]))
    sym_done = set()
    positive_only = []
    for e in order:
        root = find(active[e][0][0])
        if e not in prescribed and root not in comp_has_prescription and root not in sym_done:
            positive_only.append(1)
            sym_done.add(root)
        else:
            positive_only.append(0)
    return order, free_loops, active, positive_only


def search_flow(edge_entries: dict, k: int, prescribed: dict | None = None,
                node_limit: int = 0, backend: str | None = None):
    """Search for a nowhere-zero k-flow respecting boundary coefficients.

    Returns (status, values-by-edge-id or None, nodes).  Prescribed values
    must be nonzero and within range or the search reports no immediately.
    """
    prescribed = dict(prescribed or {})
    for eid, val in prescribed.items():
        if val == 0 or abs(val) > k - 1:
            return STATUS_NO, None, 0
    order, free_loops, active, positive_only = plan(edge_entries, prescribed)

    vid = {}
    for e in order:
        for v, _ in active[e]:
            vid.setdefault(v, len(vid))
    va, ca, vb, cb, fixed = [], [], [], [], []
    for e in order:
        entries = active[e]
        va.append(vid[entries[0][0]])
        ca.append(entries[0][1])
        if len(entries) == 2:
            vb.append(vid[entries[1][0]])
            cb.append(entries[1][1])
        else:
            vb.append(-1)
            cb.append(0)
        fixed.append(prescribed.get(e, 0))

    fn = backend_search(backend)
    status, vals, nodes = fn(len(vid), va, ca, vb, cb, positive_only, fixed, k, node_limit)
    if status != STATUS_YES:
        return status, None, nodes
    flow = {e: v for e, v in zip(order, vals)}
    for e in free_loops:
        flow[e] = prescribed.get(e, 1)
    return STATUS_YES, flow, nodes
