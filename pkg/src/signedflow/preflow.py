"""Mod-3 preflow construction: parity subdivision, per-cycle signature
normalization, the single-cycle boundary solver, and the reverse-order
preflow builder.

A preflow has nonzero boundary exactly at the degree-1 and degree-2
vertices; here those are precisely the subdivision vertices introduced on
negative special and even-length negative ordinary cycles.  Zero values land
only on special cycles, positive cycles, or the fish distinguished edge."""

from __future__ import annotations

import dataclasses

from signedflow.select import (
    FISH,
    ORDINARY,
    POSITIVE_KIND,
    SPECIAL,
    CycleList,
    CycleRecord,
)
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    InvariantViolation,
    SignedGraph,
    bridges,
    canonical_orientation,
    end_coefficient,
    find_switching_between,
    is_balanced,
    subdivide_edge,
    switch_signature,
)
from signedflow.structure import Cycle, make_cycle, subgraph_from_edges


@dataclasses.dataclass
class Subdivision:
    record_index: int
    original_edge: int
    new_vertex: int
    new_edge: int

    def trace_line(self):
        return (f"subdiv {self.record_index} {self.original_edge} "
                f"{self.new_vertex} {self.new_edge}")


def subdivide_for_parity(g: SignedGraph, cl: CycleList):
    """Subdivide the lowest-id edge of every negative special cycle and every
    even-length negative ordinary cycle.  Afterwards all negative ordinary
    cycles have odd length and every special cycle owns one degree-2 vertex."""
    g_star = g.copy()
    new_records = []
    subs = []
    for idx, rec in enumerate(cl.records):
        needs = rec.kind == SPECIAL or (rec.kind == ORDINARY and rec.even_length())
        if not needs:
            new_records.append(CycleRecord(rec.kind, rec.vertices, rec.edges,
                                           rec.step_tag, rec.fish))
            continue
        target = min(rec.edges)
        pos = rec.edges.index(target)
        a = rec.vertices[pos]
        old = g_star.edges[target]
        g_star, _, x, (e1, e2) = subdivide_edge(g_star, None, target)
        # e1 keeps the id and the (u, x) slot order; align the cycle walk
        verts = list(rec.vertices)
        edges = list(rec.edges)
        verts.insert(pos + 1, x)
        edges[pos:pos + 1] = [e1, e2] if old.u == a else [e2, e1]
        new_records.append(CycleRecord(rec.kind, tuple(verts), tuple(edges),
                                       rec.step_tag, rec.fish))
        subs.append(Subdivision(idx, target, x, e2))
    return g_star, CycleList(new_records), subs


def normalize_cycle_signature(g_star: SignedGraph, cl_star: CycleList):
    """Re-sign each record by switching only on its own vertices: positive
    cycles all-positive, negative ordinary all-negative (odd length), special
    unchanged, fish to the single-negative-ear form.

    Returns (switched graph, list of per-record switching sets)."""
    cur = g_star
    switch_log = []
    for idx, rec in enumerate(cl_star.records):
        if rec.kind == SPECIAL or rec.is_single_vertex():
            switch_log.append(frozenset())
            continue
        if rec.kind == POSITIVE_KIND:
            targets = {e: POSITIVE for e in rec.edges}
        elif rec.kind == ORDINARY:
            targets = {e: NEGATIVE for e in rec.edges}
        else:  # fish: one negative edge on the ear
            targets = {e: POSITIVE for e in rec.edges}
            targets[min(rec.fish.path_edges)] = NEGATIVE
        sub = subgraph_from_edges(cur, rec.edges)
        want = sub.copy()
        for e, sign in targets.items():
            r = want.edges[e]
            if r.sign != sign:
                want.replace_edge(e, r.u, r.v, sign)
        switching = find_switching_between(sub, want)
        cur = switch_signature(cur, switching)
        for e, sign in targets.items():
            if cur.edges[e].sign != sign:
                raise InvariantViolation(f"record {idx}: normalization failed at edge {e}")
        switch_log.append(frozenset(switching))
    return cur, switch_log


def solve_cycle_boundary(g: SignedGraph, cycle: Cycle, b: dict):
    """tau: E(cycle) -> Z3 with boundary b, when solvable.

    Solvable for every b on a negative cycle; on an all-positive-signed walk
    exactly when the values of b sum to zero.  Propagates an affine expression
    in the first edge value around the cycle and solves the closing equation."""
    o = canonical_orientation(g)
    n = len(cycle.edges)
    coef = []
    for i in range(n):
        v = cycle.vertices[i]
        e_in = cycle.edges[(i - 1) % n]
        e_out = cycle.edges[i]
        if n == 1:
            c = end_coefficient(g.edges[e_out], o, v)
            coef.append((c, c))
            break
        rec_in, rec_out = g.edges[e_in], g.edges[e_out]
        ci = _coef_single(rec_in, o, v, other=cycle.vertices[(i - 1) % n])
        co = _coef_single(rec_out, o, v, other=cycle.vertices[(i + 1) % n])
        coef.append((ci, co))
    if n == 1:
        v = cycle.vertices[0]
        c = coef[0][0]  # both ends at v
        total = c % 3
        want = b.get(v, 0) % 3
        if total == 0:
            return {cycle.edges[0]: 0} if want == 0 else None
        t = (want * pow(total, -1, 3)) % 3
        return {cycle.edges[0]: t}
    # tau_i = alpha_i + beta_i * t, with t the value on edges[0]
    alpha, beta = [0], [1]
    for i in range(1, n):
        v = cycle.vertices[i]
        ci, co = coef[i]
        inv = pow(co % 3 or 1, -1, 3) if co % 3 else None
        if co % 3 == 0:
            raise InvariantViolation("degenerate cycle coefficient")
        prev_a, prev_b = alpha[-1], beta[-1]
        want = b.get(v, 0) % 3
        alpha.append(((want - ci * prev_a) * inv) % 3)
        beta.append(((-ci * prev_b) * inv) % 3)
    v0 = cycle.vertices[0]
    c_last, c_first = coef[0]
    lhs_b = (c_first + c_last * beta[-1]) % 3
    lhs_a = (c_last * alpha[-1]) % 3
    want = b.get(v0, 0) % 3
    if lhs_b == 0:
        if lhs_a != want:
            return None
        t = 0
    else:
        t = ((want - lhs_a) * pow(lhs_b, -1, 3)) % 3
    tau = {}
    for i in range(n):
        tau[cycle.edges[i]] = (alpha[i] + beta[i] * t) % 3
    return tau


def _coef_single(rec, o, v, other):
    """Direction coefficient of the end of rec at v along a cycle walk; for a
    digon both ends matter individually, so pick the slot facing ``other``."""
    du, dv = o[rec.id]
    if rec.u == v and rec.v == other:
        return du
    if rec.v == v and rec.u == other:
        return dv
    raise InvariantViolation(f"edge {rec.id} does not join {v} and {other}")


@dataclasses.dataclass
class Z3Preflow:
    graph: SignedGraph
    values: dict
    negation_events: list

    def zero_set(self):
        return sorted(e for e, val in self.values.items() if val % 3 == 0)

    def trace_lines(self):
        return [f"phi {e} {self.values[e] % 3}" for e in sorted(self.values)]


def _solve_nonzero_values(g, o, edge_vars, base_contrib, constrained):
    """Assign values in {1,2} to edge_vars so that every vertex in
    ``constrained`` ends with boundary 0 mod 3 (given fixed contributions).

    Deterministic DFS with last-edge forcing; returns dict or None."""
    edge_vars = list(edge_vars)
    per_vertex = {v: [] for v in constrained}
    for e in edge_vars:
        rec = g.edges[e]
        for v in set(rec.ends):
            if v in per_vertex:
                c = end_coefficient(rec, o, v)
                if c:
                    per_vertex[v].append((e, c))
    remaining = {v: len(lst) for v, lst in per_vertex.items()}
    sums = {v: base_contrib.get(v, 0) % 3 for v in constrained}
    # connectivity-first variable order for stronger forcing
    order = []
    placed = set()
    touched = set()
    pool = sorted(edge_vars)
    while pool:
        best = None
        key = None
        for e in pool:
            score = sum(1 for v in set(g.edges[e].ends) if v in touched)
            k = (-score, e)
            if key is None or k < key:
                best, key = e, k
        pool.remove(best)
        order.append(best)
        touched.update(g.edges[best].ends)
    assign = {}

    def dfs(i):
        if i == len(order):
            return all(sums[v] % 3 == 0 for v in constrained)
        e = order[i]
        rec = g.edges[e]
        tv = [(v, end_coefficient(rec, o, v)) for v in set(rec.ends) if v in per_vertex]
        for val in (1, 2):
            ok = True
            for v, c in tv:
                sums[v] = (sums[v] + c * val) % 3
                remaining[v] -= 1
            for v, c in tv:
                if remaining[v] == 0 and sums[v] % 3 != 0:
                    ok = False
            if ok and dfs(i + 1):
                assign[e] = val
                return True
            for v, c in tv:
                sums[v] = (sums[v] - c * val) % 3
                remaining[v] += 1
        return False

    if not dfs(0):
        return None
    return assign


def build_preflow(g_n: SignedGraph, cl_star: CycleList, subs) -> Z3Preflow:
    """Mod-3 preflow built backwards through the cycle list.

    Case split per record kind; the resulting assignment has nonzero boundary
    exactly at the subdivision vertices, its zero set is a matching avoiding
    negative ordinary cycles."""
    o = canonical_orientation(g_n)
    x_of = {s.record_index: s.new_vertex for s in subs}
    records = cl_star.records
    t = len(records)
    phi: dict[int, int] = {}
    negation_events = []

    vset_of = [set(r.vertices) for r in records]
    owner = {}
    for i, vs in enumerate(vset_of):
        for v in vs:
            owner[v] = i

    def classify(k):
        vs = vset_of[k]
        cyc = set(records[k].edges)
        chords, e_up, f_down = [], [], []
        for eid in sorted(g_n.edges):
            rec = g_n.edges[eid]
            inside = (rec.u in vs) + (rec.v in vs)
            if inside == 2 and eid not in cyc:
                chords.append(eid)
            elif inside == 1:
                other = rec.u if rec.u not in vs else rec.v
                (e_up if owner[other] > k else f_down).append(eid)
        return chords, e_up, f_down

    def contrib(v, eids):
        return sum(end_coefficient(g_n.edges[e], o, v) * phi[e] for e in eids
                   if e in phi and v in g_n.edges[e].ends) % 3

    for k in range(t - 1, -1, -1):
        rec = records[k]
        chords, e_up, f_down = classify(k)
        if rec.kind == FISH:
            _case_fish(g_n, o, rec, f_down, e_up, phi)
        elif rec.kind == ORDINARY:
            _case_ordinary(g_n, o, rec, chords, e_up, f_down, phi, x_of.get(k))
        elif rec.kind == SPECIAL:
            _case_special(g_n, o, rec, chords, e_up, f_down, phi, x_of.get(k))
        else:
            _case_positive(g_n, o, rec, chords, e_up, f_down, phi, k, records,
                           negation_events)
    if set(phi) != set(g_n.edges):
        raise InvariantViolation("preflow domain does not cover the edge set")
    return Z3Preflow(g_n, {e: v % 3 for e, v in phi.items()}, negation_events)


def _assigned_contrib(g, o, phi, v):
    total = 0
    for eid in g.incident(v):
        if eid in phi:
            total += end_coefficient(g.edges[eid], o, v) * phi[eid]
    return total % 3


def _case_fish(g, o, rec, f_down, e_up, phi):
    if e_up:
        raise InvariantViolation("fish record is not last in processing order")
    if any(g.degree(v) != 3 for v in rec.vertices):
        raise InvariantViolation("fish vertices must all have degree 3")
    dist = rec.fish.distinguished_edge
    variables = [e for e in rec.edges if e != dist] + list(f_down)
    phi[dist] = 0
    sol = _solve_nonzero_values(g, o, variables, {}, set(rec.vertices))
    if sol is None:
        raise InvariantViolation("fish preflow case is infeasible")
    phi.update(sol)


def _case_ordinary(g, o, rec, chords, e_up, f_down, phi, x):
    if chords:
        raise InvariantViolation("negative ordinary cycle has a chord")
    if any(g.edges[e].sign != NEGATIVE for e in rec.edges):
        raise InvariantViolation("ordinary cycle not normalized to all-negative")
    up_vertices = set()
    for e in e_up:
        r = g.edges[e]
        up_vertices.add(r.u if r.u in rec.vertices else r.v)
    if len(up_vertices) > 1:
        raise InvariantViolation("ordinary cycle touches later cycles at 2+ vertices")
    # all-negative canonical edges point away at both ends: each cycle vertex
    # sees +val twice, so its cycle boundary is -val mod 3
    if up_vertices:
        w = next(iter(up_vertices))
        tcontr = _assigned_contrib(g, o, phi, w)
        if tcontr % 3 == 0:
            raise InvariantViolation("later-cycle edge carries zero into ordinary cycle")
        val = tcontr % 3
    else:
        val = 1
    for e in rec.edges:
        phi[e] = val
    for f in f_down:
        r = g.edges[f]
        u = r.u if r.u in rec.vertices else r.v
        if x is not None and u == x:
            raise InvariantViolation("subdivision vertex cannot carry cross edges")
        need = (-_assigned_contrib(g, o, phi, u)) % 3
        c = end_coefficient(r, o, u)
        if need == 0:
            raise InvariantViolation("ordinary cycle forces a zero cross value")
        phi[f] = (need * pow(c % 3, -1, 3)) % 3
    _check_boundaries(g, o, rec, phi, x)


def _case_special(g, o, rec, chords, e_up, f_down, phi, x):
    if x is None:
        raise InvariantViolation("special cycle lacks its subdivision vertex")
    for e in chords + list(f_down):
        phi[e] = 1
    b = {}
    for v in rec.vertices:
        if v == x:
            b[v] = 1
        else:
            b[v] = (-_assigned_contrib(g, o, phi, v)) % 3
    cyc = make_cycle(g, rec.vertices, rec.edges)
    if cyc.sign(g) != NEGATIVE:
        raise InvariantViolation("special record is not a negative cycle")
    tau = solve_cycle_boundary(g, cyc, b)
    if tau is None:
        raise InvariantViolation("special cycle boundary is unsolvable")
    phi.update(tau)
    _check_boundaries(g, o, rec, phi, x)


def _case_positive(g, o, rec, chords, e_up, f_down, phi, k, records, events):
    vs = set(rec.vertices)
    for e in chords:
        phi[e] = 1
    if rec.is_single_vertex():
        if len(f_down) < 2:
            raise InvariantViolation("single-vertex record with fewer than 2 down edges")
        v = rec.vertices[0]
        sol = _solve_nonzero_values(g, o, f_down, {v: _assigned_contrib(g, o, phi, v)}, {v})
        if sol is None:
            raise InvariantViolation("single-vertex boundary unsolvable")
        phi.update(sol)
        return
    if not f_down:
        raise InvariantViolation("positive cycle with no edge to earlier cycles")

    def cycle_sum():
        return sum(_assigned_contrib(g, o, phi, v) for v in vs) % 3

    if len(f_down) >= 2:
        if not _assign_fdown_zero_sum(g, o, f_down, phi, cycle_sum):
            raise InvariantViolation("down-edge assignment with zero total failed")
    else:
        f = f_down[0]
        s = cycle_sum()
        if s == 0:
            _negate_component(g, o, rec, e_up, phi, events, k)
            s = cycle_sum()
            if s == 0:
                raise InvariantViolation("component negation left the sum zero")
        r = g.edges[f]
        u = r.u if r.u in vs else r.v
        c = end_coefficient(r, o, u)
        val = ((-s) * pow(c % 3, -1, 3)) % 3
        if val == 0:
            raise InvariantViolation("single down edge forced to zero")
        phi[f] = val
    b = {v: (-_assigned_contrib(g, o, phi, v)) % 3 for v in rec.vertices}
    if sum(b.values()) % 3 != 0:
        raise InvariantViolation("positive cycle boundary sum is nonzero")
    cyc = make_cycle(g, rec.vertices, rec.edges)
    tau = solve_cycle_boundary(g, cyc, b)
    if tau is None:
        raise InvariantViolation("positive cycle boundary unsolvable")
    phi.update(tau)
    _check_boundaries(g, o, rec, phi, None)


def _assign_fdown_zero_sum(g, o, f_down, phi, cycle_sum) -> bool:
    """Values in {1,2} on the down edges making the record's boundary sum 0."""

    def dfs(i):
        if i == len(f_down):
            return cycle_sum() == 0
        for val in (1, 2):
            phi[f_down[i]] = val
            if dfs(i + 1):
                return True
        del phi[f_down[i]]
        return False

    return dfs(0)


def _negate_component(g, o, rec, e_up, phi, events, k):
    """Flip phi on every assigned edge with an end in the component across a
    cut edge leaving the record through a later cycle; makes the running
    boundary sum nonzero without breaking finished vertices."""
    vs = set(rec.vertices)
    later_vertices = set()
    for eid in phi:
        for v in g.edges[eid].ends:
            if v not in vs:
                later_vertices.add(v)
    # the graph under consideration: this record plus all later records
    sub = g.induced_subgraph(vs | later_vertices)
    sub_bridges = set(bridges(sub))
    cut_edge = None
    y = None
    for e in sorted(e_up):
        if e in sub_bridges:
            r = g.edges[e]
            y = r.u if r.u in vs else r.v
            cut_edge = e
            break
    if cut_edge is None:
        raise InvariantViolation("no cut edge available for the negation step")
    other = g.edges[cut_edge].other_end(y)
    comp = None
    for c in sub.induced_subgraph(sub.vertices - {y}).components():
        if other in c:
            comp = c
            break
    flipped = []
    for eid in sorted(phi):
        if set(g.edges[eid].ends) & comp and phi[eid] % 3 != 0:
            phi[eid] = (-phi[eid]) % 3
            flipped.append(eid)
    events.append((k, y, cut_edge, tuple(sorted(comp)), tuple(flipped)))


def _check_boundaries(g, o, rec, phi, x):
    for v in rec.vertices:
        incident = g.incident(v)
        if any(e not in phi for e in incident):
            continue  # settled when the earlier cycle is processed
        b = _assigned_contrib(g, o, phi, v)
        if v == x:
            if b == 0:
                raise InvariantViolation(f"subdivision vertex {v} has zero boundary")
        elif g.degree(v) == 3 and b != 0:
            raise InvariantViolation(f"degree-3 vertex {v} has boundary {b}")


def audit_preflow(g_n: SignedGraph, cl_star: CycleList, subs, pf: Z3Preflow):
    """Assert the preflow laws: boundary nonzero exactly at degree-2 vertices,
    zero set a matching confined to special cycles, positive cycles, or the
    fish distinguished edge."""
    o = canonical_orientation(g_n)
    phi = pf.values
    sub_vertices = {s.new_vertex for s in subs}
    for v in sorted(g_n.vertices):
        b = sum(end_coefficient(g_n.edges[e], o, v) * phi[e] for e in g_n.incident(v)) % 3
        deg = g_n.degree(v)
        if deg in (1, 2):
            if b == 0:
                raise InvariantViolation(f"degree-{deg} vertex {v} has zero boundary")
        elif b != 0:
            raise InvariantViolation(f"degree-{deg} vertex {v} has boundary {b}")
    zero = pf.zero_set()
    ends = set()
    for e in zero:
        for v in g_n.edges[e].ends:
            if v in ends:
                raise InvariantViolation("zero set is not a matching")
            ends.add(v)
    allowed = set()
    for rec in cl_star.records:
        if rec.kind in (SPECIAL, POSITIVE_KIND):
            allowed.update(rec.edges)
        elif rec.kind == FISH:
            allowed.add(rec.fish.distinguished_edge)
    for e in zero:
        if e not in allowed:
            raise InvariantViolation(f"zero value on forbidden edge {e}")
    return True
