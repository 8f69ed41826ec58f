"""Integer lift of the mod-3 preflow: auxiliary-graph gadgets, maximum
matching, the {0,+-1,+-2,+-3} preflow, the +-1 correction layer, and the
final assembly into a nowhere-zero 8-flow.

The matching certifies existence; the lift itself is a verified bounded
search over per-edge representative classes (phi=1 lifts to {1,-2}, phi=2 to
{2,-1}, zero edges to {0,+-3})."""

from __future__ import annotations

import dataclasses
from collections import deque

from signedflow.preflow import Subdivision, Z3Preflow, _coef_single
from signedflow.select import FISH, ORDINARY, POSITIVE_KIND, SPECIAL, CycleList
from signedflow.sigraph import (
    AWAY,
    NEGATIVE,
    POSITIVE,
    TOWARD,
    InvariantViolation,
    SignedGraph,
    canonical_orientation,
    edge_connectivity,
    end_coefficient,
    find_switching_between,
    reexpress_flow_after_switch,
    switch_signature,
    verify_flow,
)
from signedflow.structure import Cycle, iter_cycles, make_cycle


@dataclasses.dataclass
class AuxiliaryGraph:
    graph: SignedGraph          # unsigned structure (all edges stored positive)
    graph_z: SignedGraph        # g* switched so every zero edge is positive
    z_switch: frozenset
    phi_z: dict                 # preflow values re-expressed for graph_z
    gadget_edges: dict          # zero edge id -> gadget edge id in the aux graph
    edge_backmap: dict          # aux edge id -> ('orig', e) | ('gadget', z) | ('w', v)
    vertex_backmap: dict        # aux vertex -> ('orig', v) | ('sub', carrier edge, z)


def build_auxiliary(g_n: SignedGraph, pf: Z3Preflow) -> AuxiliaryGraph:
    """Gadget construction: one helper vertex joined to every degree-2 vertex,
    one two-subdivision gadget per zero edge, helper removed at the end.

    The zero set must be a matching; it is first made all-positive by
    switching at one end of each negative zero edge, and values are stated
    with every nonzero edge carrying 1 (reversal instead of value 2)."""
    phi = dict(pf.values)
    zero = [e for e in sorted(phi) if phi[e] % 3 == 0]
    ends_seen = set()
    for e in zero:
        for v in g_n.edges[e].ends:
            if v in ends_seen:
                raise InvariantViolation("zero set is not a matching")
            ends_seen.add(v)
    switch = set()
    for e in zero:
        rec = g_n.edges[e]
        if rec.sign == NEGATIVE:
            switch.add(min(rec.ends))
    g_z = switch_signature(g_n, switch)
    phi_z = reexpress_flow_after_switch(g_n, phi, switch, mod=3)
    for e in zero:
        if g_z.edges[e].sign != POSITIVE:
            raise InvariantViolation("zero edge still negative after switching")

    # orientation with every value in {0,1}: value-2 edges are reversed
    o = canonical_orientation(g_z)
    phi01 = {}
    for e, val in phi_z.items():
        if val % 3 == 2:
            du, dv = o[e]
            o[e] = (-du, -dv)
            phi01[e] = 1
        else:
            phi01[e] = val % 3

    aux = g_z.copy()
    vertex_backmap = {v: ("orig", v) for v in aux.vertices}
    edge_backmap = {e: ("orig", e) for e in aux.edges}
    w = aux.new_vertex()
    vertex_backmap[w] = ("w", None)
    for v in sorted(g_z.vertices):
        if g_z.degree(v) != 2:
            continue
        b = sum(end_coefficient(g_z.edges[e], o, v) * phi01[e]
                for e in g_z.incident(v)) % 3
        if b == 0:
            raise InvariantViolation(f"degree-2 vertex {v} has zero boundary")
        rec = aux.new_edge(v, w, POSITIVE)
        c = (-b) % 3
        dv = AWAY if c == 1 else TOWARD
        o[rec.id] = (dv, -dv)
        phi01[rec.id] = 1
        edge_backmap[rec.id] = ("w", v)

    gadget_edges = {}
    for z in zero:
        rec = aux.edges[z]
        u, up = rec.u, rec.v
        h1 = _arrow_pick(aux, o, phi01, u, z, toward=True)
        h2p = _arrow_pick(aux, o, phi01, up, z, toward=False)
        for h in (h1, h2p):
            carrier = edge_backmap[h]
            du, dv = o[h]
            aux, _, s, (ea, eb) = _subdivide_plain(aux, h)
            # keep the surviving arrows at the old endpoints readable
            o[ea] = (du, -du)
            o[eb] = (-dv, dv)
            phi01[ea] = phi01[eb] = 1
            edge_backmap[ea] = carrier
            edge_backmap[eb] = carrier
            vertex_backmap[s] = ("sub", h, z)
            if h is h1:
                s1 = s
            else:
                s2 = s
        ge = aux.new_edge(s1, s2, POSITIVE)
        gadget_edges[z] = ge.id
        edge_backmap[ge.id] = ("gadget", z)
    aux.remove_vertex(w)
    plain = SignedGraph()
    for v in sorted(aux.vertices):
        plain.add_vertex(v)
    for e in sorted(aux.edges):
        r = aux.edges[e]
        plain.add_edge(e, r.u, r.v, POSITIVE)
    return AuxiliaryGraph(plain, g_z, frozenset(switch), phi_z, gadget_edges,
                          edge_backmap, vertex_backmap)


def _arrow_pick(aux, o, phi01, v, zero_edge, toward: bool):
    """The unique nonzero edge at v whose nearest arrow points toward
    (resp. away from) v; the two candidates carry opposite arrows because the
    boundary at v vanishes."""
    cands = []
    for e in aux.incident(v):
        if e == zero_edge:
            continue
        c = end_coefficient(aux.edges[e], o, v)
        if phi01.get(e, 0) == 0:
            raise InvariantViolation("zero edges may not be adjacent")
        if (c == TOWARD) == toward:
            cands.append(e)
    if len(cands) != 1:
        raise InvariantViolation(f"arrow rule ambiguous at vertex {v}: {cands}")
    return cands[0]


def _subdivide_plain(g, e):
    """Structure-only subdivision (signs immaterial for the aux graph)."""
    from signedflow.sigraph import subdivide_edge

    g2, _, x, pair = subdivide_edge(g, None, e)
    return g2, None, x, pair


# -- maximum matching ---------------------------------------------------------


def maximum_matching(g: SignedGraph) -> dict:
    """Maximum-cardinality matching by blossom contraction; returns a vertex
    to partner map (both directions present)."""
    verts = sorted(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    adj = [[] for _ in range(n)]
    seen = set()
    for e in sorted(g.edges):
        rec = g.edges[e]
        if rec.is_loop():
            continue
        a, b = idx[rec.u], idx[rec.v]
        if (a, b) in seen:
            continue
        seen.add((a, b))
        seen.add((b, a))
        adj[a].append(b)
        adj[b].append(a)
    match = [-1] * n
    for v in range(n):  # greedy seed
        if match[v] == -1:
            for to in adj[v]:
                if match[to] == -1:
                    match[v] = to
                    match[to] = v
                    break
    p = [-1] * n
    base = list(range(n))

    def lca(a, b):
        used2 = [False] * n
        while True:
            a = base[a]
            used2[a] = True
            if match[a] == -1:
                break
            a = p[match[a]]
        while True:
            b = base[b]
            if used2[b]:
                return b
            b = p[match[b]]

    def mark_path(v, b, child, blossom):
        while base[v] != b:
            blossom[base[v]] = True
            blossom[base[match[v]]] = True
            p[v] = child
            child = match[v]
            v = p[match[v]]

    def find_path(root):
        nonlocal p, base
        used = [False] * n
        p = [-1] * n
        base = list(range(n))
        used[root] = True
        q = deque([root])
        while q:
            v = q.popleft()
            for to in adj[v]:
                if base[v] == base[to] or match[v] == to:
                    continue
                if to == root or (match[to] != -1 and p[match[to]] != -1):
                    curbase = lca(v, to)
                    blossom = [False] * n
                    mark_path(v, curbase, to, blossom)
                    mark_path(to, curbase, v, blossom)
                    for i in range(n):
                        if blossom[base[i]]:
                            base[i] = curbase
                            if not used[i]:
                                used[i] = True
                                q.append(i)
                elif p[to] == -1:
                    p[to] = v
                    if match[to] == -1:
                        u = to
                        while u != -1:
                            pv = p[u]
                            ppv = match[pv]
                            match[u] = pv
                            match[pv] = u
                            u = ppv
                        return True
                    used[match[to]] = True
                    q.append(match[to])
        return False

    for v in range(n):
        if match[v] == -1:
            find_path(v)
    return {verts[i]: verts[match[i]] for i in range(n) if match[i] != -1}


def is_perfect(g: SignedGraph, matching: dict) -> bool:
    return set(matching) == set(g.vertices)


# -- matching hypotheses -------------------------------------------------------


@dataclasses.dataclass
class HypothesesVerdict:
    subdivision_of_3connected_cubic: bool
    even_degree2_count: bool
    designated_cycles_ok: bool
    uncovered_below_six: bool
    straddle_ok: bool

    def all_ok(self) -> bool:
        return all(dataclasses.astuple(self))

    def describe(self) -> str:
        pairs = dataclasses.asdict(self)
        return ", ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in pairs.items())


def check_matching_hypotheses(aux: AuxiliaryGraph, cl_star: CycleList,
                              subs: list) -> HypothesesVerdict:
    """The five perfect-matching hypotheses on the auxiliary graph, with the
    designated odd cycles being the subdivided even-length ordinary cycles
    (all but the last two)."""
    h = aux.graph
    deg2 = sorted(v for v in h.vertices if h.degree(v) == 2)
    x_of = {s.record_index: s.new_vertex for s in subs}

    suppressed = _suppress_degree2(h)
    hyp_a = suppressed is not None and suppressed.num_vertices() > 0 \
        and edge_connectivity(suppressed) >= 3
    hyp_b = len(deg2) % 2 == 0

    designated = []
    for idx, rec in enumerate(cl_star.records):
        if rec.kind == ORDINARY and idx in x_of:
            designated.append((rec, x_of[idx]))
    watch = designated[:-2] if len(designated) > 2 else []
    hyp_c = True
    seen_v = set()
    for rec, x in designated:
        if len(rec.edges) % 2 == 0 or x not in rec.vertices:
            hyp_c = False
        if any(e not in h.edges for e in rec.edges):
            hyp_c = False
        if set(rec.vertices) & seen_v:
            hyp_c = False
        seen_v |= set(rec.vertices)
        if x not in deg2:
            hyp_c = False
    xs = {x for _, x in designated}
    hyp_d = len([v for v in deg2 if v not in xs]) < 6

    hyp_e = True
    from signedflow.select import _edge_cut_sides, _straddles
    import itertools as _it

    all_eids = h.edge_ids()
    for rec, _ in watch:
        for pair in _it.combinations(rec.edges, 2):
            for extra in all_eids:
                if extra in pair:
                    continue
                cut = set(pair) | {extra}
                sides = _edge_cut_sides(h, cut)
                if sides and _straddles(h, rec.edges, cut, *sides):
                    hyp_e = False
    for (r1, _), (r2, _) in _it.combinations(watch, 2):
        for p1 in _it.combinations(r1.edges, 2):
            for p2 in _it.combinations(r2.edges, 2):
                cut = set(p1) | set(p2)
                if len(cut) != 4:
                    continue
                sides = _edge_cut_sides(h, cut)
                if sides and _straddles(h, r1.edges, cut, *sides) \
                        and _straddles(h, r2.edges, cut, *sides):
                    hyp_e = False
    return HypothesesVerdict(hyp_a, hyp_b, hyp_c, hyp_d, hyp_e)


def _suppress_degree2(h: SignedGraph) -> SignedGraph | None:
    """Multigraph obtained by smoothing all degree-2 vertices; None when the
    graph is not a subdivision of a (multi)graph of minimum degree 3."""
    deg3 = sorted(v for v in h.vertices if h.degree(v) == 3)
    if not deg3 or any(h.degree(v) not in (2, 3) for v in h.vertices):
        return None
    m = SignedGraph()
    for v in deg3:
        m.add_vertex(v)
    seen = set()
    for v in deg3:
        for eid in sorted(h.incident(v)):
            if eid in seen:
                continue
            edges = [eid]
            cur = h.edges[eid].other_end(v)
            while h.degree(cur) == 2:
                nxt = [e for e in sorted(h.incident(cur)) if e != edges[-1]]
                edges.append(nxt[0])
                cur = h.edges[nxt[0]].other_end(cur)
            seen.update(edges)
            m.new_edge(v, cur, POSITIVE)
    covered = set()
    for rec in m.edges.values():
        covered.update(rec.ends)
    if h.num_vertices() and len(seen) != h.num_edges():
        return None  # a pure degree-2 component exists
    return m


# -- integer lift --------------------------------------------------------------


def lift_to_integer(aux: AuxiliaryGraph, matching: dict) -> dict:
    """psi with psi == phi (mod 3), values in {0,+-1,+-2,+-3}, zero boundary
    at degree-3 vertices and +-1 at degree-2 vertices.

    Solved as psi = phi - 3x with forced per-vertex targets for x; matched
    gadget edges steer the value order on zero edges."""
    g = aux.graph_z
    phi = aux.phi_z
    if not is_perfect(aux.graph, matching):
        raise InvariantViolation("lift requires a perfect matching")
    o = canonical_orientation(g)
    targets = {}
    for v in sorted(g.vertices):
        b = sum(end_coefficient(g.edges[e], o, v) * (phi[e] % 3)
                for e in g.incident(v))
        deg = g.degree(v)
        if deg == 3:
            if b % 3 != 0:
                raise InvariantViolation("preflow boundary residue at a cubic vertex")
            targets[v] = b // 3
        elif deg == 2:
            psi_b = 1 if b % 3 == 1 else -1
            targets[v] = (b - psi_b) // 3
        else:
            raise InvariantViolation(f"unexpected degree {deg}")

    order = []
    touched = set()
    pool = sorted(g.edges)
    while pool:
        best, key = None, None
        for e in pool:
            score = sum(1 for v in set(g.edges[e].ends) if v in touched)
            k = (-score, e)
            if key is None or k < key:
                best, key = e, k
        pool.remove(best)
        order.append(best)
        touched.update(g.edges[best].ends)

    domains = {}
    for e in order:
        val = phi[e] % 3
        if val == 0:
            ge = aux.gadget_edges.get(e)
            matched = ge is not None and _gadget_matched(aux, matching, ge)
            domains[e] = (1, -1, 0) if matched else (0, 1, -1)
        else:
            domains[e] = (0, 1)

    remaining = {v: 0 for v in g.vertices}
    lo = {v: 0 for v in g.vertices}
    hi = {v: 0 for v in g.vertices}
    entries = {}
    for e in order:
        rec = g.edges[e]
        ent = []
        for v in set(rec.ends):
            c = end_coefficient(rec, o, v)
            if c:
                ent.append((v, c))
                remaining[v] += 1
                span = max(abs(c * x) for x in domains[e])
                lo[v] -= span
                hi[v] += span
        entries[e] = ent
    sums = {v: 0 for v in g.vertices}
    assign = {}

    def feasible(v):
        want = targets[v]
        if remaining[v] == 0:
            return sums[v] == want
        return lo[v] <= want - sums[v] <= hi[v]

    def dfs(i):
        if i == len(order):
            return True
        e = order[i]
        ent = entries[e]
        for x in domains[e]:
            ok = True
            for v, c in ent:
                sums[v] += c * x
                remaining[v] -= 1
                span = max(abs(c * y) for y in domains[e])
                lo[v] += span
                hi[v] -= span
            for v, c in ent:
                if not feasible(v):
                    ok = False
            if ok and dfs(i + 1):
                assign[e] = x
                return True
            for v, c in ent:
                sums[v] -= c * x
                remaining[v] += 1
                span = max(abs(c * y) for y in domains[e])
                lo[v] -= span
                hi[v] += span
        return False

    if not dfs(0):
        raise InvariantViolation("integer lift search failed despite perfect matching")
    psi = {e: (phi[e] % 3) - 3 * assign[e] for e in order}
    audit_lift(g, phi, psi)
    return psi


def _gadget_matched(aux, matching, gadget_edge):
    rec = aux.graph.edges[gadget_edge]
    return matching.get(rec.u) == rec.v


def audit_lift(g: SignedGraph, phi: dict, psi: dict):
    o = canonical_orientation(g)
    for e in g.edges:
        if psi[e] % 3 != phi[e] % 3:
            raise InvariantViolation(f"psi residue mismatch at edge {e}")
        if not -3 <= psi[e] <= 3:
            raise InvariantViolation(f"psi out of range at edge {e}")
    for v in sorted(g.vertices):
        b = sum(end_coefficient(g.edges[e], o, v) * psi[e] for e in g.incident(v))
        if g.degree(v) == 3 and b != 0:
            raise InvariantViolation(f"psi boundary {b} at cubic vertex {v}")
        if g.degree(v) == 2 and abs(b) != 1:
            raise InvariantViolation(f"psi boundary {b} at degree-2 vertex {v}")
    return True


# -- tau and assembly ----------------------------------------------------------


def _circulation(g: SignedGraph, cycle: Cycle) -> dict:
    """+-1 values with zero boundary around a positive cycle."""
    o = canonical_orientation(g)
    n = len(cycle.edges)
    tau = {cycle.edges[0]: 1}
    for i in range(1, n):
        v = cycle.vertices[i]
        c_in = _coef_single(g.edges[cycle.edges[i - 1]], o, v, cycle.vertices[i - 1])
        c_out = _coef_single(g.edges[cycle.edges[i]], o, v, cycle.vertices[(i + 1) % n])
        tau[cycle.edges[i]] = -c_in * c_out * tau[cycle.edges[i - 1]]
    v0 = cycle.vertices[0]
    c_last = _coef_single(g.edges[cycle.edges[-1]], o, v0, cycle.vertices[-1])
    c_first = _coef_single(g.edges[cycle.edges[0]], o, v0, cycle.vertices[1 % n])
    if c_last * tau[cycle.edges[-1]] + c_first * tau[cycle.edges[0]] != 0:
        raise InvariantViolation("no +-1 circulation on a non-positive cycle")
    return tau


def _prescribed_cycle_tau(g: SignedGraph, cycle: Cycle, x, want: int) -> dict:
    """+-1 values, zero boundary except ``want`` at x; needs a negative cycle."""
    n = len(cycle.edges)
    i0 = cycle.vertices.index(x)
    verts = cycle.vertices[i0:] + cycle.vertices[:i0]
    edges = cycle.edges[i0:] + cycle.edges[:i0]
    o = canonical_orientation(g)
    for t in (1, -1):
        tau = {edges[0]: t}
        for i in range(1, n):
            v = verts[i]
            c_in = _coef_single(g.edges[edges[i - 1]], o, v, verts[i - 1])
            c_out = _coef_single(g.edges[edges[i]], o, v, verts[(i + 1) % n])
            tau[edges[i]] = -c_in * c_out * tau[edges[i - 1]]
        c_last = _coef_single(g.edges[edges[-1]], o, x, verts[-1])
        c_first = _coef_single(g.edges[edges[0]], o, x, verts[1 % n])
        if c_last * tau[edges[-1]] + c_first * tau[edges[0]] == want:
            return tau
    raise InvariantViolation("prescribed +-1 boundary unsolvable on the cycle")


def build_tau(aux: AuxiliaryGraph, cl_star: CycleList, psi: dict,
              subs: list) -> dict:
    """{0,+-1} correction supported on positive cycles, special cycles,
    subdivided ordinary cycles, and one positive cycle through the fish
    distinguished edge; boundary -2*psi-boundary at each degree-2 vertex."""
    g = aux.graph_z
    o = canonical_orientation(g)
    x_of = {s.record_index: s.new_vertex for s in subs}
    tau = {e: 0 for e in g.edges}

    def psi_boundary(v):
        return sum(end_coefficient(g.edges[e], o, v) * psi[e] for e in g.incident(v))

    for idx, rec in enumerate(cl_star.records):
        if rec.kind == POSITIVE_KIND:
            if rec.is_single_vertex():
                continue
            cyc = make_cycle(g, rec.vertices, rec.edges)
            tau.update(_circulation(g, cyc))
        elif rec.kind == SPECIAL or (rec.kind == ORDINARY and idx in x_of):
            x = x_of[idx]
            cyc = make_cycle(g, rec.vertices, rec.edges)
            want = -2 * psi_boundary(x)
            tau.update(_prescribed_cycle_tau(g, cyc, x, want))
        elif rec.kind == FISH:
            dist = rec.fish.distinguished_edge
            chosen = None
            for c in iter_cycles(g, within_edges=rec.edges):
                if dist in c.edge_set and c.sign(g) == POSITIVE:
                    if chosen is None or c.sort_key() < chosen.sort_key():
                        chosen = c
            if chosen is None:
                raise InvariantViolation("no positive fish cycle through the distinguished edge")
            tau.update(_circulation(g, chosen))
    audit_tau(g, cl_star, psi, tau, subs)
    return tau


def audit_tau(g, cl_star, psi, tau, subs):
    o = canonical_orientation(g)
    xs = {s.new_vertex for s in subs}
    for v in sorted(g.vertices):
        b = sum(end_coefficient(g.edges[e], o, v) * tau[e] for e in g.incident(v))
        if v in xs:
            want = -2 * sum(end_coefficient(g.edges[e], o, v) * psi[e]
                            for e in g.incident(v))
            if b != want:
                raise InvariantViolation(f"tau boundary {b} != {want} at {v}")
        elif b != 0:
            raise InvariantViolation(f"tau boundary {b} at settled vertex {v}")
    for e in g.edges:
        if psi[e] == 0 and tau[e] == 0:
            raise InvariantViolation(f"edge {e} zero in both psi and tau")
    return True


def assemble_flow(aux: AuxiliaryGraph, cl_star: CycleList, subs: list,
                  psi: dict, tau: dict, g_cubic: SignedGraph):
    """f* = 2 psi + tau on the subdivided graph, then smooth the subdivision
    vertices and re-express in the cubic graph's own signature.

    Returns (flow on g_cubic, f_star, smoothing switch set)."""
    g = aux.graph_z
    f_star = {e: 2 * psi[e] + tau[e] for e in g.edges}
    for e, val in f_star.items():
        if val == 0 or abs(val) > 7:
            raise InvariantViolation(f"assembled value {val} at edge {e}")
    verdict = verify_flow(g, canonical_orientation(g), f_star, 8)
    if not verdict.ok:
        raise InvariantViolation(f"assembled flow rejected: {verdict.describe()}")

    gs = g.copy()
    f = dict(f_star)
    for s in subs:
        e1, e2, x = s.original_edge, s.new_edge, s.new_vertex
        r1, r2 = gs.edges[e1], gs.edges[e2]
        sign1 = r1.sign
        if r1.v != x or r2.u != x:
            raise InvariantViolation("subdivision records lost their slot order")
        expected = sign1 * f[e1]
        if f[e2] != expected:
            raise InvariantViolation("inconsistent values across a subdivision vertex")
        a, b = r1.u, r2.v
        merged_sign = r1.sign * r2.sign
        gs.remove_vertex(x)
        gs.add_edge(e1, a, b, merged_sign)
        del f[e2]
    if set(gs.edges) != set(g_cubic.edges) or gs.vertices != g_cubic.vertices:
        raise InvariantViolation("smoothed graph does not match the cubic instance")
    switching = find_switching_between(gs, g_cubic)
    f_c = reexpress_flow_after_switch(gs, f, switching)
    verdict = verify_flow(g_cubic, canonical_orientation(g_cubic), f_c, 8)
    if not verdict.ok:
        raise InvariantViolation(f"final cubic flow rejected: {verdict.describe()}")
    return f_c, f_star, frozenset(switching)
