"""Structural queries: blocks, cycle enumeration, unbalanced thetas, good and
usable cycles, good theta-pairs, fragility, fish recognition, and the
three-vertex cycle/partition dichotomy on subcubic graphs.

All "choose a cycle" consumers rely on the deterministic orders defined here:
cycles sort shortest-first with a lexicographic tiebreak on sorted edge ids;
good/usable candidates sort by fewest degree-3 vertices, then that cycle key.
"""

from __future__ import annotations

import dataclasses
import itertools
from collections import deque

from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    InvariantViolation,
    SignedGraph,
    find_switching_between,
    is_balanced,
)


@dataclasses.dataclass(frozen=True)
class Cycle:
    """A simple cycle as aligned vertex/edge tuples.

    ``edges[i]`` joins ``vertices[i]`` and ``vertices[(i+1) % n]``; a loop is
    a single vertex with a single edge."""
    vertices: tuple
    edges: tuple

    def __len__(self):
        return len(self.edges)

    @property
    def vertex_set(self):
        return frozenset(self.vertices)

    @property
    def edge_set(self):
        return frozenset(self.edges)

    def sign(self, g: SignedGraph) -> int:
        s = 1
        for e in self.edges:
            s *= g.edges[e].sign
        return s

    def sort_key(self):
        return (len(self.edges), tuple(sorted(self.edges)))

    def validate(self, g: SignedGraph):
        n = len(self.vertices)
        if n != len(self.edges) or n == 0:
            raise InvariantViolation("cycle arity mismatch")
        if len(set(self.vertices)) != n or len(set(self.edges)) != n:
            raise InvariantViolation("cycle repeats a vertex or edge")
        for i, e in enumerate(self.edges):
            rec = g.edges[e]
            a, b = self.vertices[i], self.vertices[(i + 1) % n]
            if {rec.u, rec.v} != {a, b}:
                raise InvariantViolation(f"edge {e} does not join {a},{b}")
        return self


def make_cycle(g: SignedGraph, vertices, edges) -> Cycle:
    return Cycle(tuple(vertices), tuple(edges)).validate(g)


def iter_cycles(g: SignedGraph, within_edges=None):
    """Yield every simple cycle exactly once, in deterministic DFS order.

    Loops and digons count as cycles.  ``within_edges`` restricts the edge
    universe (vertex universe follows)."""
    allowed = set(g.edges if within_edges is None else within_edges)
    inc = {}
    for eid in sorted(allowed):
        rec = g.edges[eid]
        inc.setdefault(rec.u, []).append(eid)
        if rec.v != rec.u:
            inc.setdefault(rec.v, []).append(eid)
    for v in sorted(inc):
        for eid in inc[v]:
            if g.edges[eid].is_loop():
                yield Cycle((v,), (eid,))
    for s in sorted(inc):
        # all cycle vertices > s except the base s; dedup directions by
        # requiring first edge id < closing edge id
        path_v = [s]
        path_e = []
        on_path = {s}

        def extend():
            x = path_v[-1]
            for eid in inc[x]:
                rec = g.edges[eid]
                if rec.is_loop() or (path_e and eid == path_e[-1]):
                    continue
                y = rec.other_end(x)
                if y == s and len(path_v) >= 2 and eid != path_e[0] and path_e[0] < eid:
                    yield Cycle(tuple(path_v), tuple(path_e) + (eid,))
                    continue
                if y <= s or y in on_path:
                    continue
                path_v.append(y)
                path_e.append(eid)
                on_path.add(y)
                yield from extend()
                on_path.remove(y)
                path_e.pop()
                path_v.pop()

        yield from extend()


def enumerate_cycles(g: SignedGraph, limit: int = 100000):
    """All simple cycles with signs, shortest-first.

    Returns (list of (Cycle, sign), truncated).  When more than ``limit``
    cycles exist, collection stops early and the sorted prefix is returned
    with the truncation flag set."""
    found = []
    truncated = False
    for c in iter_cycles(g):
        found.append(c)
        if len(found) > limit:
            truncated = True
            found.pop()
            break
    found.sort(key=Cycle.sort_key)
    return [(c, c.sign(g)) for c in found], truncated


def find_negative_cycle(g: SignedGraph) -> Cycle | None:
    balanced, cert = is_balanced(g)
    if balanced:
        return None
    return make_cycle(g, cert.cycle_vertices, cert.cycle_edges)


# -- blocks ------------------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class Block:
    vertices: frozenset
    edges: frozenset

    def is_cycle(self) -> bool:
        return len(self.edges) == len(self.vertices) and len(self.edges) > 0

    def is_bridge(self) -> bool:
        return len(self.edges) == 1 and len(self.vertices) == 2

    def sort_key(self):
        return (min(self.vertices), tuple(sorted(self.edges)))


@dataclasses.dataclass
class BlockCutTree:
    blocks: list
    cut_vertices: set
    adjacency: list  # (block index, cut vertex) pairs

    def leaf_blocks(self) -> list:
        out = [b for b in self.blocks
               if len(b.vertices & self.cut_vertices) <= 1]
        return sorted(out, key=Block.sort_key)


def block_cut_tree(g: SignedGraph) -> BlockCutTree:
    """Biconnected decomposition; loops are single-edge blocks, isolated
    vertices zero-edge blocks."""
    disc, low = {}, {}
    timer = [0]
    stack = []
    blocks = []
    cut = set()

    def emit(upto_edge):
        eds = set()
        while True:
            e = stack.pop()
            eds.add(e)
            if e == upto_edge:
                break
        vs = set()
        for e in eds:
            vs.update(g.edges[e].ends)
        blocks.append(Block(frozenset(vs), frozenset(eds)))

    def dfs(root):
        work = [(root, None, iter(sorted(g.incident(root))))]
        disc[root] = low[root] = timer[0]
        timer[0] += 1
        children_of_root = 0
        while work:
            u, pedge, it = work[-1]
            advanced = False
            for eid in it:
                rec = g.edges[eid]
                if rec.is_loop() or eid == pedge:
                    continue  # loops become their own blocks afterwards
                v = rec.other_end(u)
                if v not in disc:
                    if u == root:
                        children_of_root += 1
                    disc[v] = low[v] = timer[0]
                    timer[0] += 1
                    stack.append(eid)
                    work.append((v, eid, iter(sorted(g.incident(v)))))
                    advanced = True
                    break
                if disc[v] < disc[u]:
                    stack.append(eid)
                    if disc[v] < low[u]:
                        low[u] = disc[v]
            if advanced:
                continue
            work.pop()
            if work:
                pu = work[-1][0]
                if low[u] < low[pu]:
                    low[pu] = low[u]
                if low[u] >= disc[pu]:
                    emit(pedge)
                    if pu != root:
                        cut.add(pu)
        if children_of_root >= 2:
            cut.add(root)

    for v in sorted(g.vertices):
        if v not in disc:
            dfs(v)
    for eid in sorted(g.edges):
        if g.edges[eid].is_loop():
            blocks.append(Block(frozenset({g.edges[eid].u}), frozenset({eid})))
    covered = set()
    for b in blocks:
        covered |= b.vertices
    for v in sorted(g.vertices - covered):
        blocks.append(Block(frozenset({v}), frozenset()))
    blocks.sort(key=Block.sort_key)
    adjacency = [(i, v) for i, b in enumerate(blocks) for v in sorted(b.vertices & cut)]
    return BlockCutTree(blocks, cut, adjacency)


def subgraph_from_edges(g: SignedGraph, edge_ids) -> SignedGraph:
    sub = SignedGraph()
    vs = set()
    for e in edge_ids:
        vs.update(g.edges[e].ends)
    for v in sorted(vs):
        sub.add_vertex(v)
    for e in sorted(edge_ids):
        rec = g.edges[e]
        sub.add_edge(e, rec.u, rec.v, rec.sign)
    return sub


# -- unbalanced thetas -------------------------------------------------------


@dataclasses.dataclass
class ThetaSubgraph:
    branch_vertices: tuple
    branches: tuple  # three edge-id tuples, internally disjoint paths

    def all_edges(self):
        return frozenset(e for br in self.branches for e in br)


def check_theta(g: SignedGraph, theta: ThetaSubgraph) -> bool:
    """Structure check plus unbalance of the theta subgraph."""
    sub = subgraph_from_edges(g, theta.all_edges())
    if len(theta.all_edges()) != sum(len(b) for b in theta.branches):
        return False
    degs = sorted(sub.degree(v) for v in sub.vertices)
    n3 = sum(1 for d in degs if d == 3)
    if n3 != 2 or any(d not in (2, 3) for d in degs):
        return False
    return not is_balanced(sub)[0]


def has_unbalanced_theta(g: SignedGraph):
    """Fast block characterization: true iff some block is unbalanced and is
    not a single cycle.  Returns (bool, ThetaSubgraph-or-None)."""
    bct = block_cut_tree(g)
    for b in bct.blocks:
        if b.is_cycle() or len(b.edges) <= 1:
            continue
        sub = subgraph_from_edges(g, b.edges)
        if is_balanced(sub)[0]:
            continue
        return True, _theta_witness(sub)
    return False, None


def _theta_witness(sub: SignedGraph) -> ThetaSubgraph:
    """Negative cycle plus an ear inside a 2-connected unbalanced non-cycle
    block; one of the theta's two new cycles is negative, so it is unbalanced."""
    c = find_negative_cycle(sub)
    if c is None:
        raise InvariantViolation("block reported unbalanced but no negative cycle")
    cv = set(c.vertices)
    ce = set(c.edges)
    for a in sorted(cv):
        parent = {a: (None, None)}
        queue = deque([a])
        hit = None
        while queue and hit is None:
            x = queue.popleft()
            for eid in sorted(sub.incident(x)):
                if eid in ce or sub.edges[eid].is_loop():
                    continue
                y = sub.edges[eid].other_end(x)
                if y == a or y in parent:
                    continue
                parent[y] = (x, eid)
                if y in cv:
                    hit = y
                    break
                queue.append(y)
        if hit is None:
            continue
        ear_edges = []
        curv = hit
        while parent[curv][0] is not None:
            curv, pe = parent[curv][0], parent[curv][1]
            ear_edges.append(pe)
        ear_edges.reverse()
        arc1, arc2 = _cycle_arcs(c, a, hit)
        theta = ThetaSubgraph((a, hit), (tuple(arc1), tuple(arc2), tuple(ear_edges)))
        if not check_theta(sub, theta):
            raise InvariantViolation("constructed theta failed its own check")
        return theta
    raise InvariantViolation("no ear found on negative cycle in non-cycle block")


def _cycle_arcs(c: Cycle, a, b):
    """Edge lists of the two a..b arcs of a cycle."""
    n = len(c.vertices)
    ia, ib = c.vertices.index(a), c.vertices.index(b)
    arc1, arc2 = [], []
    i = ia
    while i != ib:
        arc1.append(c.edges[i])
        i = (i + 1) % n
    i = ib
    while i != ia:
        arc2.append(c.edges[i])
        i = (i + 1) % n
    return arc1, arc2


def has_unbalanced_theta_brute(g: SignedGraph, limit: int = 200000) -> bool:
    """Test oracle: exhaustive scan over pairs of negative cycles whose union
    is a theta.  Every unbalanced theta is the union of its two negative
    cycles, so this is equivalent to theta-subgraph enumeration."""
    cycles, truncated = enumerate_cycles(g, limit)
    if truncated:
        raise InvariantViolation("cycle enumeration truncated in brute theta scan")
    neg = [c for c, s in cycles if s == NEGATIVE]
    for c1, c2 in itertools.combinations(neg, 2):
        union = c1.edge_set | c2.edge_set
        if len(union) == len(c1.edge_set) + len(c2.edge_set):
            continue  # edge-disjoint: no shared branch
        degs = {}
        for e in union:
            for v in g.edges[e].ends:
                degs[v] = degs.get(v, 0) + 1
        if all(d in (2, 3) for d in degs.values()) and \
                sum(1 for d in degs.values() if d == 3) == 2:
            return True
    return False


def find_two_disjoint_negative_cycles(g: SignedGraph, vertex_disjoint: bool = True,
                                      limit: int = 200000):
    """First pair of disjoint negative cycles in deterministic search order.

    Returns ('found', (c1, c2)) / ('none', None) / ('unknown', None); the
    last only when the enumeration budget was exhausted."""
    count = 0
    for c in iter_cycles(g):
        count += 1
        if count > limit:
            return "unknown", None
        if c.sign(g) != NEGATIVE:
            continue
        if vertex_disjoint:
            rest = g.induced_subgraph(g.vertices - c.vertex_set)
        else:
            rest = g.copy()
            for e in c.edges:
                rest.remove_edge(e)
        c2 = find_negative_cycle(rest)
        if c2 is not None:
            return "found", (c, c2)
    return "none", None


# -- good / usable cycles ----------------------------------------------------


def _degree3_count(cycle: Cycle, degree_of) -> int:
    return sum(1 for v in cycle.vertices if degree_of(v) >= 3)


def good_cycle_candidates(g: SignedGraph, within_edges=None, degree_of=None):
    """Positive cycles with >= 2 degree-2 vertices, sorted by (fewest
    degree-3 vertices, shortest, lexicographic edge ids)."""
    if degree_of is None:
        degree_of = g.degree
    out = []
    for c in iter_cycles(g, within_edges):
        if c.sign(g) != POSITIVE:
            continue
        if sum(1 for v in c.vertices if degree_of(v) == 2) >= 2:
            out.append(c)
    out.sort(key=lambda c: (_degree3_count(c, degree_of),) + c.sort_key())
    return out


def usable_cycle_candidates(g: SignedGraph, within_edges=None, degree_of=None):
    """Good cycles plus negative cycles with at most one vertex of degree != 2."""
    if degree_of is None:
        degree_of = g.degree
    out = list(good_cycle_candidates(g, within_edges, degree_of))
    for c in iter_cycles(g, within_edges):
        if c.sign(g) != NEGATIVE:
            continue
        if sum(1 for v in c.vertices if degree_of(v) != 2) <= 1:
            out.append(c)
    out.sort(key=lambda c: (_degree3_count(c, degree_of),) + c.sort_key())
    return out


def _single_negative_cycle_graph(g: SignedGraph) -> Cycle | None:
    if g.num_vertices() == 0 or g.num_edges() != g.num_vertices():
        return None
    if not g.is_connected() or any(g.degree(v) != 2 for v in g.vertices):
        return None
    for c in iter_cycles(g):
        if len(c) == g.num_edges():
            return c if c.sign(g) == NEGATIVE else None
    return None


def find_good_cycle(g: SignedGraph):
    """('vertex', v) for a degree<=1 vertex, ('cycle', C) for a good cycle,
    ('negative-cycle', C) when g is itself a negative cycle, else None."""
    low = sorted(v for v in g.vertices if g.degree(v) <= 1)
    if low:
        return "vertex", low[0]
    cands = good_cycle_candidates(g)
    if cands:
        return "cycle", cands[0]
    whole = _single_negative_cycle_graph(g)
    if whole is not None:
        return "negative-cycle", whole
    return None


def find_usable_cycle(g: SignedGraph):
    low = sorted(v for v in g.vertices if g.degree(v) <= 1)
    if low:
        return "vertex", low[0]
    cands = usable_cycle_candidates(g)
    if cands:
        return "cycle", cands[0]
    whole = _single_negative_cycle_graph(g)
    if whole is not None:
        return "negative-cycle", whole
    return None


# -- good theta-pairs --------------------------------------------------------


@dataclasses.dataclass
class GoodThetaPair:
    cycle: Cycle        # D, negative
    path_vertices: tuple  # Q, ends on D, interior off D
    path_edges: tuple


def check_good_theta_pair(g: SignedGraph, pair: GoodThetaPair) -> bool:
    d = pair.cycle
    if d.sign(g) != NEGATIVE:
        return False
    pv = pair.path_vertices
    if len(pv) < 2 or pv[0] == pv[-1]:
        return False
    if pv[0] not in d.vertex_set or pv[-1] not in d.vertex_set:
        return False
    if any(v in d.vertex_set for v in pv[1:-1]):
        return False
    if len(set(pv)) != len(pv):
        return False
    deg2 = sum(1 for v in pv if g.degree(v) == 2)
    return deg2 >= 2


def find_good_theta_pair(g: SignedGraph) -> GoodThetaPair | None:
    """(D, Q) with D a negative cycle and Q an internally disjoint path with
    both ends on D carrying >= 2 degree-2 vertices; Q of maximum length."""
    best = None
    best_key = None
    seen_cycles = set()
    for d in iter_cycles(g):
        if d.sign(g) != NEGATIVE or d.edge_set in seen_cycles:
            continue
        seen_cycles.add(d.edge_set)
        dv = d.vertex_set
        for a in sorted(dv):
            stack = [(a, [a], [], {a})]
            while stack:
                x, pv, pe, used = stack.pop()
                for eid in sorted(g.incident(x), reverse=True):
                    rec = g.edges[eid]
                    if rec.is_loop() or (pe and eid == pe[-1]) or eid in d.edge_set:
                        continue
                    y = rec.other_end(x)
                    if y in used:
                        continue
                    if y in dv:
                        if y == a or len(pv) < 2:
                            continue
                        qv = tuple(pv) + (y,)
                        qe = tuple(pe) + (eid,)
                        deg2 = sum(1 for v in qv if g.degree(v) == 2)
                        if deg2 >= 2:
                            key = (-len(qv), d.sort_key(), qe)
                            if best_key is None or key < best_key:
                                best = GoodThetaPair(d, qv, qe)
                                best_key = key
                        continue
                    stack.append((y, pv + [y], pe + [eid], used | {y}))
    return best


def is_fragile(g: SignedGraph) -> bool:
    """Has an unbalanced theta, and deleting any good cycle's vertices
    destroys all of them.  Good cycles enumerated exhaustively."""
    if any(g.degree(v) > 3 for v in g.vertices):
        raise ArgumentError("fragility is defined for subcubic graphs")
    if not has_unbalanced_theta(g)[0]:
        return False
    for v in sorted(g.vertices):
        if g.degree(v) <= 1:
            if has_unbalanced_theta(g.induced_subgraph(g.vertices - {v}))[0]:
                return False
    for c in good_cycle_candidates(g):
        rest = g.induced_subgraph(g.vertices - c.vertex_set)
        if has_unbalanced_theta(rest)[0]:
            return False
    return True


# -- fish recognition --------------------------------------------------------


@dataclasses.dataclass
class FishCertificate:
    branch_vertices: tuple      # (a, b): the theta's degree-3 vertices
    adjacent_deg2: tuple        # (r, s): ends of the ear, adjacent in the theta
    theta_edges: tuple          # 7 edges of the (2,2,3)-theta
    path_edges: tuple           # the odd ear, length >= 3
    distinguished_edge: int     # the unique edge in no 2-edge-cut (joins r, s)
    switching_set: frozenset    # switching to the single-negative-edge form


def _threads(g: SignedGraph):
    """Maximal degree-2 chains between degree-3 vertices.

    Returns a list of (endpoint, endpoint, edge tuple); requires every vertex
    to have degree 2 or 3."""
    deg3 = sorted(v for v in g.vertices if g.degree(v) == 3)
    threads = []
    seen = set()
    for v in deg3:
        for eid in sorted(g.incident(v)):
            if eid in seen:
                continue
            edges = [eid]
            seen.add(eid)
            prev, cur = v, g.edges[eid].other_end(v)
            while g.degree(cur) == 2:
                nxt = [e for e in sorted(g.incident(cur)) if e != edges[-1]]
                if len(nxt) != 1:
                    return None
                edges.append(nxt[0])
                seen.add(nxt[0])
                prev, cur = cur, g.edges[nxt[0]].other_end(cur)
            threads.append((v, cur, tuple(edges)))
    # each thread got collected twice (once from each end) unless closed
    dedup = {}
    for a, b, eds in threads:
        key = frozenset(eds)
        if key not in dedup:
            dedup[key] = (a, b, eds)
    return list(dedup.values())


def recognize_fish(g: SignedGraph) -> FishCertificate | None:
    """Certificate iff g is switching-equivalent to a fish.

    Structure: a (2,2,3)-theta plus an odd ear of length >= 3 between the
    theta's two adjacent degree-2 vertices; the theta is balanced and the
    whole graph unbalanced."""
    n = g.num_vertices()
    if n < 8 or n % 2 != 0 or g.num_edges() != n + 2 or not g.is_connected():
        return None
    degs = [g.degree(v) for v in g.vertices]
    if sorted(degs, reverse=True)[:4] != [3, 3, 3, 3] or any(d not in (2, 3) for d in degs):
        return None
    threads = _threads(g)
    if threads is None or len(threads) != 6:
        return None
    if any(a == b for a, b, _ in threads):
        return None
    deg3 = sorted(v for v in g.vertices if g.degree(v) == 3)
    by_pair = {}
    for a, b, eds in threads:
        by_pair.setdefault(frozenset((a, b)), []).append(eds)
    for a, b, r, s in itertools.permutations(deg3):
        if (a, b) > (b, a) or (r, s) > (s, r):
            continue  # the roles of a,b and of r,s are symmetric
        ab = by_pair.get(frozenset((a, b)), [])
        ar = by_pair.get(frozenset((a, r)), [])
        sb = by_pair.get(frozenset((s, b)), [])
        rs = by_pair.get(frozenset((r, s)), [])
        if len(ab) != 2 or len(ar) != 1 or len(sb) != 1 or len(rs) != 2:
            continue
        if sorted(len(t) for t in ab) != [2, 2] or len(ar[0]) != 1 or len(sb[0]) != 1:
            continue
        for short, ear in (rs, rs[::-1]):
            if len(short) != 1 or len(ear) < 3 or len(ear) % 2 == 0:
                continue
            theta_edges = tuple(ab[0]) + tuple(ab[1]) + ar[0] + short + sb[0]
            theta_sub = subgraph_from_edges(g, theta_edges)
            if not is_balanced(theta_sub)[0]:
                continue
            if is_balanced(g)[0]:
                continue
            target = g.copy()
            for eid in g.edge_ids():
                rec = g.edges[eid]
                want = NEGATIVE if eid == min(ear) else POSITIVE
                if rec.sign != want:
                    target.replace_edge(eid, rec.u, rec.v, want)
            switching = find_switching_between(g, target)
            return FishCertificate(
                branch_vertices=(a, b),
                adjacent_deg2=(r, s),
                theta_edges=theta_edges,
                path_edges=ear,
                distinguished_edge=short[0],
                switching_set=frozenset(switching),
            )
    return None


# -- Watkins-Mesner ----------------------------------------------------------


@dataclasses.dataclass
class WMPartition:
    x_parts: tuple  # (X1, X2, X3) as frozensets
    y_parts: tuple  # (Y1, Y2)


def check_wm_partition(g: SignedGraph, part: WMPartition, xs) -> bool:
    sets = list(part.x_parts) + list(part.y_parts)
    allv = set()
    for s in sets:
        if not s or (allv & s):
            return False
        allv |= s
    if allv != g.vertices:
        return False
    for i, x in enumerate(xs):
        if x not in part.x_parts[i]:
            return False

    def cross(s1, s2):
        return sum(1 for rec in g.edges.values()
                   if not rec.is_loop() and ((rec.u in s1 and rec.v in s2)
                                             or (rec.u in s2 and rec.v in s1)))

    for xi in part.x_parts:
        for yj in part.y_parts:
            if cross(xi, yj) != 1:
                return False
    if cross(part.y_parts[0], part.y_parts[1]) != 0:
        return False
    for s1, s2 in itertools.combinations(part.x_parts, 2):
        if cross(s1, s2) != 0:
            return False
    return True


def cycle_through_three_vertices(g: SignedGraph, x1, x2, x3):
    """Either ('cycle', C) through all three vertices or ('partition', W)
    certifying impossibility; exactly one is returned."""
    xs = (x1, x2, x3)
    if len(set(xs)) != 3 or any(x not in g.vertices for x in xs):
        raise ArgumentError("three distinct vertices of g required")
    if any(g.degree(v) > 3 for v in g.vertices):
        raise ArgumentError("subcubic graph required")
    bct = block_cut_tree(g)
    if len(bct.blocks) != 1 or bct.cut_vertices:
        raise ArgumentError("2-connected graph required")
    want = set(xs)
    for c in iter_cycles(g):
        if want <= c.vertex_set:
            return "cycle", c
    part = _wm_partition_search(g, xs)
    if part is None:
        raise InvariantViolation("neither cycle nor partition found")
    return "partition", part


def _wm_partition_search(g: SignedGraph, xs):
    eids = g.edge_ids()
    for combo in itertools.combinations(eids, 6):
        rest = g.copy()
        for e in combo:
            rest.remove_edge(e)
        comps = rest.components()
        if len(comps) < 5:
            continue
        comp_of = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = i
        if any(comp_of[g.edges[e].u] == comp_of[g.edges[e].v] for e in combo):
            continue
        cx = [comp_of[x] for x in xs]
        if len(set(cx)) != 3:
            continue
        labels = {cx[0]: "X1", cx[1]: "X2", cx[2]: "X3"}
        others = [i for i in range(len(comps)) if i not in labels]
        for assign in itertools.product(["X1", "X2", "X3", "Y1", "Y2"], repeat=len(others)):
            lab = dict(labels)
            lab.update(zip(others, assign))
            counts = {}
            ok = True
            for e in combo:
                a = lab[comp_of[g.edges[e].u]]
                b = lab[comp_of[g.edges[e].v]]
                if a == b or {a[0], b[0]} != {"X", "Y"}:
                    ok = False
                    break
                key = (a, b) if a[0] == "X" else (b, a)
                counts[key] = counts.get(key, 0) + 1
            if not ok:
                continue
            need = {(f"X{i}", f"Y{j}"): 1 for i in (1, 2, 3) for j in (1, 2)}
            if counts != need:
                continue
            parts = {name: set() for name in ["X1", "X2", "X3", "Y1", "Y2"]}
            for i, comp in enumerate(comps):
                parts[lab[i]] |= comp
            if any(not parts[name] for name in parts):
                continue
            return WMPartition(
                x_parts=(frozenset(parts["X1"]), frozenset(parts["X2"]), frozenset(parts["X3"])),
                y_parts=(frozenset(parts["Y1"]), frozenset(parts["Y2"])),
            )
    return None


# -- well-behaved (test oracle) ----------------------------------------------


def is_well_behaved(g: SignedGraph) -> bool:
    """Exponential subset scan of the two degree-deficiency cut bounds.

    Refuses graphs with more than 16 vertices."""
    if g.num_vertices() > 16:
        raise ArgumentError("is_well_behaved is capped at 16 vertices")
    if any(g.degree(v) > 3 for v in g.vertices):
        return False
    verts = sorted(g.vertices)
    n = len(verts)
    for mask in range(1, 2 ** n):
        xset = {verts[i] for i in range(n) if (mask >> i) & 1}
        d = sum(1 for rec in g.edges.values()
                if not rec.is_loop() and ((rec.u in xset) != (rec.v in xset)))
        deficiency = sum(3 - g.degree(v) for v in xset)
        if d + deficiency < 3:
            return False
        if len(xset) >= 2 and d + deficiency < 4:
            if is_balanced(g.induced_subgraph(xset))[0]:
                return False
    return True
