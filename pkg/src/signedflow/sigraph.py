"""Core signed/bidirected multigraph model, equivalence operations, flow
verification, and the .sg / flow file formats.

Conventions used throughout the package:

* Signs are +1 (positive) and -1 (negative).
* End-directions are +1 (away from the vertex) and -1 (toward it).
* An orientation maps each edge id to ``(dir_at_u, dir_at_v)``; a positive
  edge has opposite end-directions, a negative edge equal ones.  Both entries
  of a loop refer to its single end vertex.
* The *canonical* orientation of a signed graph is: positive edge (u, v) ->
  (away@u, toward@v); negative edge -> (away@u, away@v).  Flows exchanged
  between pipeline stages are value maps w.r.t. the canonical orientation of
  whatever signature is current.
"""

from __future__ import annotations

import dataclasses
from collections import deque

POSITIVE = 1
NEGATIVE = -1
AWAY = 1
TOWARD = -1

INFINITE_CONNECTIVITY = 2**30


class SignedFlowError(Exception):
    pass


class ParseError(SignedFlowError):
    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ArgumentError(SignedFlowError):
    pass


class ContractViolation(SignedFlowError):
    pass


class InvariantViolation(SignedFlowError):
    """A guarantee the construction relies on failed at runtime."""


@dataclasses.dataclass(frozen=True)
class EdgeRecord:
    id: int
    u: int
    v: int
    sign: int

    def __post_init__(self):
        if self.sign not in (POSITIVE, NEGATIVE):
            raise ArgumentError(f"edge {self.id}: sign must be +1 or -1")

    @property
    def ends(self):
        return (self.u, self.v)

    def is_loop(self):
        return self.u == self.v

    def other_end(self, x):
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise ArgumentError(f"vertex {x} is not an end of edge {self.id}")


class SignedGraph:
    """Mutable signed multigraph with stable integer ids.

    Loops and parallel edges are permitted.  Deleted ids are never reused
    within the lifetime of a graph object (or its copies), so certificates
    stay readable.
    """

    def __init__(self):
        self.vertices: set[int] = set()
        self.edges: dict[int, EdgeRecord] = {}
        self._inc: dict[int, list[int]] = {}
        self._next_vid = 0
        self._next_eid = 0

    # -- construction -----------------------------------------------------

    def add_vertex(self, v: int) -> int:
        if v in self.vertices:
            raise ArgumentError(f"vertex {v} already present")
        self.vertices.add(v)
        self._inc[v] = []
        self._next_vid = max(self._next_vid, v + 1)
        return v

    def new_vertex(self) -> int:
        return self.add_vertex(self._next_vid)

    def add_edge(self, eid: int, u: int, v: int, sign: int) -> EdgeRecord:
        if eid in self.edges:
            raise ArgumentError(f"edge id {eid} already present")
        if u not in self.vertices or v not in self.vertices:
            raise ArgumentError(f"edge {eid}: endpoint not in vertex set")
        rec = EdgeRecord(eid, u, v, sign)
        self.edges[eid] = rec
        self._inc[u].append(eid)
        if v != u:
            self._inc[v].append(eid)
        self._next_eid = max(self._next_eid, eid + 1)
        return rec

    def new_edge(self, u: int, v: int, sign: int) -> EdgeRecord:
        return self.add_edge(self._next_eid, u, v, sign)

    def remove_edge(self, eid: int) -> EdgeRecord:
        rec = self.edges.pop(eid)
        self._inc[rec.u].remove(eid)
        if rec.v != rec.u:
            self._inc[rec.v].remove(eid)
        return rec

    def remove_vertex(self, v: int):
        for eid in list(self._inc[v]):
            self.remove_edge(eid)
        self.vertices.remove(v)
        del self._inc[v]

    def replace_edge(self, eid: int, u: int, v: int, sign: int) -> EdgeRecord:
        """Re-end an existing edge keeping its id."""
        self.remove_edge(eid)
        if u not in self.vertices or v not in self.vertices:
            raise ArgumentError(f"edge {eid}: endpoint not in vertex set")
        rec = EdgeRecord(eid, u, v, sign)
        self.edges[eid] = rec
        self._inc[u].append(eid)
        if v != u:
            self._inc[v].append(eid)
        return rec

    def copy(self) -> "SignedGraph":
        g = SignedGraph()
        g.vertices = set(self.vertices)
        g.edges = dict(self.edges)
        g._inc = {v: list(lst) for v, lst in self._inc.items()}
        g._next_vid = self._next_vid
        g._next_eid = self._next_eid
        return g

    # -- queries ----------------------------------------------------------

    def incident(self, v: int) -> list[int]:
        """Edge ids at v; a loop appears once."""
        return self._inc[v]

    def degree(self, v: int) -> int:
        d = 0
        for eid in self._inc[v]:
            d += 2 if self.edges[eid].is_loop() else 1
        return d

    def neighbors(self, v: int) -> set[int]:
        out = set()
        for eid in self._inc[v]:
            rec = self.edges[eid]
            if not rec.is_loop():
                out.add(rec.other_end(v))
        return out

    def edge_ids(self) -> list[int]:
        return sorted(self.edges)

    def num_vertices(self) -> int:
        return len(self.vertices)

    def num_edges(self) -> int:
        return len(self.edges)

    def sign(self, eid: int) -> int:
        return self.edges[eid].sign

    def edges_between(self, u: int, v: int) -> list[int]:
        return [e for e in self._inc[u] if self.edges[e].other_end(u) == v and not self.edges[e].is_loop()] \
            if u != v else [e for e in self._inc[u] if self.edges[e].is_loop()]

    def induced_subgraph(self, vertex_set) -> "SignedGraph":
        vs = set(vertex_set)
        g = SignedGraph()
        for v in vs:
            g.add_vertex(v)
        for eid in sorted(self.edges):
            rec = self.edges[eid]
            if rec.u in vs and rec.v in vs:
                g.add_edge(eid, rec.u, rec.v, rec.sign)
        g._next_vid = self._next_vid
        g._next_eid = self._next_eid
        return g

    def components(self) -> list[set[int]]:
        seen = set()
        comps = []
        for start in sorted(self.vertices):
            if start in seen:
                continue
            comp = {start}
            seen.add(start)
            queue = deque([start])
            while queue:
                x = queue.popleft()
                for w in self.neighbors(x):
                    if w not in seen:
                        seen.add(w)
                        comp.add(w)
                        queue.append(w)
            comps.append(comp)
        return comps

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def __eq__(self, other):
        return (
            isinstance(other, SignedGraph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __repr__(self):
        return f"SignedGraph(|V|={len(self.vertices)}, |E|={len(self.edges)})"


Orientation = dict  # EdgeId -> (dir_at_u, dir_at_v)


def canonical_orientation(g: SignedGraph) -> Orientation:
    o = {}
    for eid, rec in g.edges.items():
        o[eid] = (AWAY, TOWARD) if rec.sign == POSITIVE else (AWAY, AWAY)
    return o


def check_orientation(g: SignedGraph, o: Orientation):
    for eid, rec in g.edges.items():
        if eid not in o:
            raise ContractViolation(f"orientation missing edge {eid}")
        du, dv = o[eid]
        if du not in (AWAY, TOWARD) or dv not in (AWAY, TOWARD):
            raise ContractViolation(f"edge {eid}: bad direction values")
        if rec.sign == POSITIVE and du == dv:
            raise ContractViolation(f"positive edge {eid} has equal end-directions")
        if rec.sign == NEGATIVE and du != dv:
            raise ContractViolation(f"negative edge {eid} has opposite end-directions")


def end_coefficient(rec: EdgeRecord, o: Orientation, v: int) -> int:
    """Sum of +-1 direction coefficients of the ends of rec at v.

    A loop contributes via both of its ends (so +-2 for a negative loop and
    0 for a positive one)."""
    du, dv = o[rec.id]
    c = 0
    if rec.u == v:
        c += du
    if rec.v == v:
        c += dv
    return c


# -- equivalence operations -----------------------------------------------


def switch_at_vertex(g: SignedGraph, o: Orientation, v: int):
    """Switch at v: flip the sign of every non-loop edge at v and reverse
    every end-direction assigned to v.  Returns (graph, orientation)."""
    if v not in g.vertices:
        raise ArgumentError(f"unknown vertex {v}")
    g2 = g.copy()
    o2 = dict(o) if o is not None else None
    for eid in g.incident(v):
        rec = g.edges[eid]
        if rec.is_loop():
            if o2 is not None:
                du, dv = o2[eid]
                o2[eid] = (-du, -dv)
            continue
        g2.replace_edge(eid, rec.u, rec.v, -rec.sign)
        if o2 is not None:
            du, dv = o2[eid]
            if rec.u == v:
                du = -du
            if rec.v == v:
                dv = -dv
            o2[eid] = (du, dv)
    return g2, o2


def reverse_edge(o: Orientation, f: dict, e: int):
    """Reverse both directions of e and negate f(e); boundaries unchanged."""
    if e not in o:
        raise ArgumentError(f"unknown edge {e}")
    o2 = dict(o)
    du, dv = o2[e]
    o2[e] = (-du, -dv)
    f2 = dict(f)
    if e in f2:
        f2[e] = -f2[e]
    return o2, f2


def boundary_at(g: SignedGraph, o: Orientation, f: dict, v: int, mod: int | None = None):
    """Sum of f over edge-ends at v directed away minus those directed toward."""
    if v not in g.vertices:
        raise ArgumentError(f"unknown vertex {v}")
    total = 0
    for eid in g.incident(v):
        total += end_coefficient(g.edges[eid], o, v) * f[eid]
    return total % mod if mod is not None else total


@dataclasses.dataclass
class FlowVerdict:
    ok: bool
    clause: str | None = None
    witness: object = None

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "accept"
        return f"reject: {self.clause} (witness {self.witness})"


def verify_flow(g: SignedGraph, o: Orientation, f: dict, k: int) -> FlowVerdict:
    """Accept iff all boundaries vanish, f is nowhere zero and |f| <= k-1."""
    for v in sorted(g.vertices):
        b = boundary_at(g, o, f, v)
        if b != 0:
            return FlowVerdict(False, "nonzero-boundary", (v, b))
    for eid in g.edge_ids():
        if f.get(eid, 0) == 0:
            return FlowVerdict(False, "zero-edge", eid)
    for eid in g.edge_ids():
        if abs(f[eid]) > k - 1:
            return FlowVerdict(False, "value-out-of-range", (eid, f[eid]))
    return FlowVerdict(True)


# -- balance --------------------------------------------------------------


@dataclasses.dataclass
class BalanceCertificate:
    """Either a switching set making all edges positive, or a negative cycle.

    Exactly one field is set.  ``cycle_edges``/``cycle_vertices`` describe a
    closed walk whose sign product is negative."""
    switching_set: set | None = None
    cycle_edges: list | None = None
    cycle_vertices: list | None = None


def is_balanced(g: SignedGraph):
    """Sign-propagating search per component.

    Returns (True, certificate-with-switching-set) or
    (False, certificate-with-negative-cycle)."""
    label = {}
    parent = {}  # v -> (parent vertex, edge id)
    switching = set()
    for eid in g.edge_ids():
        rec = g.edges[eid]
        if rec.is_loop() and rec.sign == NEGATIVE:
            return False, BalanceCertificate(cycle_edges=[eid], cycle_vertices=[rec.u])
    for root in sorted(g.vertices):
        if root in label:
            continue
        label[root] = 1
        parent[root] = None
        comp = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for eid in g.incident(x):
                rec = g.edges[eid]
                if rec.is_loop():
                    continue
                y = rec.other_end(x)
                want = label[x] * rec.sign
                if y not in label:
                    label[y] = want
                    parent[y] = (x, eid)
                    comp.append(y)
                    queue.append(y)
                elif label[y] != want:
                    return False, _conflict_cycle(g, parent, x, y, eid)
        neg_side = {v for v in comp if label[v] == -1}
        if min(comp) in neg_side:
            neg_side = set(comp) - neg_side
        switching |= neg_side
    return True, BalanceCertificate(switching_set=switching)


def _conflict_cycle(g, parent, x, y, eid):
    """Tree path x..y plus the conflicting edge forms a negative cycle."""
    px, epx = [x], []
    cur = x
    while parent[cur] is not None:
        p, pe = parent[cur]
        px.append(p)
        epx.append(pe)
        cur = p
    pos_in_px = {v: i for i, v in enumerate(px)}
    py, epy = [y], []
    cur = y
    while cur not in pos_in_px:
        p, pe = parent[cur]
        py.append(p)
        epy.append(pe)
        cur = p
    ix = pos_in_px[cur]
    iy = len(py) - 1
    # cycle: x -> .. -> lca (tree), lca -> .. -> y (tree), y -> x (eid)
    verts = px[: ix + 1] + list(reversed(py[:iy]))
    edges = epx[:ix] + list(reversed(epy[:iy])) + [eid]
    prod = 1
    for e in edges:
        prod *= g.edges[e].sign
    if prod != NEGATIVE:
        raise InvariantViolation("conflict cycle is not negative")
    return BalanceCertificate(cycle_edges=edges, cycle_vertices=verts)


def check_balance_certificate(g: SignedGraph, balanced: bool, cert: BalanceCertificate) -> bool:
    if balanced:
        if cert.switching_set is None:
            return False
        s = cert.switching_set
        for rec in g.edges.values():
            if rec.is_loop():
                if rec.sign == NEGATIVE:
                    return False
                continue
            flips = (rec.u in s) + (rec.v in s)
            if rec.sign * (-1) ** flips != POSITIVE:
                return False
        return True
    if not cert.cycle_edges:
        return False
    prod = 1
    for e in cert.cycle_edges:
        if e not in g.edges:
            return False
        prod *= g.edges[e].sign
    return prod == NEGATIVE


def negativeness_at_most(g: SignedGraph, k: int) -> bool:
    """Is the minimum number of negative edges over all switchings <= k?"""
    if k not in (0, 1):
        raise ArgumentError("k must be 0 or 1")
    balanced, _ = is_balanced(g)
    if balanced:
        return True
    if k == 0:
        return False
    for eid in g.edge_ids():
        h = g.copy()
        h.remove_edge(eid)
        if is_balanced(h)[0]:
            return True
    return False


def is_two_unbalanced(g: SignedGraph) -> bool:
    return not negativeness_at_most(g, 1)


def is_flow_admissible(g: SignedGraph) -> bool:
    """2-edge-connected unbalanced graphs are flow-admissible iff 2-unbalanced;
    balanced 2-edge-connected graphs always are; anything else is delegated to
    the exhaustive oracle."""
    two_ec = g.num_vertices() > 0 and g.is_connected() and edge_connectivity(g) >= 2
    balanced, _ = is_balanced(g)
    if two_ec and balanced:
        return True
    if two_ec and not balanced:
        return is_two_unbalanced(g)
    from . import oracle  # late import: oracle depends on this module

    verdict = oracle.brute_flow_admissible(g)
    if verdict is None:
        raise InvariantViolation("flow admissibility oracle exhausted its budget")
    return verdict


# -- local surgeries -------------------------------------------------------


def subdivide_edge(g: SignedGraph, o: Orientation | None, e: int):
    """Replace e = uv by u-x-v.  The first child edge keeps e's id and sign,
    the second is positive and fresh.  Returns (g', o', x, (e1, e2))."""
    if e not in g.edges:
        raise ArgumentError(f"unknown edge {e}")
    g2 = g.copy()
    rec = g2.edges[e]
    x = g2.new_vertex()
    g2.replace_edge(e, rec.u, x, rec.sign)
    e2 = g2.new_edge(x, rec.v, POSITIVE).id
    o2 = None
    if o is not None:
        o2 = dict(o)
        du, dv = o2[e]
        o2[e] = (du, -du if rec.sign == POSITIVE else du)
        o2[e2] = (-dv, dv)
    return g2, o2, x, (e, e2)


def smooth_degree2_vertex(g: SignedGraph, o: Orientation, f: dict, x: int):
    """Merge the two edges at a degree-2 vertex x into one edge carrying the
    common consistent flow value; the merged sign is the product of signs."""
    if x not in g.vertices:
        raise ArgumentError(f"unknown vertex {x}")
    inc = list(g.incident(x))
    if g.degree(x) != 2 or len(inc) != 2:
        raise ContractViolation(f"vertex {x} is not a smooth degree-2 vertex")
    if boundary_at(g, o, f, x) != 0:
        raise ContractViolation(f"nonzero boundary at {x}")
    e1, e2 = sorted(inc)
    o2, f2 = dict(o), dict(f)
    if end_coefficient(g.edges[e1], o2, x) == end_coefficient(g.edges[e2], o2, x):
        o2, f2 = reverse_edge(o2, f2, e2)
    r1, r2 = g.edges[e1], g.edges[e2]
    a, b = r1.other_end(x), r2.other_end(x)
    da = o2[e1][0] if r1.u == a else o2[e1][1]
    db = o2[e2][0] if r2.u == b else o2[e2][1]
    value = f2[e1]
    if f2[e2] != value:
        raise InvariantViolation("inconsistent values across degree-2 vertex")
    sign = r1.sign * r2.sign
    if (sign == POSITIVE) != (da != db):
        raise InvariantViolation("merged sign inconsistent with end-directions")
    g2 = g.copy()
    g2.remove_vertex(x)  # drops e1, e2
    g2.add_edge(e1, a, b, sign)
    o3 = {k: v for k, v in o2.items() if k != e2}
    o3[e1] = (da, db)
    f3 = {k: v for k, v in f2.items() if k != e2}
    f3[e1] = value
    return g2, o3, f3


def uncontract_at(g: SignedGraph, v: int, e: int, e2: int):
    """Split v: re-end e and e2 at a new vertex v' and join v, v' by a new
    positive edge.  Returns (g', v', new edge id)."""
    if v not in g.vertices:
        raise ArgumentError(f"unknown vertex {v}")
    if e == e2:
        raise ArgumentError("the two edges must be distinct")
    if g.degree(v) < 4:
        raise ArgumentError(f"degree of {v} is below 4")
    for eid in (e, e2):
        if eid not in g.edges or v not in g.edges[eid].ends:
            raise ArgumentError(f"edge {eid} is not incident to {v}")
    g2 = g.copy()
    vp = g2.new_vertex()
    for eid in (e, e2):
        rec = g2.edges[eid]
        if rec.is_loop():
            g2.replace_edge(eid, rec.u, vp, rec.sign)
        elif rec.u == v:
            g2.replace_edge(eid, vp, rec.v, rec.sign)
        else:
            g2.replace_edge(eid, rec.u, vp, rec.sign)
    bridge = g2.new_edge(v, vp, POSITIVE).id
    return g2, vp, bridge


# -- connectivity ----------------------------------------------------------


def edge_connectivity(g: SignedGraph) -> int:
    """Global min cut size by repeated unit-capacity max-flow; loops ignored."""
    if g.num_vertices() <= 1:
        return INFINITE_CONNECTIVITY
    if not g.is_connected():
        return 0
    verts = sorted(g.vertices)
    s = verts[0]
    best = INFINITE_CONNECTIVITY
    for t in verts[1:]:
        best = min(best, _max_flow_unit(g, s, t, best))
        if best == 0:
            break
    return best


def _max_flow_unit(g: SignedGraph, s: int, t: int, cap: int) -> int:
    # Edmonds-Karp on the undirected multigraph, one unit per edge.
    # arc_flow[eid] in {-1, 0, 1}: +1 means one unit from rec.u to rec.v.
    arc_flow = {eid: 0 for eid in g.edges if not g.edges[eid].is_loop()}
    flow = 0
    while flow < cap:
        parent = {s: None}
        queue = deque([s])
        while queue and t not in parent:
            x = queue.popleft()
            for eid in g.incident(x):
                rec = g.edges[eid]
                if rec.is_loop():
                    continue
                y = rec.other_end(x)
                if y in parent:
                    continue
                push = 1 if rec.u == x else -1  # direction x -> y
                if push * arc_flow[eid] < 1:
                    parent[y] = (x, eid)
                    queue.append(y)
        if t not in parent:
            break
        cur = t
        while parent[cur] is not None:
            x, eid = parent[cur]
            rec = g.edges[eid]
            arc_flow[eid] += 1 if rec.u == x else -1
            cur = x
        flow += 1
    return flow


def has_bridge(g: SignedGraph) -> bool:
    return len(bridges(g)) > 0


def bridges(g: SignedGraph) -> list[int]:
    """Edge ids of all cut edges; parallel edges are never bridges."""
    disc, low = {}, {}
    out = []
    counter = [0]
    for root in sorted(g.vertices):
        if root in disc:
            continue
        stack = [(root, None, iter(g.incident(root)))]
        disc[root] = low[root] = counter[0]
        counter[0] += 1
        while stack:
            x, via, it = stack[-1]
            advanced = False
            for eid in it:
                rec = g.edges[eid]
                if rec.is_loop() or eid == via:
                    continue
                y = rec.other_end(x)
                if y not in disc:
                    disc[y] = low[y] = counter[0]
                    counter[0] += 1
                    stack.append((y, eid, iter(g.incident(y))))
                    advanced = True
                    break
                low[x] = min(low[x], disc[y])
            if not advanced:
                stack.pop()
                if stack:
                    px, pvia, _ = stack[-1]
                    low[px] = min(low[px], low[x])
                    if low[x] > disc[px]:
                        out.append(via)
        continue
    return sorted(out)


# -- switching / re-expression helpers --------------------------------------


def switch_signature(g: SignedGraph, s: set) -> SignedGraph:
    """Flip the sign of every non-loop edge with exactly one end in s."""
    g2 = g.copy()
    for eid in g.edge_ids():
        rec = g.edges[eid]
        if rec.is_loop():
            continue
        if (rec.u in s) != (rec.v in s):
            g2.replace_edge(eid, rec.u, rec.v, -rec.sign)
    return g2


def reexpress_flow_after_switch(g: SignedGraph, f: dict, s: set, mod: int | None = None) -> dict:
    """Values of f re-expressed in the canonical orientation of the switched
    signature.  Switching never changes flow values, but the canonical
    orientation of an edge may come out reversed, which negates the value."""
    out = {}
    for eid, val in f.items():
        rec = g.edges[eid]
        sign = rec.sign
        if rec.is_loop():
            du = dv = AWAY
            if rec.u in s:
                du, dv = -du, -dv
            new_sign = sign
        else:
            du, dv = (AWAY, TOWARD) if sign == POSITIVE else (AWAY, AWAY)
            if rec.u in s:
                du = -du
            if rec.v in s:
                dv = -dv
            new_sign = sign * (-1) ** ((rec.u in s) + (rec.v in s))
        want = (AWAY, TOWARD) if new_sign == POSITIVE else (AWAY, AWAY)
        if (du, dv) == want:
            out[eid] = val
        else:
            out[eid] = (-val) % mod if mod is not None else -val
    return out


def find_switching_between(g_from: SignedGraph, g_to: SignedGraph) -> set:
    """A vertex set whose switching carries g_from's signature to g_to's.

    Both graphs must have identical structure; raises if the signatures are
    not switching-equivalent."""
    if set(g_from.edges) != set(g_to.edges) or g_from.vertices != g_to.vertices:
        raise ArgumentError("graphs differ structurally")
    delta = SignedGraph()
    for v in g_from.vertices:
        delta.add_vertex(v)
    for eid, rec in g_from.edges.items():
        delta.add_edge(eid, rec.u, rec.v, rec.sign * g_to.edges[eid].sign)
    balanced, cert = is_balanced(delta)
    if not balanced:
        raise InvariantViolation("signatures are not switching-equivalent")
    return cert.switching_set


# -- file formats -----------------------------------------------------------


def parse_sg(data) -> tuple[SignedGraph, Orientation | None]:
    """Parse the .sg text format.  Returns (graph, orientation-or-None)."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    lines = data.splitlines()
    g = SignedGraph()
    saw_header = False
    saw_vertices = False
    o: Orientation = {}
    directed_edges = 0
    total_edges = 0
    for idx, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not saw_header:
            if parts != ["sg", "1"]:
                raise ParseError("expected header 'sg 1'", idx)
            saw_header = True
            continue
        if parts[0] == "v":
            if saw_vertices:
                raise ParseError("duplicate vertex declaration", idx)
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError("expected 'v <count>'", idx)
            for v in range(int(parts[1])):
                g.add_vertex(v)
            saw_vertices = True
            continue
        if parts[0] == "e":
            if not saw_vertices:
                raise ParseError("edge before vertex declaration", idx)
            if len(parts) not in (5, 7):
                raise ParseError("expected 'e <id> <u> <v> <+|-> [dirs]'", idx)
            try:
                eid, u, v = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("edge fields must be integers", idx) from None
            if parts[4] not in ("+", "-"):
                raise ParseError(f"bad sign {parts[4]!r}", idx)
            sign = POSITIVE if parts[4] == "+" else NEGATIVE
            if u not in g.vertices or v not in g.vertices:
                raise ParseError(f"edge {eid} references unknown vertex", idx)
            try:
                g.add_edge(eid, u, v, sign)
            except ArgumentError as exc:
                raise ParseError(str(exc), idx) from None
            total_edges += 1
            if len(parts) == 7:
                dirs = []
                for tok in parts[5:7]:
                    if tok not in ("away", "toward"):
                        raise ParseError(f"bad direction {tok!r}", idx)
                    dirs.append(AWAY if tok == "away" else TOWARD)
                du, dv = dirs
                if sign == POSITIVE and du == dv:
                    raise ParseError(f"positive edge {eid} with equal directions", idx)
                if sign == NEGATIVE and du != dv:
                    raise ParseError(f"negative edge {eid} with opposite directions", idx)
                o[eid] = (du, dv)
                directed_edges += 1
            continue
        raise ParseError(f"unknown record {parts[0]!r}", idx)
    if not saw_header:
        raise ParseError("empty input: missing 'sg 1' header", 1)
    if not saw_vertices:
        raise ParseError("missing vertex declaration", len(lines))
    if directed_edges and directed_edges != total_edges:
        raise ParseError("direction columns must be present on all edges or none",
                         len(lines))
    return g, (o if directed_edges else None)


def serialize_sg(g: SignedGraph, o: Orientation | None = None) -> str:
    """Canonical .sg text (edges ordered by id).  Requires dense vertex ids."""
    n = g.num_vertices()
    if g.vertices != set(range(n)):
        raise ContractViolation("serialize_sg requires vertex ids 0..n-1")
    out = ["sg 1", f"v {n}"]
    for eid in g.edge_ids():
        rec = g.edges[eid]
        sign = "+" if rec.sign == POSITIVE else "-"
        line = f"e {eid} {rec.u} {rec.v} {sign}"
        if o is not None:
            du, dv = o[eid]
            names = {AWAY: "away", TOWARD: "toward"}
            line += f" {names[du]} {names[dv]}"
        out.append(line)
    return "\n".join(out) + "\n"


def parse_flow(data) -> dict:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    f = {}
    for idx, raw in enumerate(data.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected '<edge-id> <value>'", idx)
        try:
            eid, val = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError("flow fields must be integers", idx) from None
        if eid in f:
            raise ParseError(f"duplicate edge {eid}", idx)
        f[eid] = val
    return f


def serialize_flow(f: dict) -> str:
    return "\n".join(f"{eid} {f[eid]}" for eid in sorted(f)) + "\n"
