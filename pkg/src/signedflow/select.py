"""Cycle selection: pre-process, recursive selection over leaf blocks, the
fragile-case pair construction, and full postcondition validation.

Selections are deterministic: blocks, cycles and candidate pairs are always
scanned in the orders defined by :mod:`signedflow.structure`, so re-running
on the same graph reproduces the same list."""

from __future__ import annotations

import dataclasses
import itertools

from signedflow import structure
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    InvariantViolation,
    SignedGraph,
)
from signedflow.structure import (
    Cycle,
    FishCertificate,
    GoodThetaPair,
    block_cut_tree,
    enumerate_cycles,
    find_good_theta_pair,
    good_cycle_candidates,
    has_unbalanced_theta,
    iter_cycles,
    make_cycle,
    recognize_fish,
    subgraph_from_edges,
    usable_cycle_candidates,
)

POSITIVE_KIND = "positive"
ORDINARY = "negative-ordinary"
SPECIAL = "negative-special"
FISH = "fish"


@dataclasses.dataclass
class CycleRecord:
    kind: str
    vertices: tuple
    edges: tuple
    step_tag: str
    fish: FishCertificate | None = None

    def is_single_vertex(self) -> bool:
        return self.kind == POSITIVE_KIND and not self.edges

    def even_length(self) -> bool:
        return len(self.edges) % 2 == 0 and bool(self.edges)

    def trace_line(self, index: int) -> str:
        vs = " ".join(str(v) for v in self.vertices)
        return f"cycle {index} {self.kind} {vs}"


@dataclasses.dataclass
class CycleList:
    records: list

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)

    def covered_vertices(self):
        out = set()
        for r in self.records:
            out.update(r.vertices)
        return out

    def count_even_ordinary(self) -> int:
        return sum(1 for r in self.records if r.kind == ORDINARY and r.even_length())


def _record_from_cycle(g: SignedGraph, cycle: Cycle, kind: str, tag: str) -> CycleRecord:
    cycle.validate(g)
    return CycleRecord(kind, tuple(cycle.vertices), tuple(cycle.edges), tag)


def _cycle_from_edge_set(g: SignedGraph, edges) -> Cycle:
    edges = set(edges)
    start_edge = min(edges)
    rec = g.edges[start_edge]
    verts = [rec.u]
    eds = []
    cur, cur_edge = rec.u, None
    remaining = set(edges)
    while remaining:
        nxt = None
        for e in sorted(remaining):
            r = g.edges[e]
            if cur in r.ends:
                nxt = e
                break
        if nxt is None:
            raise InvariantViolation("edge set is not a single cycle")
        remaining.remove(nxt)
        eds.append(nxt)
        cur = g.edges[nxt].other_end(cur)
        if remaining:
            verts.append(cur)
    return make_cycle(g, verts, eds)


# -- pre-process -------------------------------------------------------------


def _negative_hamiltonian_cycle(g: SignedGraph) -> Cycle | None:
    """A negative cycle covering every vertex, or None."""
    n = g.num_vertices()
    if n == 0:
        return None
    if n == 1:
        loops = [e for e in g.edge_ids() if g.edges[e].is_loop()]
        for e in loops:
            if g.edges[e].sign == NEGATIVE:
                return make_cycle(g, [g.edges[e].u], [e])
        return None
    if any(g.degree(v) < 2 for v in g.vertices) or not g.is_connected():
        return None
    start = min(g.vertices)
    best = None

    def walk(path_v, path_e, used):
        nonlocal best
        if best is not None:
            return
        x = path_v[-1]
        for eid in sorted(g.incident(x)):
            rec = g.edges[eid]
            if rec.is_loop() or (path_e and eid == path_e[-1]):
                continue
            y = rec.other_end(x)
            if y == start and len(path_v) == n and eid != path_e[0]:
                sign = g.edges[eid].sign
                for e in path_e:
                    sign *= g.edges[e].sign
                if sign == NEGATIVE:
                    best = make_cycle(g, path_v, path_e + [eid])
                    return
                continue
            if y in used:
                continue
            walk(path_v + [y], path_e + [eid], used | {y})
            if best is not None:
                return

    walk([start], [], {start})
    return best


def preprocess_first(g: SignedGraph):
    """Either two vertex-disjoint negative cycles covering V(G), or a negative
    cycle whose removal leaves an unbalanced theta.  The spanning-pair case is
    searched first."""
    found, _ = structure.find_two_disjoint_negative_cycles(g, vertex_disjoint=True)
    if found != "found":
        raise ArgumentError("two vertex-disjoint negative cycles required")
    seen = set()
    for c in iter_cycles(g):
        if c.sign(g) != NEGATIVE or c.edge_set in seen:
            continue
        seen.add(c.edge_set)
        rest_v = g.vertices - c.vertex_set
        if not rest_v:
            continue
        rest = g.induced_subgraph(rest_v)
        partner = _negative_hamiltonian_cycle(rest)
        if partner is not None:
            return "spanning-pair", (c, partner)
    for c in iter_cycles(g):
        if c.sign(g) != NEGATIVE:
            continue
        rest = g.induced_subgraph(g.vertices - c.vertex_set)
        if has_unbalanced_theta(rest)[0]:
            return "theta-remainder", c
    raise InvariantViolation("pre-process found neither a spanning pair nor a theta remainder")


# -- block-restricted candidates ----------------------------------------------


def _block_candidates(gp: SignedGraph, block, usable: bool):
    """Usable (or good) generalized cycles inside a leaf block.

    Candidates measured with ambient degrees come first; block-standalone
    degrees (which may differ only at the <=1 cut vertex of a leaf block)
    are the guaranteed-nonempty fallback."""
    out = []
    for v in sorted(block.vertices):
        if gp.degree(v) <= 1:
            out.append(("vertex", v))
    fn = usable_cycle_candidates if usable else good_cycle_candidates
    seen = set()
    ambient = fn(gp, within_edges=block.edges, degree_of=gp.degree)
    for c in ambient:
        if c.edge_set not in seen:
            seen.add(c.edge_set)
            out.append(("cycle", c))
    if block.edges:
        sub = subgraph_from_edges(gp, block.edges)
        for c in fn(gp, within_edges=block.edges, degree_of=sub.degree):
            if c.edge_set not in seen:
                seen.add(c.edge_set)
                out.append(("cycle", c))
    return out


# -- the fragile-case pair -----------------------------------------------------


def _cycles_through_path(g: SignedGraph, pair: GoodThetaPair):
    """The two theta cycles containing Q; returns (positive one, negative one)."""
    d = pair.cycle
    x, y = pair.path_vertices[0], pair.path_vertices[-1]
    arc_xy, arc_yx = structure._cycle_arcs(d, x, y)
    built = []
    for arc in (list(arc_yx), list(reversed(arc_xy))):
        # Q runs x..y; the arc edges are ordered to walk y back to x
        vlist = list(pair.path_vertices)
        walk = y
        for e in arc[:-1]:
            walk = g.edges[e].other_end(walk)
            vlist.append(walk)
        built.append(make_cycle(g, vlist, list(pair.path_edges) + arc))
    signs = [c.sign(g) for c in built]
    if sorted(signs) != [NEGATIVE, POSITIVE]:
        raise InvariantViolation("theta cycles through Q do not split by sign")
    pos = built[0] if signs[0] == POSITIVE else built[1]
    neg = built[0] if signs[0] == NEGATIVE else built[1]
    return pos, neg


def _negative_cycles_of(g: SignedGraph):
    out = []
    seen = set()
    for c in iter_cycles(g):
        if c.sign(g) == NEGATIVE and c.edge_set not in seen:
            seen.add(c.edge_set)
            out.append(c)
    return out


def _pair_conditions(gp: SignedGraph, c0: Cycle, c1: Cycle):
    """The four requirements on a fragile-case pair; returns (ok, j) where j
    counts even-length negative cycles of either deletion."""
    if c1.sign(gp) != NEGATIVE or c0.sign(gp) != POSITIVE:
        return False, None
    deg2_on_c1 = sum(1 for v in c1.vertices if gp.degree(v) == 2)
    rest1 = gp.induced_subgraph(gp.vertices - c1.vertex_set)
    if has_unbalanced_theta(rest1)[0]:
        return False, None
    rest0 = gp.induced_subgraph(gp.vertices - c0.vertex_set)
    neg0 = _negative_cycles_of(rest0)
    neg1 = _negative_cycles_of(rest1)
    even0 = {c.edge_set for c in neg0 if len(c) % 2 == 0}
    even1 = {c.edge_set for c in neg1 if len(c) % 2 == 0}
    if even0 != even1:
        return False, None
    if deg2_on_c1 >= 2:
        return True, len(even0)
    if deg2_on_c1 >= 1 and len(neg1) <= 2:
        return True, len(even0)
    return False, None


def beast_pair(gp: SignedGraph):
    """Fish certificate, or a (good C0, negative C1) pair meeting the four
    fragile-case conditions.  The constructive good-theta-pair route is tried
    first, then verified exhaustive search."""
    cert = recognize_fish(gp)
    if cert is not None:
        return "fish", cert
    pair = find_good_theta_pair(gp)
    if pair is not None:
        c0, c1 = _cycles_through_path(gp, pair)
        ok, j = _pair_conditions(gp, c0, c1)
        if ok:
            return "pair", (c0, c1, j)
    good = good_cycle_candidates(gp)
    for c1 in _negative_cycles_of(gp):
        for c0 in good:
            if c0.edge_set == c1.edge_set:
                continue
            ok, j = _pair_conditions(gp, c0, c1)
            if ok:
                return "pair", (c0, c1, j)
    raise InvariantViolation("no fragile-case pair and graph is not a fish")


# -- the algorithm -------------------------------------------------------------


def run_csa(g: SignedGraph) -> CycleList:
    """Cycle Selection Algorithm on a cubic 3-edge-connected signed graph with
    two vertex-disjoint negative cycles."""
    case, payload = preprocess_first(g)
    if case == "spanning-pair":
        c1, c2 = payload
        return CycleList([
            _record_from_cycle(g, c1, SPECIAL, "preprocess-1"),
            _record_from_cycle(g, c2, SPECIAL, "preprocess-1"),
        ])
    records = [_record_from_cycle(g, payload, SPECIAL, "preprocess-2")]
    step8_done = False
    while True:
        removed = set()
        for r in records:
            removed.update(r.vertices)
        gp = g.induced_subgraph(g.vertices - removed)
        if not gp.vertices:
            return CycleList(records)
        theta_now, _ = has_unbalanced_theta(gp)
        if step8_done and theta_now:
            raise InvariantViolation("unbalanced theta survived the fragile step")

        bct = block_cut_tree(gp)
        leaves = bct.leaf_blocks()
        if not leaves:
            raise InvariantViolation("no leaf block in nonempty residual graph")

        if not theta_now:
            cands = _block_candidates(gp, leaves[0], usable=True)
            if not cands:
                raise InvariantViolation("leaf block offers no usable cycle")
            kind_tag, item = cands[0]
            if kind_tag == "vertex":
                records.append(CycleRecord(POSITIVE_KIND, (item,), (), "step3"))
            else:
                kind = ORDINARY if item.sign(gp) == NEGATIVE else POSITIVE_KIND
                records.append(_record_from_cycle(gp, item, kind, "step3"))
            continue

        # an unbalanced theta must survive until the fragile step, so the
        # leaf-block and cycle choices are scanned jointly for a pick whose
        # removal keeps one; leaves whose whole removal keeps a theta first
        def whole_keeps(b):
            rest = gp.induced_subgraph(gp.vertices - b.vertices)
            return has_unbalanced_theta(rest)[0]

        ordered = [b for b in leaves if whole_keeps(b)]
        ordered += [b for b in leaves if b not in ordered]
        picked = None
        for block in ordered:
            if block.is_cycle():
                cyc = _cycle_from_edge_set(gp, block.edges)
                if cyc.sign(gp) == NEGATIVE:
                    cand_list = [("step4", "cycle", cyc)]
                else:
                    cand_list = [("step6", tag, item)
                                 for tag, item in _block_candidates(gp, block, usable=False)]
            else:
                cand_list = [("step6", tag, item)
                             for tag, item in _block_candidates(gp, block, usable=False)]
            for step_tag, kind_tag, item in cand_list:
                vs = {item} if kind_tag == "vertex" else item.vertex_set
                rest = gp.induced_subgraph(gp.vertices - set(vs))
                if has_unbalanced_theta(rest)[0]:
                    picked = (step_tag, kind_tag, item)
                    break
            if picked:
                break
        if picked is not None:
            step_tag, kind_tag, item = picked
            if step_tag == "step4":
                records.append(_record_from_cycle(gp, item, ORDINARY, "step4"))
            elif kind_tag == "vertex":
                records.append(CycleRecord(POSITIVE_KIND, (item,), (), "step6"))
            else:
                records.append(_record_from_cycle(gp, item, POSITIVE_KIND, "step6"))
            continue

        # fragile case: the residual must be the single chosen block
        if step8_done:
            raise InvariantViolation("fragile step reached twice")
        sub_bct = block_cut_tree(gp)
        if len(sub_bct.blocks) != 1 or sub_bct.cut_vertices:
            raise InvariantViolation("fragile residual is not 2-connected")
        k_count = sum(1 for r in records if r.kind == ORDINARY and r.even_length())
        cert = recognize_fish(gp)
        if cert is not None:
            if k_count % 2 == 1:
                rec = CycleRecord(FISH, tuple(sorted(gp.vertices)),
                                  tuple(sorted(gp.edges)), "step8a-fish", fish=cert)
                records.append(rec)
                step8_done = True
                continue
            cands = good_cycle_candidates(gp)
            if not cands:
                raise InvariantViolation("fish residual has no good cycle")
            records.append(_record_from_cycle(gp, cands[0], POSITIVE_KIND, "step8a-good"))
            step8_done = True
            continue
        what, payload = beast_pair(gp)
        if what == "fish":
            raise InvariantViolation("fish recognition disagreed with beast_pair")
        c0, c1, j = payload
        if (k_count + j) % 2 == 0:
            records.append(_record_from_cycle(gp, c1, SPECIAL, "step8b-special"))
        else:
            records.append(_record_from_cycle(gp, c0, POSITIVE_KIND, "step8b-positive"))
        step8_done = True


# -- validation ----------------------------------------------------------------


@dataclasses.dataclass
class ValidationVerdict:
    ok: bool
    failures: list

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "accept"
        return "reject: " + "; ".join(f"{name} ({detail})" for name, detail in self.failures)


def _edge_cut_sides(g: SignedGraph, cut_edges):
    """If the edge set is delta(X) for some X, return (comp_of, colors);
    otherwise None.  Sides of small cuts are 2-colored components."""
    rest = g.copy()
    for e in cut_edges:
        rest.remove_edge(e)
    comps = rest.components()
    comp_of = {}
    for i, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = i
    for e in cut_edges:
        rec = g.edges[e]
        if comp_of[rec.u] == comp_of[rec.v]:
            return None
    colors = {0: 0}
    queue = [0]
    adj = {}
    for e in cut_edges:
        rec = g.edges[e]
        a, b = comp_of[rec.u], comp_of[rec.v]
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    while queue:
        x = queue.pop()
        for y in adj.get(x, []):
            if y not in colors:
                colors[y] = 1 - colors[x]
                queue.append(y)
            elif colors[y] == colors[x]:
                return None
    if len(colors) != len(comps):
        return None  # disconnected side structure: not a single cut
    return comp_of, colors


def _straddles(g, cycle_edges, cut_edges, comp_of, colors) -> bool:
    inside = [e for e in cycle_edges if e not in cut_edges]
    seen_colors = set()
    for e in inside:
        rec = g.edges[e]
        seen_colors.add(colors[comp_of[rec.u]])
    return {0, 1} <= seen_colors


def validate_cycle_list(g: SignedGraph, cl: CycleList) -> ValidationVerdict:
    """Check every published postcondition of the selection algorithm, with
    named-witness failures."""
    failures = []
    records = cl.records

    seen = set()
    for r in records:
        vs = set(r.vertices)
        if vs & seen:
            failures.append(("cycle-disjoint-cover", f"overlap at {sorted(vs & seen)}"))
        seen |= vs
    if seen != g.vertices:
        failures.append(("cycle-disjoint-cover", f"missing {sorted(g.vertices - seen)}"))

    if not records or records[0].kind != SPECIAL:
        failures.append(("first-cycle-special", "first record is not negative special"))
    specials = [i for i, r in enumerate(records) if r.kind == SPECIAL]
    if len(specials) > 2:
        failures.append(("at-most-two-specials", f"{len(specials)} special records"))

    for j, r in enumerate(records):
        if r.kind != SPECIAL or j == 0:
            continue
        earlier = set()
        for rr in records[:j]:
            earlier.update(rr.vertices)
        back = sum(1 for rec in g.edges.values()
                   if not rec.is_loop()
                   and ((rec.u in earlier and rec.v in r.vertices)
                        or (rec.v in earlier and rec.u in r.vertices)))
        ordinaries_after = sum(1 for rr in records[j + 1:] if rr.kind == ORDINARY)
        if not (back >= 2 or (back >= 1 and ordinaries_after <= 2)):
            failures.append(("special-attachment", f"record {j}: back={back}, after={ordinaries_after}"))

    for j, r in enumerate(records):
        if r.kind == FISH and j != len(records) - 1:
            failures.append(("fish-last", f"fish at position {j} of {len(records)}"))

    for j, r in enumerate(records):
        if r.kind != ORDINARY:
            continue
        vs = set(r.vertices)
        induced_edges = sum(1 for rec in g.edges.values()
                            if not rec.is_loop() and rec.u in vs and rec.v in vs)
        if induced_edges != len(r.edges):
            failures.append(("ordinary-induced", f"record {j} has a chord"))
        later = set()
        for rr in records[j + 1:]:
            later.update(rr.vertices)
        fwd = sum(1 for rec in g.edges.values()
                  if not rec.is_loop()
                  and ((rec.u in vs and rec.v in later) or (rec.v in vs and rec.u in later)))
        if fwd > 1:
            failures.append(("ordinary-forward-edges", f"record {j}: {fwd} forward edges"))

    for j, r in enumerate(records):
        if r.kind != POSITIVE_KIND:
            continue
        earlier = set()
        for rr in records[:j]:
            earlier.update(rr.vertices)
        if r.is_single_vertex():
            v = r.vertices[0]
            back = sum(1 for rec in g.edges.values()
                       if not rec.is_loop() and ((rec.u == v and rec.v in earlier)
                                                 or (rec.v == v and rec.u in earlier)))
            if back < 2:
                failures.append(("positive-attachment", f"single-vertex record {j}: {back} back edges"))
            continue
        with_back = set()
        for rec in g.edges.values():
            if rec.is_loop():
                continue
            if rec.u in r.vertices and rec.v in earlier:
                with_back.add(rec.u)
            if rec.v in r.vertices and rec.u in earlier:
                with_back.add(rec.v)
        ok = len(with_back) >= 2
        if not ok and len(with_back) == 1:
            later_incl = set(r.vertices)
            for rr in records[j:]:
                later_incl.update(rr.vertices)
            from signedflow.sigraph import bridges

            sub = g.induced_subgraph(later_incl)
            bridge_ends = set()
            for e in bridges(sub):
                bridge_ends.update(sub.edges[e].ends)
            x = next(iter(with_back))
            ok = any(y != x for y in bridge_ends if y in r.vertices)
        if not ok:
            failures.append(("positive-attachment", f"record {j}"))

    parity = cl.count_even_ordinary() + len(specials)
    if parity % 2 != 0:
        failures.append(("even-ordinary-special-parity", f"count {parity} is odd"))

    evens = [r for r in records if r.kind == ORDINARY and r.even_length()]
    watch = evens[:-2] if len(evens) > 2 else []
    all_eids = g.edge_ids()
    for r in watch:
        for pair in itertools.combinations(r.edges, 2):
            for extra in all_eids:
                if extra in pair:
                    continue
                cut = set(pair) | {extra}
                sides = _edge_cut_sides(g, cut)
                if sides and _straddles(g, r.edges, cut, *sides):
                    failures.append(("straddle-3cut", f"cut {sorted(cut)}"))
                    break
            else:
                continue
            break
    for r1, r2 in itertools.combinations(watch, 2):
        done = False
        for p1 in itertools.combinations(r1.edges, 2):
            for p2 in itertools.combinations(r2.edges, 2):
                cut = set(p1) | set(p2)
                if len(cut) != 4:
                    continue
                sides = _edge_cut_sides(g, cut)
                if sides and _straddles(g, r1.edges, cut, *sides) \
                        and _straddles(g, r2.edges, cut, *sides):
                    failures.append(("double-straddle-4cut", f"cut {sorted(cut)}"))
                    done = True
                    break
            if done:
                break

    return ValidationVerdict(not failures, failures)
