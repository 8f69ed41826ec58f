"""Reductions: make the instance cubic, split on balanced 3-cuts, and solve
flows with prescribed values on a three-edge vertex star.

Uncontraction steps are invertible on flows: the re-ended edges keep their
ids and record slots, so pulling a verified k-flow back through a step is a
restriction to the original edge set."""

from __future__ import annotations

import dataclasses
import itertools

from signedflow import kernel, structure
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    InvariantViolation,
    SignedGraph,
    canonical_orientation,
    edge_connectivity,
    is_balanced,
    is_flow_admissible,
    is_two_unbalanced,
    reexpress_flow_after_switch,
    switch_signature,
    uncontract_at,
    verify_flow,
)


@dataclasses.dataclass
class UncontractStep:
    vertex: int
    edge: int
    edge2: int
    new_vertex: int
    new_edge: int

    def trace_line(self):
        return (f"step uncontract {self.vertex} {self.edge} {self.edge2} "
                f"{self.new_vertex} {self.new_edge}")


@dataclasses.dataclass
class SplitStep:
    y_side: frozenset
    cut_edges: tuple

    def trace_line(self):
        ys = " ".join(str(v) for v in sorted(self.y_side))
        es = " ".join(str(e) for e in self.cut_edges)
        return f"step split-balanced-3cut edges {es} side {ys}"


def uncontract_to_cubic(g: SignedGraph):
    """Uncontract degree->=4 vertices until cubic, keeping the graph
    3-edge-connected and 2-unbalanced at every step.

    Terminates in exactly sum(deg(v) - 3) steps.  Raises InvariantViolation
    when no valid companion edge exists (hypothesis failure or bug)."""
    if any(g.degree(v) < 3 for v in g.vertices):
        raise ArgumentError("minimum degree 3 required")
    cur = g.copy()
    steps: list[UncontractStep] = []
    while True:
        high = sorted(v for v in cur.vertices if cur.degree(v) > 3)
        if not high:
            return cur, steps
        v = high[0]
        e = min(cur.incident(v))
        done = False
        for e2 in sorted(x for x in cur.incident(v) if x != e):
            cand, vp, bridge = uncontract_at(cur, v, e, e2)
            if edge_connectivity(cand) >= 3 and is_two_unbalanced(cand):
                steps.append(UncontractStep(v, e, e2, vp, bridge))
                cur = cand
                done = True
                break
        if not done:
            raise InvariantViolation(
                f"no companion edge keeps 3EC and 2-unbalancedness at vertex {v}")


def pullback_flow(g_original: SignedGraph, flow: dict) -> dict:
    """Flow of the uncontracted graph restricted to the original edges;
    contracting each added positive edge preserves all boundaries."""
    return {eid: flow[eid] for eid in g_original.edges}


def find_balanced_3cut(g: SignedGraph):
    """A vertex set Y with |Y| >= 2, d(Y) = 3 and G[Y] balanced, or None.

    The three cut edges of a 3-edge-connected cubic graph are pairwise
    non-adjacent, so candidate cuts are enumerated over edge matchings.
    When both sides qualify the smaller one is returned."""
    eids = g.edge_ids()
    nonloop = [e for e in eids if not g.edges[e].is_loop()]
    best = None
    for trio in itertools.combinations(nonloop, 3):
        ends = set()
        clash = False
        for e in trio:
            rec = g.edges[e]
            if rec.u in ends or rec.v in ends:
                clash = True
                break
            ends.update(rec.ends)
        if clash:
            continue
        rest = g.copy()
        for e in trio:
            rest.remove_edge(e)
        comps = rest.components()
        if len(comps) != 2:
            continue
        if any((g.edges[e].u in comps[0]) == (g.edges[e].v in comps[0]) for e in trio):
            continue  # some trio edge does not cross: d(side) < 3
        sides = sorted(comps, key=lambda c: (len(c), min(c)))
        for side in sides:
            if len(side) < 2 or len(g.vertices - side) < 1:
                continue
            if is_balanced(g.induced_subgraph(side))[0]:
                cand = frozenset(side)
                if best is None or (len(cand), sorted(cand)) < (len(best), sorted(best)):
                    best = cand
                break
    return best


def prescribed_boundary_flow(g: SignedGraph, v: int, values: tuple, k: int,
                             node_limit: int = 0) -> dict:
    """Nowhere-zero k-flow with prescribed values on the three edges at v.

    Uses the canonical orientation; the three edge records at v must have v
    in their first slot (so canonically directed away from v).  Solved by
    exhaustive backtracking, then verified."""
    inc = list(g.incident(v))
    if len(inc) != 3 or g.degree(v) != 3:
        raise ArgumentError(f"vertex {v} must be incident to exactly three edges")
    for eid in inc:
        rec = g.edges[eid]
        if rec.u != v:
            raise ArgumentError(f"edge {eid} is not canonically directed away from {v}")
        if rec.sign != POSITIVE:
            raise ArgumentError(f"edge {eid} at {v} must be positive")
    for rec in g.edges.values():
        if rec.sign == NEGATIVE and not rec.is_loop():
            raise ArgumentError("all non-loop edges must be positive")
        if rec.sign == NEGATIVE and v in rec.ends:
            raise ArgumentError("negative loops must stay away from v")
    if k < 6:
        raise ArgumentError("k must be at least 6")
    g1, g2, g3 = values
    if g1 + g2 + g3 != 0 or any(x == 0 or abs(x) > k - 1 for x in values):
        raise ArgumentError("prescribed values must be nonzero, in range, summing to 0")
    if edge_connectivity(g) < 2:
        raise ArgumentError("2-edge-connected graph required")
    prescriptions = dict(zip(sorted(inc), values))
    # values are attached to the sorted edge ids at v in the order given
    o = canonical_orientation(g)
    from signedflow.oracle import boundary_entries

    status, flow, _ = kernel.search_flow(boundary_entries(g, o), k,
                                         prescribed=prescriptions,
                                         node_limit=node_limit)
    if status == kernel.STATUS_UNKNOWN:
        raise InvariantViolation("prescribed flow search exhausted its budget")
    if status == kernel.STATUS_NO:
        raise InvariantViolation("prescribed flow does not exist; hypotheses violated")
    verdict = verify_flow(g, o, flow, k)
    if not verdict.ok:
        raise InvariantViolation(f"prescribed flow failed verification: {verdict.describe()}")
    for eid, val in prescriptions.items():
        if flow[eid] != val:
            raise InvariantViolation("prescription not honoured")
    return flow


def _normalize_y_positive(g: SignedGraph, y_side: frozenset):
    """Switching set making every edge incident with Y positive.

    Balances G[Y] first; each still-negative cut edge is fixed by switching
    at its X endpoint (cut edges are pairwise non-adjacent)."""
    sub = g.induced_subgraph(y_side)
    balanced, cert = is_balanced(sub)
    if not balanced:
        raise ArgumentError("G[Y] is not balanced")
    switches = set(cert.switching_set)
    gs = switch_signature(g, switches)
    for eid in sorted(gs.edges):
        rec = gs.edges[eid]
        if rec.is_loop():
            continue
        inside = (rec.u in y_side) + (rec.v in y_side)
        if inside == 1 and rec.sign == NEGATIVE:
            x_end = rec.u if rec.u not in y_side else rec.v
            if x_end in switches:
                switches.remove(x_end)
            else:
                switches.add(x_end)
    gs = switch_signature(g, switches)
    for eid, rec in gs.edges.items():
        if (rec.u in y_side or rec.v in y_side) and rec.sign == NEGATIVE:
            raise InvariantViolation("Y-positivity normalization failed")
    return gs, switches


def split_and_merge(g: SignedGraph, y_side: frozenset, solve_inner,
                    solve_outer=None, k: int = 8):
    """Contract each side of a balanced 3-cut, solve the Y-contracted graph
    recursively, match it with a prescribed flow on the X-contracted one and
    combine.  Returns (flow on g, SplitStep, inner_result).

    ``solve_inner(subgraph)`` must return (flow, payload); ``solve_outer``
    defaults to prescribed_boundary_flow."""
    y_side = frozenset(y_side)
    if len(y_side) < 2 or not y_side < g.vertices:
        raise ArgumentError("Y must be a proper subset with at least 2 vertices")
    cut = sorted(e for e, rec in g.edges.items()
                 if not rec.is_loop() and (rec.u in y_side) != (rec.v in y_side))
    if len(cut) != 3:
        raise ArgumentError("Y is not a 3-edge cut side")
    gs, switches = _normalize_y_positive(g, y_side)
    x_side = gs.vertices - y_side

    g_y = SignedGraph()
    for v in sorted(x_side):
        g_y.add_vertex(v)
    y_new = max(gs.vertices) + 1
    g_y.add_vertex(y_new)
    for eid in sorted(gs.edges):
        rec = gs.edges[eid]
        if rec.u in x_side and rec.v in x_side:
            g_y.add_edge(eid, rec.u, rec.v, rec.sign)
        elif eid in cut:
            x_end = rec.u if rec.u in x_side else rec.v
            g_y.add_edge(eid, x_end, y_new, rec.sign)

    g_x = SignedGraph()
    for v in sorted(y_side):
        g_x.add_vertex(v)
    x_new = max(gs.vertices) + 2
    g_x.add_vertex(x_new)
    for eid in sorted(gs.edges):
        rec = gs.edges[eid]
        if rec.u in y_side and rec.v in y_side:
            g_x.add_edge(eid, rec.u, rec.v, rec.sign)
        elif eid in cut:
            y_end = rec.u if rec.u in y_side else rec.v
            g_x.add_edge(eid, x_new, y_end, rec.sign)

    if not is_flow_admissible(g_y):
        raise InvariantViolation("Y-contracted graph is not flow-admissible")
    flow_y, inner_payload = solve_inner(g_y)
    verdict = verify_flow(g_y, canonical_orientation(g_y), flow_y, k)
    if not verdict.ok:
        raise InvariantViolation(f"inner flow invalid: {verdict.describe()}")

    prescriptions = tuple(flow_y[e] for e in sorted(cut))
    if solve_outer is None:
        flow_x = prescribed_boundary_flow(g_x, x_new, prescriptions, k)
    else:
        flow_x = solve_outer(g_x, x_new, prescriptions, k)

    for e in cut:
        if flow_x[e] != flow_y[e]:
            raise InvariantViolation("cut values differ between the two sub-flows")

    combined = {}
    for eid, rec in gs.edges.items():
        if rec.u in x_side and rec.v in x_side:
            combined[eid] = flow_y[eid]
        elif rec.u in y_side and rec.v in y_side:
            combined[eid] = flow_x[eid]
        else:
            # sub-records are directed X->Y; flip the value when the original
            # record happens to point Y->X
            factor = 1 if rec.u in x_side else -1
            combined[eid] = factor * flow_y[eid]
    verdict = verify_flow(gs, canonical_orientation(gs), combined, k)
    if not verdict.ok:
        raise InvariantViolation(f"combined flow invalid: {verdict.describe()}")
    flow_g = reexpress_flow_after_switch(gs, combined, switches)
    verdict = verify_flow(g, canonical_orientation(g), flow_g, k)
    if not verdict.ok:
        raise InvariantViolation(f"unswitched flow invalid: {verdict.describe()}")
    return flow_g, SplitStep(y_side, tuple(cut)), inner_payload
