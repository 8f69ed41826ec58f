"""End-to-end synthesis: admissibility routing, reduction, cycle selection,
preflow, lift, assembly, plus machine-readable certificates and their
search-free replay.

Certificate sections nest: a `solve` section carries the graph it solves,
the path taken, path-specific evidence, and the flow found.  Replaying
re-verifies every stage with the recorded data and deterministic
reconstructions only; no searches are repeated."""

from __future__ import annotations

import dataclasses
import hashlib

from signedflow import kernel, lift as lift_mod, preflow as preflow_mod
from signedflow import reduce as reduce_mod
from signedflow import select as select_mod
from signedflow import structure
from signedflow.oracle import SearchBudget, nz_kflow_exists
from signedflow.select import CycleList, CycleRecord, FISH
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    InvariantViolation,
    SignedFlowError,
    SignedGraph,
    canonical_orientation,
    edge_connectivity,
    is_balanced,
    is_two_unbalanced,
    bridges,
    reexpress_flow_after_switch,
    switch_signature,
    uncontract_at,
    verify_flow,
)


class NotFlowAdmissible(SignedFlowError):
    pass


class UnsupportedInstance(SignedFlowError):
    """Hypotheses unmet and the oracle fallback could not conclude."""


@dataclasses.dataclass
class SynthesisResult:
    flow: dict
    k_used: int
    path: str
    certificate: str
    csa_runs: list


DEFAULT_FALLBACK_NODES = 5_000_000


def synthesize(g: SignedGraph, fallback_budget: int = DEFAULT_FALLBACK_NODES,
               collect_csa: list | None = None) -> SynthesisResult:
    """Nowhere-zero 8-flow (canonically oriented values) with certificate."""
    lines: list[str] = []
    csa_runs: list = [] if collect_csa is None else collect_csa
    flow, k_used, path = _solve(g, lines, fallback_budget, csa_runs)
    verdict = verify_flow(g, canonical_orientation(g), flow, 8)
    if not verdict.ok:
        raise InvariantViolation(f"synthesized flow rejected: {verdict.describe()}")
    return SynthesisResult(flow, k_used, path, "\n".join(lines) + "\n", csa_runs)


def _emit_graph(g: SignedGraph, out: list):
    out.append(f"graph {g.num_vertices()} {g.num_edges()}")
    out.append("gv " + " ".join(str(v) for v in sorted(g.vertices)))
    for e in g.edge_ids():
        rec = g.edges[e]
        sign = "+" if rec.sign == POSITIVE else "-"
        out.append(f"ge {e} {rec.u} {rec.v} {sign}")


def _emit_flow(flow: dict, out: list, prefix: str = "flow"):
    for e in sorted(flow):
        out.append(f"{prefix} {e} {flow[e]}")


def _detach(g: SignedGraph) -> SignedGraph:
    """Content-determined copy: fresh id counters so that new-vertex and
    new-edge ids depend only on what the certificate records."""
    h = SignedGraph()
    for v in sorted(g.vertices):
        h.add_vertex(v)
    for e in sorted(g.edges):
        rec = g.edges[e]
        h.add_edge(e, rec.u, rec.v, rec.sign)
    return h


def _solve(g: SignedGraph, out: list, budget: int, csa_runs: list):
    g = _detach(g)
    out.append("begin solve")
    _emit_graph(g, out)
    try:
        flow, k_used, path = _solve_inner(g, out, budget, csa_runs)
    except SignedFlowError:
        out.append("end solve")
        raise
    _emit_flow(flow, out)
    out.append("end solve")
    return flow, k_used, path


def _solve_inner(g: SignedGraph, out: list, budget: int, csa_runs: list):
    if g.num_edges() == 0:
        out.append("path trivial")
        return {}, 2, "trivial"
    comps = g.components()
    if len(comps) > 1:
        out.append("path components")
        flow = {}
        k_used = 2
        for comp in comps:
            sub = g.induced_subgraph(comp)
            f, k, _ = _solve(sub, out, budget, csa_runs)
            flow.update(f)
            k_used = max(k_used, k)
        return flow, k_used, "components"

    balanced, _ = is_balanced(g)
    if balanced:
        if bridges(g):
            raise NotFlowAdmissible("balanced graph with a bridge")
        return _oracle_path(g, out, budget, max_k=6, label="balanced-oracle")

    two_ec = edge_connectivity(g) >= 2
    if not two_ec:
        # a bridge can still carry value 2 between unbalanced sides
        return _oracle_path(g, out, budget, max_k=8, label="oracle-direct")
    if not is_two_unbalanced(g):
        raise NotFlowAdmissible("2-edge-connected unbalanced but not 2-unbalanced")
    if edge_connectivity(g) < 3:
        edge_disjoint, _ = structure.find_two_disjoint_negative_cycles(
            g, vertex_disjoint=False)
        max_k = 6 if edge_disjoint != "found" else 8
        return _oracle_path(g, out, budget, max_k=max_k, label="oracle-direct")

    if any(g.degree(v) > 3 for v in g.vertices):
        cubic, steps = reduce_mod.uncontract_to_cubic(g)
        out.append("path uncontract")
        for s in steps:
            out.append(s.trace_line())
        sub_flow, k_used, _ = _solve(cubic, out, budget, csa_runs)
        flow = reduce_mod.pullback_flow(g, sub_flow)
        return flow, k_used, "uncontract"

    y_side = reduce_mod.find_balanced_3cut(g)
    if y_side is not None:
        out.append("path split")
        inner_holder = {}

        def solve_inner(g_y):
            f, k, p = _solve(g_y, out, budget, csa_runs)
            inner_holder["k"] = k
            return f, p

        flow, step, _ = reduce_mod.split_and_merge(g, y_side, solve_inner)
        gs, switches = reduce_mod._normalize_y_positive(g, y_side)
        out.append(step.trace_line())
        out.append("switch " + " ".join(str(v) for v in sorted(switches)))
        return flow, max(8, inner_holder.get("k", 8)), "split"

    found, _ = structure.find_two_disjoint_negative_cycles(g, vertex_disjoint=True)
    if found == "unknown":
        raise UnsupportedInstance("disjoint negative cycle search exhausted")
    if found != "found":
        # no two vertex-disjoint (= edge-disjoint on cubic graphs): 6-flow route
        return _oracle_path(g, out, budget, max_k=6, label="oracle-no2disj")
    return _main_path(g, out, csa_runs)


def _oracle_path(g, out, budget, max_k: int, label: str):
    out.append(f"path {label}")
    saw_unknown = False
    for k in range(2, max_k + 1):
        verdict = nz_kflow_exists(g, None, k, SearchBudget(node_limit=budget))
        out.append(f"oracle {k} {verdict.status}")
        if verdict.status == "yes":
            out.append(f"k {k}")
            return verdict.witness, k, label
        if verdict.status == "unknown":
            saw_unknown = True
    if saw_unknown:
        raise UnsupportedInstance(f"oracle fallback budget exhausted below k={max_k}")
    raise NotFlowAdmissible(f"no nowhere-zero k-flow for k <= {max_k}")


def _main_path(g: SignedGraph, out: list, csa_runs: list):
    out.append("path main")
    cl = select_mod.run_csa(g)
    csa_runs.append((g, cl))
    verdict = select_mod.validate_cycle_list(g, cl)
    if not verdict.ok:
        raise InvariantViolation(f"cycle list invalid: {verdict.describe()}")
    for i, rec in enumerate(cl.records):
        out.append(f"cycle {i} {rec.kind} {rec.step_tag}")
        out.append(f"cyclev {i} " + " ".join(str(v) for v in rec.vertices))
        out.append(f"cyclee {i} " + " ".join(str(e) for e in rec.edges))
        if rec.kind == FISH:
            out.append(f"fishdist {i} {rec.fish.distinguished_edge}")
            out.append(f"fishpath {i} " + " ".join(str(e) for e in rec.fish.path_edges))

    g_star, cl_star, subs = preflow_mod.subdivide_for_parity(g, cl)
    for s in subs:
        out.append(s.trace_line())
    g_n, switch_log = preflow_mod.normalize_cycle_signature(g_star, cl_star)
    for i, sw in enumerate(switch_log):
        if sw:
            out.append(f"resign {i} " + " ".join(str(v) for v in sorted(sw)))
    pf = preflow_mod.build_preflow(g_n, cl_star, subs)
    preflow_mod.audit_preflow(g_n, cl_star, subs, pf)
    for k, y, cut_edge, comp, flipped in pf.negation_events:
        out.append(f"negate {k} {y} {cut_edge} " + " ".join(str(v) for v in comp))
    out.extend(pf.trace_lines())

    aux = lift_mod.build_auxiliary(g_n, pf)
    out.append("zswitch " + " ".join(str(v) for v in sorted(aux.z_switch)))
    hyp = lift_mod.check_matching_hypotheses(aux, cl_star, subs)
    if not hyp.all_ok():
        raise InvariantViolation(f"matching hypotheses failed: {hyp.describe()}")
    matching = lift_mod.maximum_matching(aux.graph)
    if not lift_mod.is_perfect(aux.graph, matching):
        raise InvariantViolation("auxiliary graph has no perfect matching")
    for u in sorted(matching):
        if u < matching[u]:
            out.append(f"match {u} {matching[u]}")
    psi = lift_mod.lift_to_integer(aux, matching)
    _emit_flow(psi, out, "psi")
    tau = lift_mod.build_tau(aux, cl_star, psi, subs)
    _emit_flow({e: v for e, v in tau.items() if v}, out, "tau")
    flow, f_star, smooth_switch = lift_mod.assemble_flow(aux, cl_star, subs, psi, tau, g)
    _emit_flow(f_star, out, "fstar")
    out.append("smoothswitch " + " ".join(str(v) for v in sorted(smooth_switch)))
    return flow, 8, "main"


# -- certificate replay ---------------------------------------------------------


def wrap_certificate(body: str, input_bytes: bytes) -> str:
    digest = hashlib.sha256(input_bytes).hexdigest()
    return f"cert 1\ninput sha256 {digest}\n{body}"


class _Section:
    def __init__(self, lines):
        self.lines = lines

    @classmethod
    def parse(cls, lines, start):
        if lines[start] != "begin solve":
            raise InvariantViolation(f"expected 'begin solve' at line {start}")
        depth = 0
        for i in range(start, len(lines)):
            if lines[i] == "begin solve":
                depth += 1
            elif lines[i] == "end solve":
                depth -= 1
                if depth == 0:
                    return cls(lines[start + 1:i]), i + 1
        raise InvariantViolation("unterminated solve section")

    def graph(self) -> SignedGraph:
        g = SignedGraph()
        own, _ = self.top_level()
        for ln in own:
            parts = ln.split()
            if parts[0] == "gv":
                for v in parts[1:]:
                    g.add_vertex(int(v))
            elif parts[0] == "ge":
                sign = POSITIVE if parts[4] == "+" else NEGATIVE
                g.add_edge(int(parts[1]), int(parts[2]), int(parts[3]), sign)
        return g

    def top_level(self):
        """Lines of this section outside nested subsections, plus subsections."""
        own = []
        subs = []
        i = 0
        while i < len(self.lines):
            if self.lines[i] == "begin solve":
                sub, nxt = _Section.parse(self.lines, i)
                subs.append(sub)
                i = nxt
            else:
                own.append(self.lines[i])
                i += 1
        return own, subs

    def field(self, key):
        own, _ = self.top_level()
        for ln in own:
            if ln.startswith(key + " "):
                return ln[len(key) + 1:]
        return None

    def collect(self, key):
        own, _ = self.top_level()
        return [ln[len(key) + 1:] for ln in own if ln.startswith(key + " ")]

    def flow(self, prefix="flow") -> dict:
        out = {}
        for rest in self.collect(prefix):
            e, v = rest.split()
            out[int(e)] = int(v)
        return out


def replay_certificate(g: SignedGraph, cert: str, input_bytes: bytes | None = None) -> dict:
    """Re-verify every stage of a certificate against the input graph without
    re-running any search.  Returns the certified flow or raises."""
    lines = [ln for ln in cert.splitlines() if ln.strip()]
    if lines and lines[0].startswith("cert "):
        if lines[0] != "cert 1":
            raise InvariantViolation(f"unsupported certificate version {lines[0]!r}")
        if input_bytes is not None:
            want = lines[1].split()[-1]
            have = hashlib.sha256(input_bytes).hexdigest()
            if want != have:
                raise InvariantViolation("input hash mismatch")
        lines = lines[2:]
    section, _ = _Section.parse(lines, 0)
    return _replay_section(g, section)


def _replay_section(g: SignedGraph, section: _Section) -> dict:
    recorded = section.graph()
    if recorded != g:
        raise InvariantViolation("section graph differs from the input graph")
    path = section.field("path")
    flow = section.flow()
    own, subs = section.top_level()
    if path == "trivial":
        pass
    elif path == "components":
        combined = {}
        for sub in subs:
            combined.update(_replay_section(sub.graph(), sub))
        if combined != flow:
            raise InvariantViolation("component flows do not combine to the recorded flow")
    elif path in ("balanced-oracle", "oracle-direct", "oracle-no2disj"):
        k = int(section.field("k"))
        if k > 8:
            raise InvariantViolation("oracle path used k > 8")
    elif path == "uncontract":
        cur = g
        for rest in section.collect("step uncontract"):
            v, e, e2, want_vp, want_bridge = (int(x) for x in rest.split())
            cur, vp, bridge = uncontract_at(cur, v, e, e2)
            if vp != want_vp or bridge != want_bridge:
                raise InvariantViolation("uncontract replay diverged")
        if len(subs) != 1:
            raise InvariantViolation("uncontract section needs one nested solve")
        inner_flow = _replay_section(cur, subs[0])
        if {e: inner_flow[e] for e in g.edges} != flow:
            raise InvariantViolation("pullback does not match the recorded flow")
    elif path == "split":
        _replay_split(g, section, subs, flow)
    elif path == "main":
        _replay_main(g, section, flow)
    else:
        raise InvariantViolation(f"unknown path {path!r}")
    k_check = int(section.field("k")) if section.field("k") else 8
    verdict = verify_flow(g, canonical_orientation(g), flow, max(k_check, 8))
    if not verdict.ok:
        raise InvariantViolation(f"recorded flow rejected: {verdict.describe()}")
    return flow


def _replay_split(g, section, subs, flow):
    rest = section.field("step split-balanced-3cut")
    toks = rest.split()
    sep = toks.index("side")
    cut = tuple(int(x) for x in toks[1:sep])
    y_side = frozenset(int(x) for x in toks[sep + 1:])
    if len(y_side) < 2:
        raise InvariantViolation("split side too small")
    actual_cut = sorted(e for e, rec in g.edges.items()
                        if not rec.is_loop() and (rec.u in y_side) != (rec.v in y_side))
    if tuple(actual_cut) != tuple(sorted(cut)):
        raise InvariantViolation("recorded cut does not match the side")
    if not is_balanced(g.induced_subgraph(y_side))[0]:
        raise InvariantViolation("split side is not balanced")
    if len(subs) != 1:
        raise InvariantViolation("split section needs one nested solve")
    inner = subs[0]
    g_y = inner.graph()
    inner_flow = _replay_section(g_y, inner)
    # re-express the recorded flow on the Y-positive switched signature and
    # compare against the inner section on the X side and the cut
    gs, switches = reduce_mod._normalize_y_positive(g, y_side)
    fwd = reexpress_flow_after_switch(g, flow, switches)
    x_side = g.vertices - y_side
    for eid, rec in gs.edges.items():
        if rec.u in x_side and rec.v in x_side:
            if fwd[eid] != inner_flow[eid]:
                raise InvariantViolation("X-side flow differs from the inner section")
        elif (rec.u in x_side) != (rec.v in x_side):
            factor = 1 if rec.u in x_side else -1
            if fwd[eid] != factor * inner_flow[eid]:
                raise InvariantViolation("cut flow differs from the inner section")


def _replay_main(g: SignedGraph, section: _Section, flow: dict):
    records = _records_from_section(g, section)
    cl = CycleList(records)
    verdict = select_mod.validate_cycle_list(g, cl)
    if not verdict.ok:
        raise InvariantViolation(f"certified cycle list invalid: {verdict.describe()}")

    g_star, cl_star, subs = preflow_mod.subdivide_for_parity(g, cl)
    want_subs = section.collect("subdiv")
    got_subs = [s.trace_line().split(" ", 1)[1] for s in subs]
    if want_subs != got_subs:
        raise InvariantViolation("subdivision replay diverged")
    g_n = g_star
    for rest in section.collect("resign"):
        toks = rest.split()
        g_n = switch_signature(g_n, {int(x) for x in toks[1:]})
    phi = section.flow("phi")
    pf = preflow_mod.Z3Preflow(g_n, phi, [])
    preflow_mod.audit_preflow(g_n, cl_star, subs, pf)

    aux = lift_mod.build_auxiliary(g_n, pf)
    want_z = section.field("zswitch") or ""
    have_z = " ".join(str(v) for v in sorted(aux.z_switch))
    if want_z.strip() != have_z:
        raise InvariantViolation("zero-edge switching replay diverged")
    matching = {}
    for rest in section.collect("match"):
        u, v = (int(x) for x in rest.split())
        matching[u] = v
        matching[v] = u
    for u, v in matching.items():
        if u not in aux.graph.vertices or v not in aux.graph.neighbors(u):
            raise InvariantViolation("recorded matching uses a non-edge")
    if not lift_mod.is_perfect(aux.graph, matching):
        raise InvariantViolation("recorded matching is not perfect")
    psi = section.flow("psi")
    lift_mod.audit_lift(aux.graph_z, aux.phi_z, psi)
    tau = {e: 0 for e in aux.graph_z.edges}
    tau.update(section.flow("tau"))
    lift_mod.audit_tau(aux.graph_z, cl_star, psi, tau, subs)
    f_star = section.flow("fstar")
    if f_star != {e: 2 * psi[e] + tau[e] for e in aux.graph_z.edges}:
        raise InvariantViolation("fstar is not 2*psi + tau")
    got_flow, _, _ = lift_mod.assemble_flow(aux, cl_star, subs, psi, tau, g)
    if got_flow != flow:
        raise InvariantViolation("assembled flow differs from the recorded flow")


def _records_from_section(g, section) -> list:
    kinds = {}
    for rest in section.collect("cycle"):
        i, kind, tag = rest.split()
        kinds[int(i)] = (kind, tag)
    vmap = {int(r.split()[0]): tuple(int(x) for x in r.split()[1:])
            for r in section.collect("cyclev")}
    emap = {int(r.split()[0]): tuple(int(x) for x in r.split()[1:])
            for r in section.collect("cyclee")}
    dist = {int(r.split()[0]): int(r.split()[1]) for r in section.collect("fishdist")}
    fpath = {int(r.split()[0]): tuple(int(x) for x in r.split()[1:])
             for r in section.collect("fishpath")}
    records = []
    for i in sorted(kinds):
        kind, tag = kinds[i]
        fish = None
        if kind == FISH:
            sub = g.induced_subgraph(set(vmap[i]))
            fish = structure.recognize_fish(sub)
            if fish is None or fish.distinguished_edge != dist[i] \
                    or tuple(fish.path_edges) != fpath[i]:
                raise InvariantViolation("certified fish record is not a fish")
        records.append(CycleRecord(kind, vmap[i], emap[i], tag, fish))
    return records
