"""Ground-truth brute-force solvers and instance generators.

Everything here is exhaustive search with explicit budgets; an exceeded
budget yields "unknown", never a wrong verdict.  These routines anchor the
acceptance tests for the constructive pipeline.
"""

from __future__ import annotations

import dataclasses
import random
import re
from concurrent.futures import ProcessPoolExecutor

from signedflow import kernel
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    InvariantViolation,
    Orientation,
    SignedGraph,
    canonical_orientation,
    edge_connectivity,
    end_coefficient,
    is_balanced,
    verify_flow,
)


@dataclasses.dataclass
class SearchBudget:
    node_limit: int = 0  # 0 = unbounded
    jobs: int = 1


@dataclasses.dataclass
class OracleVerdict:
    status: str  # yes | no | unknown
    witness: dict | None = None
    nodes: int = 0

    def record(self, k: int, witness_file: str | None = None) -> str:
        line = f"oracle {k} {self.status}"
        if self.status == "yes" and witness_file:
            line += f" {witness_file}"
        return line


def boundary_entries(g: SignedGraph, o: Orientation) -> dict:
    """Per-edge (vertex, coefficient) lists feeding the search kernel."""
    entries = {}
    for eid, rec in g.edges.items():
        if rec.is_loop():
            c = end_coefficient(rec, o, rec.u)
            entries[eid] = [(rec.u, c)] if c != 0 else []
        else:
            entries[eid] = [
                (rec.u, end_coefficient(rec, o, rec.u)),
                (rec.v, end_coefficient(rec, o, rec.v)),
            ]
    return entries


def nz_kflow_exists(g: SignedGraph, o: Orientation | None = None, k: int = 6,
                    budget: SearchBudget | None = None,
                    backend: str | None = None) -> OracleVerdict:
    """Backtracking search for a nowhere-zero k-flow; exhaustive refutation.

    The yes-witness always passes verify_flow.  With ``budget.jobs > 1`` the
    search tree is split at the root by first-edge value; workers share
    nothing and verdicts combine by disjunction.
    """
    if o is None:
        o = canonical_orientation(g)
    budget = budget or SearchBudget()
    entries = boundary_entries(g, o)
    if budget.jobs > 1 and g.num_edges() > 0:
        return _root_split(g, o, entries, k, budget, backend)
    status, flow, nodes = kernel.search_flow(entries, k, node_limit=budget.node_limit,
                                             backend=backend)
    return _finish(g, o, k, status, flow, nodes)


def _finish(g, o, k, status, flow, nodes):
    if status == kernel.STATUS_YES:
        verdict = verify_flow(g, o, flow, k)
        if not verdict.ok:
            raise InvariantViolation(f"search produced an invalid witness: {verdict.describe()}")
        return OracleVerdict("yes", flow, nodes)
    if status == kernel.STATUS_NO:
        return OracleVerdict("no", None, nodes)
    return OracleVerdict("unknown", None, nodes)


def _split_values(k: int) -> list[int]:
    # global negation symmetry: positive first-edge values cover the space
    return list(range(1, k))


def _worker(args):
    entries, k, prescribed, node_limit, backend = args
    return kernel.search_flow(entries, k, prescribed=prescribed,
                              node_limit=node_limit, backend=backend)


def _root_split(g, o, entries, k, budget, backend):
    first = min(entries)
    tasks = [(entries, k, {first: val}, budget.node_limit, backend)
             for val in _split_values(k)]
    total_nodes = 0
    unknown = False
    with ProcessPoolExecutor(max_workers=budget.jobs) as pool:
        for status, flow, nodes in pool.map(_worker, tasks):
            total_nodes += nodes
            if status == kernel.STATUS_YES:
                return _finish(g, o, k, status, flow, total_nodes)
            if status == kernel.STATUS_UNKNOWN:
                unknown = True
    return OracleVerdict("unknown" if unknown else "no", None, total_nodes)


def brute_flow_admissible(g: SignedGraph, budget: SearchBudget | None = None):
    """True iff some nowhere-zero k-flow exists for k <= |E|+2.

    Returns True/False, or None when a budget was exhausted."""
    budget = budget or SearchBudget()
    if g.num_edges() == 0:
        return g.num_vertices() > 0
    hit_unknown = False
    for k in range(2, g.num_edges() + 3):
        verdict = nz_kflow_exists(g, None, k, budget)
        if verdict.status == "yes":
            return True
        if verdict.status == "unknown":
            hit_unknown = True
    return None if hit_unknown else False


# -- instance generation -----------------------------------------------------


class GenerationFailure(ArgumentError):
    pass


def generate_cubic_3ec_signed(n: int, seed: int,
                              require_two_disjoint_negative: bool = False,
                              max_attempts: int = 20000) -> SignedGraph:
    """Random cubic 3-edge-connected signed graph via the pairing model.

    Rejection-sampled to 3-edge-connectivity; the signature is uniform.
    With the flag set, resampled until the graph is flow-admissible and has
    two vertex-disjoint negative cycles.  Deterministic per seed.
    """
    if n < 4 or n % 2 != 0:
        raise ArgumentError("n must be even and at least 4")
    rng = random.Random(seed)
    from signedflow import structure  # late import, structure needs sigraph only

    for _ in range(max_attempts):
        g = _pairing_sample(n, rng)
        if g is None or edge_connectivity(g) < 3:
            continue
        if require_two_disjoint_negative:
            if not _has_two_disjoint_negative(g, structure):
                continue
            from signedflow.sigraph import is_two_unbalanced

            if not is_two_unbalanced(g):
                continue
        return g
    raise GenerationFailure(f"no instance after {max_attempts} attempts (n={n}, seed={seed})")


def _pairing_sample(n: int, rng: random.Random) -> SignedGraph | None:
    stubs = [v for v in range(n) for _ in range(3)]
    rng.shuffle(stubs)
    g = SignedGraph()
    for v in range(n):
        g.add_vertex(v)
    for i in range(0, len(stubs), 2):
        u, v = stubs[i], stubs[i + 1]
        if u == v:
            return None  # reject loops outright: never 3EC for n >= 2
        sign = POSITIVE if rng.random() < 0.5 else NEGATIVE
        g.new_edge(u, v, sign)
    return g


def _has_two_disjoint_negative(g, structure) -> bool:
    found, _ = structure.find_two_disjoint_negative_cycles(g, vertex_disjoint=True)
    return found == "found"


# -- named instances ---------------------------------------------------------

_NAME_RE = re.compile(r"^([a-z0-9-]+)(?:\((\d+)\))?$")


def named_instance(name: str) -> SignedGraph:
    """Canonical constructions: k4, prism-neg, triple-edge, fish(m), petersen(s)."""
    m = _NAME_RE.match(name.strip())
    if not m:
        raise ArgumentError(f"bad instance name {name!r}")
    base, arg = m.group(1), m.group(2)
    if base == "k4" and arg is None:
        return _k4()
    if base == "prism-neg" and arg is None:
        return _prism_neg()
    if base == "triple-edge" and arg is None:
        return _triple_edge()
    if base == "fish":
        return fish_graph(int(arg or 0))
    if base == "petersen":
        return petersen_graph(int(arg or 0))
    raise ArgumentError(f"unknown instance name {name!r}")


def _k4() -> SignedGraph:
    g = SignedGraph()
    for v in range(4):
        g.add_vertex(v)
    for u, v in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]:
        g.new_edge(u, v, POSITIVE)
    return g


def _prism_neg() -> SignedGraph:
    """Two negative triangles joined by a positive perfect matching."""
    g = SignedGraph()
    for v in range(6):
        g.add_vertex(v)
    g.new_edge(0, 1, NEGATIVE)
    g.new_edge(1, 2, POSITIVE)
    g.new_edge(2, 0, POSITIVE)
    g.new_edge(3, 4, NEGATIVE)
    g.new_edge(4, 5, POSITIVE)
    g.new_edge(5, 3, POSITIVE)
    for u, v in [(0, 3), (1, 4), (2, 5)]:
        g.new_edge(u, v, POSITIVE)
    return g


def _triple_edge() -> SignedGraph:
    g = SignedGraph()
    g.add_vertex(0)
    g.add_vertex(1)
    for _ in range(3):
        g.new_edge(0, 1, POSITIVE)
    return g


def fish_graph(m: int = 0) -> SignedGraph:
    """Theta with branch lengths 2,2,3 plus an odd ear of length 3+2m between
    the two adjacent degree-2 vertices; one negative edge on the ear.

    Vertices: a=0, b=1, p=2, q=3, r=4, s=5, ear interior 6..7+2m.
    The middle edge of the length-3 branch (id 5, joining r and s) is the
    unique edge lying in no 2-edge-cut."""
    if m < 0:
        raise ArgumentError("fish parameter must be >= 0")
    g = SignedGraph()
    for v in range(8 + 2 * m):
        g.add_vertex(v)
    a, b, p, q, r, s = 0, 1, 2, 3, 4, 5
    g.new_edge(a, p, POSITIVE)   # 0
    g.new_edge(p, b, POSITIVE)   # 1
    g.new_edge(a, q, POSITIVE)   # 2
    g.new_edge(q, b, POSITIVE)   # 3
    g.new_edge(a, r, POSITIVE)   # 4
    g.new_edge(r, s, POSITIVE)   # 5  distinguished
    g.new_edge(s, b, POSITIVE)   # 6
    path = [r] + list(range(6, 8 + 2 * m)) + [s]
    for i in range(len(path) - 1):
        sign = NEGATIVE if i == 0 else POSITIVE
        g.new_edge(path[i], path[i + 1], sign)
    return g


FISH_DISTINGUISHED_EDGE = 5


def petersen_graph(signature_id: int = 0) -> SignedGraph:
    """Petersen graph; bits of signature_id select negative edges (15 bits).

    Edge ids: 0..4 outer cycle, 5..9 spokes, 10..14 inner pentagram."""
    if not 0 <= signature_id < 2**15:
        raise ArgumentError("petersen signature id must fit in 15 bits")
    g = SignedGraph()
    for v in range(10):
        g.add_vertex(v)
    edges = []
    edges += [(i, (i + 1) % 5) for i in range(5)]
    edges += [(i, i + 5) for i in range(5)]
    edges += [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    for idx, (u, v) in enumerate(edges):
        sign = NEGATIVE if (signature_id >> idx) & 1 else POSITIVE
        g.new_edge(u, v, sign)
    return g


def petersen_signature_classes() -> list[int]:
    """One Petersen signature id per switching class (co-tree sign masks).

    A spanning tree is fixed; tree edges stay positive and each subset of the
    six co-tree edges yields one representative.  64 classes, id 0 balanced."""
    g = petersen_graph(0)
    tree = set()
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for eid in g.incident(x):
            y = g.edges[eid].other_end(x)
            if y not in seen:
                seen.add(y)
                tree.add(eid)
                stack.append(y)
    cotree = [e for e in g.edge_ids() if e not in tree]
    reps = []
    for mask in range(2 ** len(cotree)):
        sig = 0
        for i, e in enumerate(cotree):
            if (mask >> i) & 1:
                sig |= 1 << e
        reps.append(sig)
    return reps


def find_tight_petersen_signature(node_limit_per_class: int = 0,
                                  jobs: int = 1,
                                  backend: str | None = None):
    """Search Petersen switching classes for one with no nowhere-zero 5-flow.

    Returns ('found', signature_id) with nz(6)=yes verified, or
    ('unknown', None) if every undecided class exhausted its budget."""
    from signedflow.sigraph import is_two_unbalanced

    budget = SearchBudget(node_limit=node_limit_per_class, jobs=jobs)
    sawdust_unknown = False
    for sig in petersen_signature_classes():
        g = petersen_graph(sig)
        if not is_two_unbalanced(g):
            continue  # not flow-admissible: no flow for any k
        v5 = nz_kflow_exists(g, None, 5, budget, backend=backend)
        if v5.status == "unknown":
            sawdust_unknown = True
            continue
        if v5.status == "no":
            v6 = nz_kflow_exists(g, None, 6, budget, backend=backend)
            if v6.status != "yes":
                raise InvariantViolation(
                    f"petersen signature {sig}: no 5-flow but 6-flow search said {v6.status}")
            return "found", sig
    return ("unknown", None) if sawdust_unknown else ("exhausted", None)
