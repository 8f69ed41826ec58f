"""Exhaustive small-graph self-test suites.

Each suite returns (ok, detail); the CLI prints one line per suite.  The
pytest acceptance tests call into the same functions so the command-line
checks and CI cannot drift apart."""

from __future__ import annotations

import itertools
import random

from signedflow import oracle, pipeline, preflow, select, structure
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    SignedGraph,
    canonical_orientation,
    is_balanced,
    negativeness_at_most,
    parse_sg,
    serialize_sg,
    smooth_degree2_vertex,
    subdivide_edge,
    switch_at_vertex,
    verify_flow,
)
from signedflow.structure import Cycle, enumerate_cycles, make_cycle


def random_signed_multigraph(n: int, rng: random.Random, extra_edges: int = 2,
                             loops: bool = True) -> SignedGraph:
    """Connected random multigraph: spanning tree plus extra parallel-capable
    edges and optional loops, random signs."""
    g = SignedGraph()
    for v in range(n):
        g.add_vertex(v)
    for v in range(1, n):
        u = rng.randrange(v)
        g.new_edge(u, v, rng.choice((POSITIVE, NEGATIVE)))
    for _ in range(extra_edges):
        u = rng.randrange(n)
        v = rng.randrange(n)
        if u == v and not loops:
            continue
        g.new_edge(min(u, v), max(u, v), rng.choice((POSITIVE, NEGATIVE)))
    return g


def brute_negativeness(g: SignedGraph) -> int:
    """Minimum number of negative edges over all switchings (2^(n-1) scan)."""
    verts = sorted(g.vertices)
    if len(verts) > 14:
        raise ValueError("brute negativeness capped at 14 vertices")
    best = None
    fixed = verts[0] if verts else None
    rest = verts[1:]
    for mask in range(2 ** len(rest)):
        s = {rest[i] for i in range(len(rest)) if (mask >> i) & 1}
        count = 0
        for rec in g.edges.values():
            if rec.is_loop():
                count += rec.sign == NEGATIVE
                continue
            flips = (rec.u in s) + (rec.v in s)
            count += rec.sign * (-1) ** flips == NEGATIVE
        best = count if best is None else min(best, count)
    return best if best is not None else 0


def brute_matching_size(g: SignedGraph) -> int:
    """Exact maximum matching size by branch on the lowest uncovered vertex."""
    adj = {v: sorted(g.neighbors(v)) for v in g.vertices}

    def best(free: frozenset) -> int:
        active = [v for v in sorted(free) if any(w in free for w in adj[v])]
        if not active:
            return 0
        v = active[0]
        score = best(free - {v})  # leave v uncovered
        for w in adj[v]:
            if w in free:
                score = max(score, 1 + best(free - {v, w}))
        return score

    return best(frozenset(g.vertices))


def brute_cycle_boundary(g: SignedGraph, cycle: Cycle, b: dict):
    """3^L scan for an assignment with the prescribed boundary."""
    from signedflow.sigraph import boundary_at

    o = canonical_orientation(g)
    for values in itertools.product((0, 1, 2), repeat=len(cycle.edges)):
        tau = dict(zip(cycle.edges, values))
        if all(boundary_at(g, o, tau, v, mod=3) == b.get(v, 0) % 3
               for v in cycle.vertices):
            return tau
    return None


# -- suites -------------------------------------------------------------------


def suite_balance_cycle_parity(samples: int, seed: int):
    rng = random.Random(seed)
    for i in range(samples):
        g = random_signed_multigraph(rng.randrange(2, 8), rng, extra_edges=rng.randrange(4))
        cycles, truncated = enumerate_cycles(g)
        if truncated:
            continue
        by_parity = all(s == POSITIVE for _, s in cycles)
        if is_balanced(g)[0] != by_parity:
            return False, f"disagreement on sample {i}"
    return True, f"{samples} samples"


def suite_negativeness(samples: int, seed: int):
    rng = random.Random(seed + 1)
    for i in range(samples):
        g = random_signed_multigraph(rng.randrange(2, 9), rng, extra_edges=rng.randrange(4))
        brute = brute_negativeness(g)
        if negativeness_at_most(g, 0) != (brute == 0):
            return False, f"k=0 disagreement on sample {i}"
        if negativeness_at_most(g, 1) != (brute <= 1):
            return False, f"k=1 disagreement on sample {i}"
    return True, f"{samples} samples"


def suite_theta_characterization(samples: int, seed: int):
    rng = random.Random(seed + 2)
    checked = 0
    for i in range(samples):
        g = random_signed_multigraph(rng.randrange(2, 8), rng,
                                     extra_edges=rng.randrange(5))
        fast = structure.has_unbalanced_theta(g)[0]
        brute = structure.has_unbalanced_theta_brute(g)
        if fast != brute:
            return False, f"disagreement on sample {i}"
        checked += 1
    return True, f"{checked} samples"


def suite_cycle_boundary():
    """Exhaustive over lengths 2..6 and all boundary vectors.

    The iff-criterion (negative always solvable; all-positive solvable exactly
    when the boundary sums to zero) is checked on the two reference
    signatures; every other signature is cross-checked against a 3^L scan."""
    from signedflow.sigraph import boundary_at

    count = 0
    for length in range(2, 7):
        for neg_mask in range(2 ** length):
            g = SignedGraph()
            for v in range(length):
                g.add_vertex(v)
            edges = []
            for i in range(length):
                sign = NEGATIVE if (neg_mask >> i) & 1 else POSITIVE
                edges.append(g.new_edge(i, (i + 1) % length, sign).id)
            cyc = make_cycle(g, list(range(length)), edges)
            negative = cyc.sign(g) == NEGATIVE
            o = canonical_orientation(g)
            for bvals in itertools.product((0, 1, 2), repeat=length):
                b = dict(zip(range(length), bvals))
                got = preflow.solve_cycle_boundary(g, cyc, b)
                if neg_mask == 0:
                    solvable = sum(bvals) % 3 == 0
                    if (got is not None) != solvable:
                        return False, f"all-positive criterion wrong at L={length} b={bvals}"
                elif negative:
                    if got is None:
                        return False, f"negative cycle unsolved at L={length} mask={neg_mask} b={bvals}"
                else:
                    brute = brute_cycle_boundary(g, cyc, b)
                    if (got is None) != (brute is None):
                        return False, f"odd signature disagreement at L={length} mask={neg_mask} b={bvals}"
                if got is not None:
                    if any(boundary_at(g, o, got, v, mod=3) != b[v] % 3 for v in b):
                        return False, f"wrong boundary at L={length} mask={neg_mask} b={bvals}"
                count += 1
    return True, f"{count} cases"


def suite_blossom(samples: int, seed: int):
    from signedflow.lift import maximum_matching

    rng = random.Random(seed + 3)
    for i in range(samples):
        n = rng.randrange(2, 11)
        g = SignedGraph()
        for v in range(n):
            g.add_vertex(v)
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.35:
                    g.new_edge(u, v, POSITIVE)
        m = maximum_matching(g)
        if len(m) % 2 != 0:
            return False, f"odd matching map on sample {i}"
        for u, v in m.items():
            if m.get(v) != u or v not in g.neighbors(u):
                return False, f"invalid matching on sample {i}"
        if len(m) // 2 != brute_matching_size(g):
            return False, f"non-maximum matching on sample {i}"
    return True, f"{samples} samples"


def suite_involutions(samples: int, seed: int):
    rng = random.Random(seed + 4)
    for i in range(samples):
        g = random_signed_multigraph(rng.randrange(2, 8), rng, extra_edges=2)
        o = canonical_orientation(g)
        v = rng.choice(sorted(g.vertices))
        g1, o1 = switch_at_vertex(g, o, v)
        g2, o2 = switch_at_vertex(g1, o1, v)
        if g2 != g or o2 != o:
            return False, f"switch involution broken on sample {i}"
        eid = rng.choice(g.edge_ids())
        g3, o3, x, _ = subdivide_edge(g, o, eid)
        flow = {e: 1 for e in g3.edges}  # values irrelevant for the shape check
        try:
            g4, o4, _ = smooth_degree2_vertex(g3, o3, _consistent_path_flow(g3, o3, x), x)
        except Exception:
            return False, f"smooth failed on sample {i}"
        if g4 != g or o4 != o:
            return False, f"subdivide/smooth not inverse on sample {i}"
    return True, f"{samples} samples"


def _consistent_path_flow(g, o, x):
    from signedflow.sigraph import end_coefficient

    e1, e2 = sorted(g.incident(x))
    c1 = end_coefficient(g.edges[e1], o, x)
    c2 = end_coefficient(g.edges[e2], o, x)
    return {e1: 1, e2: -c1 * c2 * 1}


def suite_pipeline(samples: int, seed: int, max_n: int = 12):
    rng = random.Random(seed + 5)
    sizes = [n for n in range(6, max_n + 1, 2)]
    done = 0
    for i in range(samples):
        n = sizes[i % len(sizes)]
        g = oracle.generate_cubic_3ec_signed(n, rng.randrange(10**9), True)
        runs = []
        res = pipeline.synthesize(g, collect_csa=runs)
        verdict = verify_flow(g, canonical_orientation(g), res.flow, 8)
        if not verdict.ok:
            return False, f"flow rejected on sample {i}"
        for gg, cl in runs:
            v = select.validate_cycle_list(gg, cl)
            if not v.ok:
                return False, f"cycle list rejected on sample {i}: {v.describe()}"
        replayed = pipeline.replay_certificate(g, res.certificate)
        if replayed != res.flow:
            return False, f"replay mismatch on sample {i}"
        done += 1
    return True, f"{done} instances"


def suite_roundtrip(samples: int, seed: int):
    rng = random.Random(seed + 6)
    for i in range(samples):
        g = random_signed_multigraph(rng.randrange(1, 8), rng, extra_edges=2)
        text = serialize_sg(g)
        g2, _ = parse_sg(text)
        if g2 != g or serialize_sg(g2) != text:
            return False, f"roundtrip broke on sample {i}"
    return True, f"{samples} samples"


def run(max_n: int = 8, samples: int = 200, seed: int = 0) -> bool:
    suites = [
        ("sg-roundtrip", lambda: suite_roundtrip(samples, seed)),
        ("balance-cycle-parity", lambda: suite_balance_cycle_parity(samples, seed)),
        ("negativeness-brute", lambda: suite_negativeness(min(samples, 120), seed)),
        ("theta-fast-vs-brute", lambda: suite_theta_characterization(samples, seed)),
        ("cycle-boundary-exhaustive", suite_cycle_boundary),
        ("blossom-vs-brute", lambda: suite_blossom(min(samples, 150), seed)),
        ("involutions", lambda: suite_involutions(min(samples, 100), seed)),
        ("pipeline", lambda: suite_pipeline(min(samples, 40), seed, max_n=max(8, max_n))),
    ]
    all_ok = True
    for name, fn in suites:
        ok, detail = fn()
        all_ok &= ok
        print(f"selftest {name} {'pass' if ok else 'FAIL'} ({detail})")
    return all_ok
