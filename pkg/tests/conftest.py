"""Shared fixtures: instance corpora and the synthetic fish-ending instance."""

import pytest

from signedflow import oracle, pipeline
from signedflow.oracle import fish_graph
from signedflow.select import FISH, ORDINARY, SPECIAL, CycleList, CycleRecord
from signedflow.sigraph import NEGATIVE, POSITIVE, SignedGraph
from signedflow.structure import make_cycle, recognize_fish

CORPUS_SIZES = tuple(range(6, 26, 2))


def corpus(count: int, base_seed: int = 0):
    """Seeded flagged instances cycling through n = 6..24."""
    out = []
    for i in range(count):
        n = CORPUS_SIZES[i % len(CORPUS_SIZES)]
        g = oracle.generate_cubic_3ec_signed(n, base_seed + i * 1009 + n, True)
        out.append(g)
    return out


@pytest.fixture(scope="session")
def corpus_200():
    return corpus(200)


@pytest.fixture(scope="session")
def corpus_200_runs(corpus_200):
    """Synthesis results plus every cycle-selection run they performed."""
    results = []
    for g in corpus_200:
        runs = []
        res = pipeline.synthesize(g, collect_csa=runs)
        results.append((g, res, runs))
    return results


def build_fish_ending_instance(m: int = 0):
    """Cubic 3EC graph assembled from a special cycle, an even ordinary
    cycle, and a fish, wired so the hand-built list [special, ordinary, fish]
    is a valid selection output ending in a fish record."""
    g = SignedGraph()
    fish = fish_graph(m)
    for v in sorted(fish.vertices):
        g.add_vertex(v)
    for e in sorted(fish.edges):
        rec = fish.edges[e]
        g.add_edge(e, rec.u, rec.v, rec.sign)
    fish_vertices = sorted(fish.vertices)
    fish_edges = sorted(fish.edges)
    fish_deg2 = sorted(v for v in fish.vertices if fish.degree(v) == 2)

    c2_vertices = [200, 201, 202, 203]
    for v in c2_vertices:
        g.add_vertex(v)
    c2_edges = []
    for i in range(4):
        sign = NEGATIVE if i == 0 else POSITIVE
        c2_edges.append(g.new_edge(c2_vertices[i], c2_vertices[(i + 1) % 4], sign).id)

    n1 = 6 + 2 * m
    c1_vertices = [100 + i for i in range(n1)]
    for v in c1_vertices:
        g.add_vertex(v)
    c1_edges = []
    for i in range(n1):
        sign = NEGATIVE if i == 0 else POSITIVE
        c1_edges.append(g.new_edge(c1_vertices[i], c1_vertices[(i + 1) % n1], sign).id)

    # one fish stub to the ordinary cycle, the rest to the special cycle
    g.new_edge(fish_deg2[-1], c2_vertices[0], POSITIVE)
    hooks = iter(c1_vertices)
    for v in fish_deg2[:-1]:
        g.new_edge(v, next(hooks), POSITIVE)
    for v in c2_vertices[1:]:
        g.new_edge(v, next(hooks), POSITIVE)

    cert = recognize_fish(fish)
    assert cert is not None
    records = [
        CycleRecord(SPECIAL, tuple(c1_vertices), tuple(c1_edges), "preprocess-2"),
        CycleRecord(ORDINARY, tuple(c2_vertices), tuple(c2_edges), "step3"),
        CycleRecord(FISH, tuple(fish_vertices), tuple(fish_edges), "step8a-fish",
                    fish=cert),
    ]
    for rec in records[:2]:
        make_cycle(g, rec.vertices, rec.edges)
    return g, CycleList(records)
