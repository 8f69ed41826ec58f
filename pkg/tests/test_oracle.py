import random

import pytest

from signedflow import kernel, oracle
from signedflow.oracle import SearchBudget
from signedflow.selftest import random_signed_multigraph
from signedflow.sigraph import (
    NEGATIVE,
    POSITIVE,
    ArgumentError,
    SignedGraph,
    canonical_orientation,
    edge_connectivity,
    parse_sg,
    serialize_sg,
    switch_at_vertex,
    verify_flow,
)


def handcuff():
    g = SignedGraph()
    g.add_vertex(0)
    g.add_vertex(1)
    g.new_edge(0, 0, NEGATIVE)
    g.new_edge(1, 1, NEGATIVE)
    g.new_edge(0, 1, POSITIVE)
    return g


class TestNzSearch:
    def test_positive_cycle_k2(self):
        g = SignedGraph()
        for v in range(5):
            g.add_vertex(v)
        for i in range(5):
            g.new_edge(i, (i + 1) % 5, POSITIVE)
        assert oracle.nz_kflow_exists(g, None, 2).status == "yes"

    def test_single_negative_loop_never(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.new_edge(0, 0, NEGATIVE)
        for k in (2, 5, 9):
            assert oracle.nz_kflow_exists(g, None, k).status == "no"

    def test_handcuff_k3(self):
        v = oracle.nz_kflow_exists(handcuff(), None, 3)
        assert v.status == "yes"
        assert abs(v.witness[2]) == 2  # the bridge carries 2

    def test_monotone_in_k(self):
        rng = random.Random(8)
        for i in range(10):
            g = oracle.generate_cubic_3ec_signed(8, 300 + i, False)
            prev = False
            for k in range(2, 9):
                now = oracle.nz_kflow_exists(g, None, k).status == "yes"
                assert now or not prev
                prev = prev or now

    def test_invariant_under_switching(self):
        rng = random.Random(9)
        for i in range(8):
            g = oracle.generate_cubic_3ec_signed(8, 500 + i, False)
            o = canonical_orientation(g)
            base = oracle.nz_kflow_exists(g, o, 4).status
            v = rng.choice(sorted(g.vertices))
            g2, o2 = switch_at_vertex(g, o, v)
            assert oracle.nz_kflow_exists(g2, o2, 4).status == base

    def test_budget_unknown(self):
        g = oracle.petersen_graph(0b1010101)
        v = oracle.nz_kflow_exists(g, None, 5, SearchBudget(node_limit=3))
        assert v.status == "unknown" and v.nodes >= 3

    def test_jobs_root_split(self):
        g = oracle.named_instance("prism-neg")
        seq = oracle.nz_kflow_exists(g, None, 8)
        par = oracle.nz_kflow_exists(g, None, 8, SearchBudget(jobs=2))
        assert seq.status == par.status == "yes"
        assert verify_flow(g, canonical_orientation(g), par.witness, 8).ok

    def test_witness_always_verifies(self):
        for i in range(10):
            g = oracle.generate_cubic_3ec_signed(10, 900 + i, True)
            v = oracle.nz_kflow_exists(g, None, 8)
            assert v.status == "yes"
            assert verify_flow(g, canonical_orientation(g), v.witness, 8).ok


class TestKernelBackends:
    def test_backends_identical(self):
        if kernel.BACKEND != "cython":
            pytest.skip("compiled kernel not built")
        rng = random.Random(14)
        for i in range(20):
            g = random_signed_multigraph(rng.randrange(2, 8), rng, extra_edges=3)
            k = rng.randrange(2, 7)
            a = oracle.nz_kflow_exists(g, None, k, backend="python")
            b = oracle.nz_kflow_exists(g, None, k, backend="cython")
            assert (a.status, a.nodes, a.witness) == (b.status, b.nodes, b.witness)

    def test_prescription_support(self):
        entries = {0: [(0, 1), (1, -1)], 1: [(0, 1), (1, -1)], 2: [(0, 1), (1, -1)]}
        status, flow, _ = kernel.search_flow(entries, 6, prescribed={0: 2})
        assert status == kernel.STATUS_YES and flow[0] == 2
        assert sum(flow.values()) == 0

    def test_positive_loop_stripped(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.new_edge(0, 0, POSITIVE)
        v = oracle.nz_kflow_exists(g, None, 2)
        assert v.status == "yes" and v.witness == {0: 1}


class TestBruteAdmissible:
    def test_negative_cycle(self):
        g, _ = parse_sg("sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 -\n")
        assert oracle.brute_flow_admissible(g) is False

    def test_handcuff(self):
        assert oracle.brute_flow_admissible(handcuff()) is True

    def test_balanced_bridgeless(self):
        k4 = oracle.named_instance("k4")
        assert oracle.brute_flow_admissible(k4) is True
        assert oracle.nz_kflow_exists(k4, None, 6).status == "yes"


class TestGenerator:
    def test_deterministic(self):
        a = oracle.generate_cubic_3ec_signed(10, 77, True)
        b = oracle.generate_cubic_3ec_signed(10, 77, True)
        assert serialize_sg(a) == serialize_sg(b)

    def test_three_edge_connected_and_cubic(self):
        for seed in range(15):
            g = oracle.generate_cubic_3ec_signed(8, seed, False)
            assert edge_connectivity(g) >= 3
            assert all(g.degree(v) == 3 for v in g.vertices)

    def test_flag_guarantees_predicate(self):
        from signedflow import structure
        from signedflow.sigraph import is_two_unbalanced

        for seed in range(10):
            g = oracle.generate_cubic_3ec_signed(10, seed, True)
            found, _ = structure.find_two_disjoint_negative_cycles(g, True)
            assert found == "found"
            assert is_two_unbalanced(g)

    def test_small_n_validation(self):
        with pytest.raises(ArgumentError):
            oracle.generate_cubic_3ec_signed(5, 0)
        with pytest.raises(ArgumentError):
            oracle.generate_cubic_3ec_signed(2, 0)

    def test_n4_with_flag_fails(self):
        # K4 is the only 3EC cubic graph on 4 vertices and has no two
        # vertex-disjoint cycles at all
        with pytest.raises(oracle.GenerationFailure):
            oracle.generate_cubic_3ec_signed(4, 0, True, max_attempts=300)


class TestNamedInstances:
    def test_fish_dimensions(self):
        fish = oracle.named_instance("fish(0)")
        assert fish.num_vertices() == 8 and fish.num_edges() == 10
        assert sum(1 for v in fish.vertices if fish.degree(v) == 3) == 4
        big = oracle.named_instance("fish(2)")
        assert big.num_vertices() == 12 and big.num_edges() == 14

    def test_petersen_all_positive_balanced(self):
        from signedflow.sigraph import is_balanced

        assert is_balanced(oracle.named_instance("petersen(0)"))[0]

    def test_prism_negative_triangles(self):
        from signedflow import structure

        pr = oracle.named_instance("prism-neg")
        found, (c1, c2) = structure.find_two_disjoint_negative_cycles(pr, True)
        assert found == "found"
        assert c1.vertex_set | c2.vertex_set == pr.vertices

    def test_unknown_name(self):
        with pytest.raises(ArgumentError):
            oracle.named_instance("dodo")


class TestTightnessProbe:
    def test_signature_classes(self):
        classes = oracle.petersen_signature_classes()
        assert len(classes) == 64 and classes[0] == 0

    def test_probe_finds_tight_signature(self):
        status, sig = oracle.find_tight_petersen_signature(node_limit_per_class=10**7)
        assert status == "found"
        g = oracle.petersen_graph(sig)
        assert oracle.nz_kflow_exists(g, None, 5).status == "no"
        assert oracle.nz_kflow_exists(g, None, 6).status == "yes"

    def test_probe_budget_reports_unknown(self):
        status, sig = oracle.find_tight_petersen_signature(node_limit_per_class=5)
        assert status == "unknown" and sig is None
