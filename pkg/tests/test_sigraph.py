import random

import pytest

from signedflow import oracle
from signedflow.selftest import brute_negativeness, random_signed_multigraph
from signedflow.sigraph import (
    AWAY,
    NEGATIVE,
    POSITIVE,
    TOWARD,
    ArgumentError,
    ContractViolation,
    ParseError,
    SignedGraph,
    boundary_at,
    bridges,
    canonical_orientation,
    check_balance_certificate,
    edge_connectivity,
    is_balanced,
    is_flow_admissible,
    negativeness_at_most,
    parse_flow,
    parse_sg,
    reverse_edge,
    serialize_flow,
    serialize_sg,
    smooth_degree2_vertex,
    subdivide_edge,
    switch_at_vertex,
    uncontract_at,
    verify_flow,
)

TRIANGLE = "sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 -\n"


def neg_loop_graph():
    g = SignedGraph()
    g.add_vertex(0)
    g.new_edge(0, 0, NEGATIVE)
    return g


class TestParse:
    def test_triangle(self):
        g, o = parse_sg(TRIANGLE)
        assert g.num_vertices() == 3 and g.num_edges() == 3
        assert g.edges[2].sign == NEGATIVE
        assert o is None

    def test_isolated_vertex(self):
        g, _ = parse_sg("sg 1\nv 1\n")
        assert g.num_vertices() == 1 and g.num_edges() == 0

    def test_orientation_columns(self):
        text = "sg 1\nv 2\ne 0 0 1 + away toward\ne 1 0 1 - away away\n"
        g, o = parse_sg(text)
        assert o == {0: (AWAY, TOWARD), 1: (AWAY, AWAY)}
        assert serialize_sg(g, o) == text

    def test_positive_edge_equal_directions_rejected(self):
        with pytest.raises(ParseError):
            parse_sg("sg 1\nv 2\ne 0 0 1 + away away\n")

    def test_errors_carry_line_numbers(self):
        with pytest.raises(ParseError, match="line 3"):
            parse_sg("sg 1\nv 2\ne 0 0 bad +\n")
        with pytest.raises(ParseError):
            parse_sg("v 2\n")

    def test_mixed_direction_columns_rejected(self):
        with pytest.raises(ParseError):
            parse_sg("sg 1\nv 2\ne 0 0 1 + away toward\ne 1 0 1 +\n")

    def test_comments_and_blanks(self):
        g, _ = parse_sg("# hello\nsg 1\n\nv 2\ne 0 0 1 +  # inline\n")
        assert g.num_edges() == 1


class TestSerialize:
    def test_roundtrip_random(self):
        rng = random.Random(5)
        for _ in range(40):
            g = random_signed_multigraph(rng.randrange(1, 8), rng, extra_edges=3)
            text = serialize_sg(g)
            g2, _ = parse_sg(text)
            assert g2 == g
            assert serialize_sg(g2) == text

    def test_empty_graph_header_only(self):
        assert serialize_sg(SignedGraph()) == "sg 1\nv 0\n"

    def test_flow_file_roundtrip(self):
        f = {0: -3, 5: 7, 2: 1}
        assert parse_flow(serialize_flow(f)) == f


class TestSwitch:
    def test_triangle_switch_makes_two_negative(self):
        g = SignedGraph()
        for v in range(3):
            g.add_vertex(v)
        for u, v in [(0, 1), (1, 2), (2, 0)]:
            g.new_edge(u, v, POSITIVE)
        g2, _ = switch_at_vertex(g, canonical_orientation(g), 0)
        assert sum(1 for r in g2.edges.values() if r.sign == NEGATIVE) == 2

    def test_involution(self):
        rng = random.Random(11)
        for _ in range(20):
            g = random_signed_multigraph(rng.randrange(2, 7), rng)
            o = canonical_orientation(g)
            v = rng.choice(sorted(g.vertices))
            g1, o1 = switch_at_vertex(g, o, v)
            g2, o2 = switch_at_vertex(g1, o1, v)
            assert g2 == g and o2 == o

    def test_negative_loop_sign_survives_switch(self):
        g = neg_loop_graph()
        o = {0: (AWAY, AWAY)}
        g2, o2 = switch_at_vertex(g, o, 0)
        assert g2.edges[0].sign == NEGATIVE
        assert o2[0] == (TOWARD, TOWARD)

    def test_unknown_vertex(self):
        g = neg_loop_graph()
        with pytest.raises(ArgumentError):
            switch_at_vertex(g, None, 9)

    def test_switching_preserves_verify(self):
        g = oracle.named_instance("prism-neg")
        o = canonical_orientation(g)
        flow = oracle.nz_kflow_exists(g, o, 8).witness
        assert verify_flow(g, o, flow, 8).ok
        for v in sorted(g.vertices):
            g2, o2 = switch_at_vertex(g, o, v)
            assert verify_flow(g2, o2, flow, 8).ok


class TestReverseAndBoundary:
    def test_reverse_twice_identity(self):
        g, _ = parse_sg(TRIANGLE)
        o = canonical_orientation(g)
        f = {0: 1, 1: 2, 2: 3}
        o1, f1 = reverse_edge(o, f, 1)
        o2, f2 = reverse_edge(o1, f1, 1)
        assert o2 == o and f2 == f

    def test_reverse_preserves_boundaries(self):
        g, _ = parse_sg(TRIANGLE)
        o = canonical_orientation(g)
        f = {0: 1, 1: 2, 2: 3}
        before = {v: boundary_at(g, o, f, v) for v in g.vertices}
        o1, f1 = reverse_edge(o, f, 2)
        after = {v: boundary_at(g, o1, f1, v) for v in g.vertices}
        assert before == after

    def test_negative_loop_reverse(self):
        g = neg_loop_graph()
        o = {0: (AWAY, AWAY)}
        o1, f1 = reverse_edge(o, {0: 3}, 0)
        assert o1[0] == (TOWARD, TOWARD) and f1[0] == -3

    def test_negative_loop_counts_twice(self):
        g = neg_loop_graph()
        assert boundary_at(g, {0: (AWAY, AWAY)}, {0: 1}, 0) == 2

    def test_positive_edge_contributions(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.add_vertex(1)
        g.new_edge(0, 1, POSITIVE)
        o = canonical_orientation(g)
        assert boundary_at(g, o, {0: 5}, 0) == 5
        assert boundary_at(g, o, {0: 5}, 1) == -5

    def test_boundary_total_identity(self):
        # sums to zero on all-positive graphs; in general equals twice the
        # oriented contribution of negative edges
        rng = random.Random(3)
        for _ in range(30):
            g = random_signed_multigraph(rng.randrange(2, 8), rng, extra_edges=3)
            o = canonical_orientation(g)
            f = {e: rng.randrange(-4, 5) for e in g.edges}
            total = sum(boundary_at(g, o, f, v) for v in g.vertices)
            neg_part = 0
            for e, rec in g.edges.items():
                if rec.sign == NEGATIVE:
                    du, dv = o[e]
                    neg_part += (du + dv) * f[e]
            assert total == neg_part
            if all(r.sign == POSITIVE for r in g.edges.values()):
                assert total == 0


class TestVerifyFlow:
    def test_positive_cycle_all_ones(self):
        g = SignedGraph()
        for v in range(4):
            g.add_vertex(v)
        for i in range(4):
            g.new_edge(i, (i + 1) % 4, POSITIVE)
        o = canonical_orientation(g)
        assert verify_flow(g, o, {e: 1 for e in g.edges}, 2).ok

    def test_negative_loop_rejected(self):
        g = neg_loop_graph()
        verdict = verify_flow(g, {0: (AWAY, AWAY)}, {0: 1}, 9)
        assert not verdict.ok and verdict.clause == "nonzero-boundary"

    def test_all_zero_flow_names_the_edge(self):
        g, _ = parse_sg(TRIANGLE)
        verdict = verify_flow(g, canonical_orientation(g), {e: 0 for e in g.edges}, 8)
        assert not verdict.ok and verdict.clause == "zero-edge" and verdict.witness == 0

    def test_range_clause(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.new_edge(0, 0, POSITIVE)
        verdict = verify_flow(g, {0: (AWAY, TOWARD)}, {0: 9}, 8)
        assert not verdict.ok and verdict.clause == "value-out-of-range"


class TestBalance:
    def test_all_positive(self):
        g, _ = parse_sg("sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 +\n")
        balanced, cert = is_balanced(g)
        assert balanced and cert.switching_set == set()
        assert check_balance_certificate(g, balanced, cert)

    def test_negative_triangle_witness(self):
        g, _ = parse_sg(TRIANGLE)
        balanced, cert = is_balanced(g)
        assert not balanced
        assert sorted(cert.cycle_edges) == [0, 1, 2]
        assert check_balance_certificate(g, balanced, cert)

    def test_fish_unbalanced_but_theta_balanced(self):
        fish = oracle.named_instance("fish(0)")
        assert not is_balanced(fish)[0]
        theta = fish.induced_subgraph({0, 1, 2, 3, 4, 5})
        assert is_balanced(theta)[0]

    def test_certificate_normalization(self):
        # the switching set avoids the lowest vertex id of each component
        rng = random.Random(9)
        for _ in range(30):
            g = random_signed_multigraph(rng.randrange(2, 8), rng)
            balanced, cert = is_balanced(g)
            if balanced:
                assert min(g.vertices) not in cert.switching_set


class TestNegativeness:
    def test_negative_cycle_is_one_unbalanced(self):
        g, _ = parse_sg(TRIANGLE)
        assert negativeness_at_most(g, 1)
        assert not negativeness_at_most(g, 0)

    def test_two_disjoint_negative_cycles_bridge(self):
        # two vertex-disjoint negative triangles joined by a path
        g = SignedGraph()
        for v in range(6):
            g.add_vertex(v)
        g.new_edge(0, 1, NEGATIVE)
        g.new_edge(1, 2, POSITIVE)
        g.new_edge(2, 0, POSITIVE)
        g.new_edge(3, 4, NEGATIVE)
        g.new_edge(4, 5, POSITIVE)
        g.new_edge(5, 3, POSITIVE)
        g.new_edge(0, 3, POSITIVE)
        assert not negativeness_at_most(g, 1)
        assert brute_negativeness(g) == 2

    def test_brute_agreement(self):
        rng = random.Random(21)
        for _ in range(80):
            g = random_signed_multigraph(rng.randrange(2, 10), rng, extra_edges=3)
            brute = brute_negativeness(g)
            assert negativeness_at_most(g, 0) == (brute == 0)
            assert negativeness_at_most(g, 1) == (brute <= 1)

    def test_k_validation(self):
        g, _ = parse_sg(TRIANGLE)
        with pytest.raises(ArgumentError):
            negativeness_at_most(g, 2)


class TestFlowAdmissible:
    def test_negative_cycle_not_admissible(self):
        g, _ = parse_sg(TRIANGLE)
        assert not is_flow_admissible(g)

    def test_two_unbalanced_petersen(self):
        g = oracle.petersen_graph(0b11)  # two negative outer edges
        if brute_negativeness(g) >= 2:
            assert is_flow_admissible(g)

    def test_balanced_two_edge_connected(self):
        assert is_flow_admissible(oracle.named_instance("k4"))

    def test_handcuff_delegates_to_oracle(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.add_vertex(1)
        g.new_edge(0, 0, NEGATIVE)
        g.new_edge(1, 1, NEGATIVE)
        g.new_edge(0, 1, POSITIVE)
        assert is_flow_admissible(g)


class TestSurgeries:
    def test_subdivide_negative_triangle(self):
        g, _ = parse_sg(TRIANGLE)
        g2, _, x, (e1, e2) = subdivide_edge(g, canonical_orientation(g), 2)
        assert g2.degree(x) == 2
        assert g2.edges[e1].sign == NEGATIVE and g2.edges[e2].sign == POSITIVE
        assert sum(1 for r in g2.edges.values() if r.sign == NEGATIVE) == 1
        assert g2.num_vertices() == 4 and g2.num_edges() == 4

    def test_subdivide_then_smooth_identity(self):
        rng = random.Random(17)
        for _ in range(25):
            g = random_signed_multigraph(rng.randrange(2, 7), rng, extra_edges=2)
            o = canonical_orientation(g)
            eid = rng.choice(g.edge_ids())
            g2, o2, x, (e1, e2) = subdivide_edge(g, o, eid)
            from signedflow.sigraph import end_coefficient

            c1 = end_coefficient(g2.edges[e1], o2, x)
            c2 = end_coefficient(g2.edges[e2], o2, x)
            f = {e1: 1, e2: -c1 * c2}
            g3, o3, f3 = smooth_degree2_vertex(g2, o2, f, x)
            assert g3 == g and o3 == o

    def test_smooth_merges_values_and_signs(self):
        g = SignedGraph()
        for v in range(3):
            g.add_vertex(v)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(1, 2, POSITIVE)
        o = canonical_orientation(g)
        g2, o2, f2 = smooth_degree2_vertex(g, o, {0: 3, 1: 3}, 1)
        assert f2 == {0: 3}
        assert g2.edges[0].sign == POSITIVE

        g = SignedGraph()
        for v in range(3):
            g.add_vertex(v)
        g.new_edge(0, 1, NEGATIVE)
        g.new_edge(1, 2, POSITIVE)
        o = canonical_orientation(g)
        g2, _, _ = smooth_degree2_vertex(g, o, {0: 2, 1: -2}, 1)
        assert g2.edges[0].sign == NEGATIVE

    def test_smooth_requires_zero_boundary(self):
        g = SignedGraph()
        for v in range(3):
            g.add_vertex(v)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(1, 2, POSITIVE)
        with pytest.raises(ContractViolation):
            smooth_degree2_vertex(g, canonical_orientation(g), {0: 1, 1: 2}, 1)

    def test_uncontract_at(self):
        g = SignedGraph()
        for v in range(5):
            g.add_vertex(v)
        eids = [g.new_edge(0, v, POSITIVE).id for v in (1, 2, 3, 4)]
        g2, vp, bridge = uncontract_at(g, 0, eids[0], eids[1])
        assert g2.num_vertices() == 6 and g2.num_edges() == 5
        assert g2.degree(0) == 3 and g2.degree(vp) == 3
        assert g2.edges[bridge].sign == POSITIVE
        # contracting the new edge (renaming vp back to 0) recovers g
        recovered = {e: frozenset(0 if x == vp else x for x in g2.edges[e].ends)
                     for e in eids}
        assert recovered == {e: frozenset(g.edges[e].ends) for e in eids}

    def test_uncontract_validations(self):
        g, _ = parse_sg(TRIANGLE)
        with pytest.raises(ArgumentError):
            uncontract_at(g, 0, 0, 2)  # degree 2 < 4


class TestConnectivity:
    def test_examples(self):
        assert edge_connectivity(oracle.named_instance("k4")) == 3
        assert edge_connectivity(oracle.named_instance("triple-edge")) == 3

    def test_bridge(self):
        g = SignedGraph()
        for v in range(4):
            g.add_vertex(v)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(1, 2, POSITIVE)
        g.new_edge(2, 0, POSITIVE)
        g.new_edge(2, 3, POSITIVE)
        assert edge_connectivity(g) == 1
        assert bridges(g) == [3]

    def test_loops_ignored(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.add_vertex(1)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(0, 0, POSITIVE)
        assert edge_connectivity(g) == 1
