import pytest

from signedflow import oracle, pipeline, reduce as rd
from signedflow.sigraph import (
    InvariantViolation,
    NEGATIVE,
    POSITIVE,
    SignedGraph,
    canonical_orientation,
    serialize_sg,
    verify_flow,
)


class TestRouting:
    def test_balanced_path(self):
        res = pipeline.synthesize(oracle.named_instance("k4"))
        assert res.path == "balanced-oracle" and res.k_used <= 6

    def test_no_two_disjoint_routes_to_k6(self):
        # 2-unbalanced K4: flow-admissible but no two vertex-disjoint
        # negative cycles, so the 6-flow fallback fires
        g = oracle.named_instance("k4")
        for e in (0, 5):  # edges 0-1 and 2-3
            rec = g.edges[e]
            g.replace_edge(e, rec.u, rec.v, NEGATIVE)
        from signedflow.sigraph import is_two_unbalanced

        assert is_two_unbalanced(g)
        res = pipeline.synthesize(g)
        assert res.path == "oracle-no2disj" and res.k_used <= 6
        assert verify_flow(g, canonical_orientation(g), res.flow, 6).ok

    def test_handcuff_oracle_direct(self):
        g = SignedGraph()
        g.add_vertex(0)
        g.add_vertex(1)
        g.new_edge(0, 0, NEGATIVE)
        g.new_edge(1, 1, NEGATIVE)
        g.new_edge(0, 1, POSITIVE)
        res = pipeline.synthesize(g)
        assert res.path == "oracle-direct" and res.k_used == 3

    def test_components(self):
        g = SignedGraph()
        base = oracle.named_instance("prism-neg")
        for v in sorted(base.vertices):
            g.add_vertex(v)
        for e in sorted(base.edges):
            rec = base.edges[e]
            g.add_edge(e, rec.u, rec.v, rec.sign)
        offset = 10
        for v in sorted(base.vertices):
            g.add_vertex(v + offset)
        for e in sorted(base.edges):
            rec = base.edges[e]
            g.new_edge(rec.u + offset, rec.v + offset, rec.sign)
        res = pipeline.synthesize(g)
        assert res.path == "components"
        assert verify_flow(g, canonical_orientation(g), res.flow, 8).ok
        assert pipeline.replay_certificate(g, res.certificate) == res.flow

    def test_not_admissible(self):
        g = SignedGraph()
        for v in range(3):
            g.add_vertex(v)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(1, 2, POSITIVE)
        g.new_edge(2, 0, NEGATIVE)
        with pytest.raises(pipeline.NotFlowAdmissible):
            pipeline.synthesize(g)

    def test_balanced_with_bridge_not_admissible(self):
        g = SignedGraph()
        for v in range(4):
            g.add_vertex(v)
        g.new_edge(0, 1, POSITIVE)
        g.new_edge(1, 2, POSITIVE)
        g.new_edge(2, 0, POSITIVE)
        g.new_edge(2, 3, POSITIVE)
        with pytest.raises(pipeline.NotFlowAdmissible):
            pipeline.synthesize(g)

    def test_uncontract_path(self):
        from test_reduce import random_3ec_2unbalanced_multideg

        g = random_3ec_2unbalanced_multideg(11)
        res = pipeline.synthesize(g)
        assert res.path == "uncontract"
        assert verify_flow(g, canonical_orientation(g), res.flow, 8).ok
        assert pipeline.replay_certificate(g, res.certificate) == res.flow


class TestCertificates:
    def test_deterministic(self):
        g = oracle.generate_cubic_3ec_signed(12, 4242, True)
        a = pipeline.synthesize(g)
        b = pipeline.synthesize(g)
        assert a.certificate == b.certificate and a.flow == b.flow

    def test_replay_rejects_tampered_flow(self):
        g = oracle.named_instance("prism-neg")
        res = pipeline.synthesize(g)
        eid = sorted(res.flow)[0]
        bad = res.certificate.replace(f"flow {eid} {res.flow[eid]}",
                                      f"flow {eid} {res.flow[eid] + 1}")
        with pytest.raises(InvariantViolation):
            pipeline.replay_certificate(g, bad)

    def test_replay_rejects_wrong_graph(self):
        g = oracle.generate_cubic_3ec_signed(10, 1, True)
        h = oracle.generate_cubic_3ec_signed(10, 2, True)
        res = pipeline.synthesize(g)
        if serialize_sg(g) != serialize_sg(h):
            with pytest.raises(InvariantViolation):
                pipeline.replay_certificate(h, res.certificate)

    def test_hash_check(self):
        g = oracle.named_instance("prism-neg")
        res = pipeline.synthesize(g)
        raw = serialize_sg(g).encode()
        cert = pipeline.wrap_certificate(res.certificate, raw)
        assert pipeline.replay_certificate(g, cert, raw) == res.flow
        with pytest.raises(InvariantViolation):
            pipeline.replay_certificate(g, cert, raw + b"x")

    def test_replay_rejects_tampered_matching(self):
        g = oracle.generate_cubic_3ec_signed(10, 31, True)
        res = pipeline.synthesize(g)
        if res.path != "main" or "match " not in res.certificate:
            pytest.skip("instance did not exercise the matching stage")
        lines = res.certificate.splitlines()
        out = []
        dropped = False
        for ln in lines:
            if not dropped and ln.startswith("match "):
                dropped = True
                continue
            out.append(ln)
        with pytest.raises(InvariantViolation):
            pipeline.replay_certificate(g, "\n".join(out))
