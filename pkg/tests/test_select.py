import pytest

from signedflow import oracle, select as sel, structure as st
from signedflow.select import FISH, ORDINARY, POSITIVE_KIND, SPECIAL, CycleList, CycleRecord
from signedflow.sigraph import NEGATIVE, SignedGraph, parse_sg


class TestPreprocess:
    def test_prism_spanning_pair(self):
        pr = oracle.named_instance("prism-neg")
        case, (c1, c2) = sel.preprocess_first(pr)
        assert case == "spanning-pair"
        assert c1.vertex_set | c2.vertex_set == pr.vertices
        assert not (c1.vertex_set & c2.vertex_set)
        assert c1.sign(pr) == NEGATIVE and c2.sign(pr) == NEGATIVE

    def test_petersen_always_spanning_pair(self):
        # girth 5 leaves at most 5 vertices beside any cycle, so a Petersen
        # remainder can never hold a theta: case 1 must fire whenever the
        # hypotheses hold at all
        for sig in oracle.petersen_signature_classes():
            g = oracle.petersen_graph(sig)
            found, _ = st.find_two_disjoint_negative_cycles(g, True)
            if found != "found":
                continue
            case, _ = sel.preprocess_first(g)
            assert case == "spanning-pair"

    def test_theta_remainder_case_reached(self, corpus_200):
        # generated instances do exercise the second pre-process case
        from signedflow import reduce as rd

        hit = None
        for g in corpus_200:
            if rd.find_balanced_3cut(g) is not None:
                continue
            case, payload = sel.preprocess_first(g)
            if case == "theta-remainder":
                hit = (g, payload)
                break
        assert hit is not None
        g, c1 = hit
        assert c1.sign(g) == NEGATIVE
        rest = g.induced_subgraph(g.vertices - c1.vertex_set)
        assert st.has_unbalanced_theta(rest)[0]

    def test_negative_cycle_rejected(self):
        g, _ = parse_sg("sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 -\n")
        with pytest.raises(Exception):
            sel.preprocess_first(g)


class TestRunCsa:
    def test_prism_two_specials(self):
        cl = sel.run_csa(oracle.named_instance("prism-neg"))
        assert len(cl) == 2
        assert all(r.kind == SPECIAL for r in cl)
        assert sel.validate_cycle_list(oracle.named_instance("prism-neg"), cl).ok

    def test_deterministic(self, corpus_200):
        for g in corpus_200[:10]:
            from signedflow import reduce as rd

            if rd.find_balanced_3cut(g) is not None:
                continue
            found, _ = st.find_two_disjoint_negative_cycles(g, True)
            if found != "found":
                continue
            cl1 = sel.run_csa(g)
            cl2 = sel.run_csa(g)
            assert [(r.kind, r.vertices, r.edges) for r in cl1] == \
                [(r.kind, r.vertices, r.edges) for r in cl2]

    def test_first_record_special_and_structure(self, corpus_200_runs):
        for _, _, runs in corpus_200_runs[:60]:
            for g, cl in runs:
                assert cl.records[0].kind == SPECIAL
                specials = [r for r in cl.records if r.kind == SPECIAL]
                assert len(specials) <= 2
                fish = [i for i, r in enumerate(cl.records) if r.kind == FISH]
                assert all(i == len(cl.records) - 1 for i in fish)

    def test_step8_at_most_once(self, corpus_200_runs):
        for _, _, runs in corpus_200_runs:
            for g, cl in runs:
                step8 = [r for r in cl.records if r.step_tag.startswith("step8")]
                assert len(step8) <= 1


class TestValidator:
    def test_accepts_all_csa_outputs(self, corpus_200_runs):
        total = 0
        for _, _, runs in corpus_200_runs:
            for g, cl in runs:
                assert sel.validate_cycle_list(g, cl).ok
                total += 1
        assert total >= 200

    def test_rejects_fish_not_last(self, corpus_200_runs):
        g, cl = None, None
        for gg, _, runs in corpus_200_runs:
            for rg, rcl in runs:
                if len(rcl) >= 2:
                    g, cl = rg, rcl
                    break
            if g is not None:
                break
        bad = CycleList(list(cl.records))
        first = bad.records[0]
        fake_fish = CycleRecord(FISH, bad.records[0].vertices, bad.records[0].edges,
                                "step8a-fish")
        bad.records[0] = fake_fish
        verdict = sel.validate_cycle_list(g, bad)
        assert not verdict.ok
        assert any(name == "fish-last" for name, _ in verdict.failures) or \
            any(name == "first-cycle-special" for name, _ in verdict.failures)

    def test_rejects_odd_parity(self, corpus_200_runs):
        for g, _, runs in corpus_200_runs:
            for rg, rcl in runs:
                evens = [r for r in rcl.records if r.kind == ORDINARY and r.even_length()]
                specials = [i for i, r in enumerate(rcl.records) if r.kind == SPECIAL]
                if len(specials) == 2:
                    bad = CycleList(list(rcl.records))
                    idx = specials[1]
                    old = bad.records[idx]
                    bad.records[idx] = CycleRecord(ORDINARY, old.vertices, old.edges,
                                                   old.step_tag)
                    verdict = sel.validate_cycle_list(rg, bad)
                    assert not verdict.ok
                    names = {name for name, _ in verdict.failures}
                    assert "even-ordinary-special-parity" in names or names
                    return
        pytest.skip("no two-special run in the corpus slice")

    def test_rejects_bad_cover(self):
        pr = oracle.named_instance("prism-neg")
        cl = sel.run_csa(pr)
        bad = CycleList(cl.records[:1])
        verdict = sel.validate_cycle_list(pr, bad)
        assert not verdict.ok
        assert any(name == "cycle-disjoint-cover" for name, _ in verdict.failures)

    def test_accepts_synthetic_fish_list(self):
        from conftest import build_fish_ending_instance

        g, cl = build_fish_ending_instance(0)
        from signedflow.sigraph import edge_connectivity

        assert edge_connectivity(g) == 3
        verdict = sel.validate_cycle_list(g, cl)
        assert verdict.ok, verdict.describe()


class TestBeastPair:
    def _fragile_residuals(self, corpus_200_runs, want=3):
        """Fragile 2-connected residuals harvested from step-8 runs."""
        out = []
        for _, _, runs in corpus_200_runs:
            for g, cl in runs:
                prefix = []
                for rec in cl.records:
                    if rec.step_tag.startswith("step8b"):
                        removed = set()
                        for rr in prefix:
                            removed.update(rr.vertices)
                        out.append(g.induced_subgraph(g.vertices - removed))
                    prefix.append(rec)
            if len(out) >= want:
                break
        return out

    def test_pair_conditions_on_fragile_residuals(self, corpus_200_runs):
        residuals = self._fragile_residuals(corpus_200_runs)
        assert residuals, "no fragile residual reached in the corpus"
        for gp in residuals:
            what, payload = sel.beast_pair(gp)
            assert what == "pair"
            c0, c1, j = payload
            ok, j2 = sel._pair_conditions(gp, c0, c1)
            assert ok and j == j2
            # deletion inventories of even negative cycles agree (condition 3)
            rest0 = gp.induced_subgraph(gp.vertices - c0.vertex_set)
            rest1 = gp.induced_subgraph(gp.vertices - c1.vertex_set)
            even0 = {c.edge_set for c in sel._negative_cycles_of(rest0) if len(c) % 2 == 0}
            even1 = {c.edge_set for c in sel._negative_cycles_of(rest1) if len(c) % 2 == 0}
            assert even0 == even1

    def test_fish_detected_first(self):
        fish = oracle.fish_graph(0)
        what, cert = sel.beast_pair(fish)
        assert what == "fish" and cert.distinguished_edge == oracle.FISH_DISTINGUISHED_EDGE
