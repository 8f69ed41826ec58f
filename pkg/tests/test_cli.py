import os

import pytest

from signedflow import cli, oracle, pipeline
from signedflow.sigraph import parse_flow, parse_sg, serialize_sg


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def write(path, text):
    with open(path, "w") as fh:
        fh.write(text)
    return str(path)


class TestGenerateAnalyze:
    def test_generate_and_analyze(self, workdir, capsys):
        rc = cli.main(["generate", "--n", "8", "--seed", "3", "--require-2-neg",
                       "-o", "g.sg"])
        assert rc == 0
        g, _ = parse_sg(open("g.sg").read())
        assert g.num_vertices() == 8
        rc = cli.main(["analyze", "g.sg"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "cubic yes" in out
        assert "two-disjoint-negative found" in out
        assert "flow-admissible yes" in out

    def test_analyze_fish(self, workdir, capsys):
        write("fish.sg", serialize_sg(oracle.named_instance("fish(0)")))
        rc = cli.main(["analyze", "fish.sg"])
        out = capsys.readouterr().out
        assert rc == 0
        assert "balanced no" in out
        assert "fragile yes" in out
        assert "fish yes" in out


class TestSynthesizeVerify:
    def test_roundtrip(self, workdir, capsys):
        write("g.sg", serialize_sg(oracle.named_instance("prism-neg")))
        rc = cli.main(["synthesize", "g.sg", "-o", "f.txt", "--trace", "cert.txt"])
        assert rc == 0
        rc = cli.main(["verify", "g.sg", "f.txt", "--k", "8"])
        out = capsys.readouterr().out
        assert rc == 0 and "accept" in out
        cert = open("cert.txt").read()
        assert cert.startswith("cert 1\n")
        g, _ = parse_sg(open("g.sg").read())
        flow = pipeline.replay_certificate(g, cert, open("g.sg", "rb").read())
        assert flow == parse_flow(open("f.txt").read())

    def test_verify_rejects_zero(self, workdir, capsys):
        write("g.sg", serialize_sg(oracle.named_instance("prism-neg")))
        assert cli.main(["synthesize", "g.sg", "-o", "f.txt"]) == 0
        flow = parse_flow(open("f.txt").read())
        flow[0] = 0
        write("bad.txt", "\n".join(f"{e} {v}" for e, v in flow.items()))
        rc = cli.main(["verify", "g.sg", "bad.txt", "--k", "8"])
        assert rc == 1

    def test_synthesize_inadmissible_exits_3(self, workdir, capsys):
        write("neg.sg", "sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 -\n")
        rc = cli.main(["synthesize", "neg.sg"])
        assert rc == 3

    def test_no_fallback_declines(self, workdir, capsys):
        write("k4.sg", serialize_sg(oracle.named_instance("k4")))
        assert cli.main(["synthesize", "k4.sg", "--no-fallback"]) == 3
        assert cli.main(["synthesize", "k4.sg", "-o", "f.txt"]) == 0
        assert cli.main(["verify", "k4.sg", "f.txt", "--k", "8"]) == 0

    def test_oriented_input_frame(self, workdir, capsys):
        # a flow written for an oriented file verifies in that orientation
        g = oracle.named_instance("prism-neg")
        from signedflow.sigraph import canonical_orientation, AWAY, TOWARD

        o = canonical_orientation(g)
        # reverse one edge relative to canonical
        du, dv = o[0]
        o[0] = (-du, -dv)
        write("g.sg", serialize_sg(g, o))
        assert cli.main(["synthesize", "g.sg", "-o", "f.txt"]) == 0
        assert cli.main(["verify", "g.sg", "f.txt", "--k", "8"]) == 0


class TestOracleCommand:
    def test_oracle_yes_with_witness(self, workdir, capsys):
        write("g.sg", serialize_sg(oracle.named_instance("prism-neg")))
        rc = cli.main(["oracle", "g.sg", "--k", "8", "--witness", "w.txt"])
        out = capsys.readouterr().out
        assert rc == 0 and out.startswith("oracle 8 yes w.txt")
        assert cli.main(["verify", "g.sg", "w.txt", "--k", "8"]) == 0

    def test_oracle_no(self, workdir, capsys):
        write("neg.sg", "sg 1\nv 3\ne 0 0 1 +\ne 1 1 2 +\ne 2 2 0 -\n")
        rc = cli.main(["oracle", "neg.sg", "--k", "6"])
        out = capsys.readouterr().out
        assert rc == 0 and "oracle 6 no" in out

    def test_oracle_budget_unknown(self, workdir, capsys):
        write("p.sg", serialize_sg(oracle.petersen_graph(0b1010101)))
        rc = cli.main(["oracle", "p.sg", "--k", "5", "--budget", "3"])
        out = capsys.readouterr().out
        assert rc == 3 and "unknown" in out


class TestUsageErrors:
    def test_parse_error_exit_2(self, workdir, capsys):
        write("bad.sg", "not a graph\n")
        assert cli.main(["analyze", "bad.sg"]) == 2

    def test_missing_file_exit_2(self, workdir):
        assert cli.main(["analyze", "nope.sg"]) == 2

    def test_bad_usage_exit_2(self, workdir):
        assert cli.main(["generate", "--n", "8"]) == 2  # missing required seed

    def test_generation_failure_exit_1(self, workdir, capsys):
        rc = cli.main(["generate", "--n", "4", "--seed", "0", "--require-2-neg"])
        assert rc == 1


class TestSelftestCommand:
    def test_small_run(self, workdir, capsys):
        rc = cli.main(["selftest", "--samples", "8", "--max-n", "8"])
        out = capsys.readouterr().out
        assert rc == 0
        assert out.count("pass") >= 7
