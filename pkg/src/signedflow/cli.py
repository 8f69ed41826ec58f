"""Batch command-line front end.

Subcommands: analyze, synthesize, verify, oracle, generate, selftest.
Exit codes: 0 success, 1 property/verification failure, 2 parse or usage
error, 3 unsupported instance (theorem hypotheses unmet and the oracle
fallback declined or exhausted)."""

from __future__ import annotations

import argparse
import sys

from signedflow import oracle as oracle_mod
from signedflow import pipeline, structure
from signedflow.sigraph import (
    ParseError,
    SignedFlowError,
    canonical_orientation,
    edge_connectivity,
    is_balanced,
    negativeness_at_most,
    parse_flow,
    parse_sg,
    serialize_flow,
    serialize_sg,
    verify_flow,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_UNSUPPORTED = 3


def _load_graph(path):
    with open(path, "rb") as fh:
        data = fh.read()
    g, o = parse_sg(data)
    return g, o, data


def _flow_frame(g, o, flow):
    """Express canonical-orientation values in the file's orientation."""
    if o is None:
        return flow
    out = {}
    canon = canonical_orientation(g)
    for e, val in flow.items():
        out[e] = val if o[e] == canon[e] else -val
    return out


def cmd_analyze(args) -> int:
    g, _, _ = _load_graph(args.graph)
    balanced, cert = is_balanced(g)
    print(f"vertices {g.num_vertices()}")
    print(f"edges {g.num_edges()}")
    conn = edge_connectivity(g)
    print(f"edge-connectivity {conn if conn < 2**29 else 'inf'}")
    cubic = all(g.degree(v) == 3 for v in g.vertices)
    print(f"cubic {'yes' if cubic else 'no'}")
    print(f"balanced {'yes' if balanced else 'no'}")
    if balanced:
        print("negativeness 0")
    elif negativeness_at_most(g, 1):
        print("negativeness 1")
    else:
        print("negativeness 2+")
    theta, _ = structure.has_unbalanced_theta(g)
    print(f"unbalanced-theta {'yes' if theta else 'no'}")
    subcubic = all(g.degree(v) <= 3 for v in g.vertices)
    if subcubic:
        print(f"fragile {'yes' if structure.is_fragile(g) else 'no'}")
    fish = structure.recognize_fish(g)
    print(f"fish {'yes' if fish else 'no'}")
    found, _ = structure.find_two_disjoint_negative_cycles(g, vertex_disjoint=True)
    print(f"two-disjoint-negative {found}")
    from signedflow.sigraph import is_flow_admissible

    print(f"flow-admissible {'yes' if is_flow_admissible(g) else 'no'}")
    return EXIT_OK


def cmd_synthesize(args) -> int:
    g, o, raw = _load_graph(args.graph)
    if args.no_fallback:
        cubic = all(g.degree(v) >= 3 for v in g.vertices)
        found, _ = structure.find_two_disjoint_negative_cycles(g, vertex_disjoint=True)
        if edge_connectivity(g) < 3 or found != "found":
            print("unsupported: theorem hypotheses unmet and fallback declined")
            return EXIT_UNSUPPORTED
    try:
        result = pipeline.synthesize(g)
    except pipeline.NotFlowAdmissible as exc:
        print(f"not flow-admissible: {exc}")
        return EXIT_UNSUPPORTED
    except pipeline.UnsupportedInstance as exc:
        print(f"unsupported: {exc}")
        return EXIT_UNSUPPORTED
    flow_text = serialize_flow(_flow_frame(g, o, result.flow))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(flow_text)
    else:
        sys.stdout.write(flow_text)
    if args.trace:
        with open(args.trace, "w") as fh:
            fh.write(pipeline.wrap_certificate(result.certificate, raw))
    print(f"path {result.path}", file=sys.stderr)
    print(f"k {result.k_used}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    g, o, _ = _load_graph(args.graph)
    with open(args.flow, "rb") as fh:
        flow_file = parse_flow(fh.read())
    if set(flow_file) != set(g.edges):
        missing = sorted(set(g.edges) - set(flow_file))
        print(f"reject: flow file does not cover the edge set (missing {missing[:5]})")
        return EXIT_FAIL
    flow = _flow_frame(g, o, flow_file)  # same transform both ways
    verdict = verify_flow(g, canonical_orientation(g), flow, args.k)
    print(verdict.describe())
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    g, o, _ = _load_graph(args.graph)
    budget = oracle_mod.SearchBudget(node_limit=args.budget, jobs=args.jobs)
    frame = o if o is not None else None
    verdict = oracle_mod.nz_kflow_exists(g, frame, args.k, budget)
    witness_file = None
    if verdict.status == "yes" and args.witness:
        witness_file = args.witness
        with open(witness_file, "w") as fh:
            fh.write(serialize_flow(verdict.witness))
    print(verdict.record(args.k, witness_file))
    if verdict.status == "unknown":
        return EXIT_UNSUPPORTED
    return EXIT_OK


def cmd_generate(args) -> int:
    try:
        g = oracle_mod.generate_cubic_3ec_signed(
            args.n, args.seed, require_two_disjoint_negative=args.require_2_neg)
    except oracle_mod.GenerationFailure as exc:
        print(f"generation failed: {exc}")
        return EXIT_FAIL
    text = serialize_sg(g)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from signedflow import selftest

    ok = selftest.run(max_n=args.max_n, samples=args.samples, seed=args.seed)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="signedflow",
                                description="nowhere-zero flows on signed graphs")
    sub = p.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="structural report for a .sg file")
    pa.add_argument("graph")
    pa.set_defaults(fn=cmd_analyze)

    ps = sub.add_parser("synthesize", help="construct a nowhere-zero 8-flow")
    ps.add_argument("graph")
    ps.add_argument("-o", "--output")
    ps.add_argument("--trace", help="write the certificate here")
    ps.add_argument("--seed", type=int, default=0,
                    help="accepted for interface stability; synthesis is deterministic")
    ps.add_argument("--no-fallback", action="store_true",
                    help="decline the oracle fallback on non-theorem instances")
    ps.set_defaults(fn=cmd_synthesize)

    pv = sub.add_parser("verify", help="check a flow file at a given k")
    pv.add_argument("graph")
    pv.add_argument("flow")
    pv.add_argument("--k", type=int, required=True)
    pv.set_defaults(fn=cmd_verify)

    po = sub.add_parser("oracle", help="exhaustive nowhere-zero k-flow search")
    po.add_argument("graph")
    po.add_argument("--k", type=int, required=True)
    po.add_argument("--budget", type=int, default=0, help="node limit (0 = unbounded)")
    po.add_argument("--jobs", type=int, default=1, help="root-split workers")
    po.add_argument("--witness", help="write a yes-witness flow here")
    po.set_defaults(fn=cmd_oracle)

    pg = sub.add_parser("generate", help="random cubic 3-edge-connected signed graph")
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--seed", type=int, required=True)
    pg.add_argument("--require-2-neg", action="store_true",
                    help="resample until two vertex-disjoint negative cycles exist")
    pg.add_argument("-o", "--output")
    pg.set_defaults(fn=cmd_generate)

    pt = sub.add_parser("selftest", help="exhaustive small-graph suites")
    pt.add_argument("--max-n", type=int, default=8)
    pt.add_argument("--samples", type=int, default=200)
    pt.add_argument("--seed", type=int, default=0)
    pt.set_defaults(fn=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"cannot open {exc.filename}", file=sys.stderr)
        return EXIT_USAGE
    except SignedFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
