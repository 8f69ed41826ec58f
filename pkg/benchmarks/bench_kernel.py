#!/usr/bin/env python3
"""Benchmark the compiled flow-search kernel against the pure-Python twin.

Run from the repository root after building the extension:

    python benchmarks/bench_kernel.py [--budget N]
"""

import argparse
import time

from signedflow import kernel, oracle
from signedflow.oracle import SearchBudget


def workloads(budget):
    pet_neg = oracle.petersen_graph((1 << 15) - 1)  # all edges negative
    yield "prism-neg k=8 (find)", oracle.named_instance("prism-neg"), 8, 0
    yield "n=12 cubic 3EC k=8 (find)", oracle.generate_cubic_3ec_signed(12, 5, True), 8, 0
    yield "n=16 cubic 3EC k=8 (find)", oracle.generate_cubic_3ec_signed(16, 5, True), 8, 0
    yield "petersen all-neg k=5 (refute)", pet_neg, 5, budget
    yield "petersen all-neg k=6 (find)", pet_neg, 6, 0


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=30_000_000,
                    help="node cap for the refutation workload")
    args = ap.parse_args()

    backends = ["python"]
    if kernel.BACKEND == "cython":
        backends.append("cython")
    else:
        print("note: compiled kernel unavailable; benchmarking pure Python only")

    print(f"{'workload':38s} {'backend':8s} {'status':8s} {'nodes':>12s} "
          f"{'seconds':>9s} {'nodes/s':>12s}")
    for name, g, k, budget in workloads(args.budget):
        for backend in backends:
            t0 = time.perf_counter()
            verdict = oracle.nz_kflow_exists(
                g, None, k, SearchBudget(node_limit=budget), backend=backend)
            dt = time.perf_counter() - t0
            rate = verdict.nodes / dt if dt > 0 else 0.0
            print(f"{name:38s} {backend:8s} {verdict.status:8s} "
                  f"{verdict.nodes:12d} {dt:9.3f} {rate:12.0f}")


if __name__ == "__main__":
    main()
