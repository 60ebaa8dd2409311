"""Non-gating performance smoke: a 2500-node, 30000-edge profile run.

Times the expensive stages (all-pairs solve, distance transform, diff,
full pair enumeration, histogram) on a seeded random network and prints a
small report. Nothing here is a hard bound; the suite's acceptance tests
own the gating time limits. Run from anywhere:

    python3 scripts/perf_smoke.py [--threads N]
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from penprof.influence import pen_diff_vector
from penprof.pen import pen_matrix
from penprof.ppr import ppr_all_pairs
from penprof.profiler import KnownComboSet, histogram_from_diffs
from penprof.network import SignalingNetwork

N_NODES = 2500
N_EDGES = 30000


def build_network(rng):
    syms = [f"n{i:04d}" for i in range(N_NODES)]
    seen = set()
    triples = []
    while len(triples) < N_EDGES:
        u = int(rng.integers(N_NODES))
        v = int(rng.integers(N_NODES))
        if u == v or (u, v) in seen:
            continue
        seen.add((u, v))
        sign = 1 if int(rng.integers(0, 2)) == 0 else -1
        triples.append((syms[u], syms[v], sign))
    return SignalingNetwork.from_edges(triples, extra_symbols=syms)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    rng = np.random.default_rng(20260301)
    t0 = time.perf_counter()
    net = build_network(rng)
    t_build = time.perf_counter() - t0
    print(f"network: {net.n} nodes, {net.e} edges ({t_build:.2f}s)")

    t0 = time.perf_counter()
    mat = ppr_all_pairs(net, alpha=0.2, threads=args.threads)
    t_ppr = time.perf_counter() - t0
    print(f"all-pairs solve: {t_ppr:.2f}s (threads={args.threads})")

    t0 = time.perf_counter()
    pen = pen_matrix(mat, net)
    t_pen = time.perf_counter() - t0
    print(f"distance transform: {t_pen:.2f}s")

    genes = frozenset(int(i) for i in rng.permutation(net.n)[:20])
    t0 = time.perf_counter()
    diffs = pen_diff_vector(pen, genes)
    t_diff = time.perf_counter() - t0
    print(f"diff vector: {t_diff:.2f}s")

    known = KnownComboSet(
        k=2,
        combos=frozenset(
            (min(a, b), max(a, b))
            for a, b in zip(sorted(genes)[:10], sorted(genes)[10:])
        ),
    )
    t0 = time.perf_counter()
    hist = histogram_from_diffs(diffs, 2, known, n_bucket=5)
    t_hist = time.perf_counter() - t0
    total_pairs = math.comb(net.n, 2)
    assert hist.total_combos == total_pairs
    print(f"histogram over {total_pairs} pairs: {t_hist:.2f}s")

    total = t_build + t_ppr + t_pen + t_diff + t_hist
    print(f"total: {total:.2f}s (soft budget 300s)")
    if total > 300.0:
        print("over the soft budget; investigate before scaling up")


if __name__ == "__main__":
    main()
