#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the numpy fallback.

Usage: python bench/bench_kernels.py [--quick]

Times the hot kernels on representative desk-scale workloads and prints one
table row per kernel with the speedup of the compiled path.
"""

import argparse
import math
import time

import numpy as np

from paleylab import _kernels_py as py_impl
from paleylab.field import new_field
from paleylab.subsets import indicator_matrix

try:
    from paleylab import _ckernels as cy_impl
except ImportError:
    cy_impl = None


def timeit(fn, *args, repeat=3):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def paley_adjacency(p):
    ctx = new_field(p)
    adj = np.zeros((p, p), dtype=np.uint8)
    for x in range(p):
        adj[x] = ctx.chi_table[(x - np.arange(p)) % p] == 1
    return ctx, adj


def workloads(quick: bool):
    rip_p = 37 if quick else 73
    clique_p = 101 if quick else 157
    pair_n = 400 if quick else 1500

    ctx, _ = paley_adjacency(13)
    s_small = np.zeros((rip_p + 1, rip_p + 1), dtype=np.int8)
    sctx = new_field(rip_p)
    idx = (np.arange(rip_p)[:, None] - np.arange(rip_p)[None, :]) % rip_p
    s_small[:rip_p, :rip_p] = sctx.chi_table[idx]
    s_small[:rip_p, rip_p] = 1
    s_small[rip_p, :rip_p] = 1

    _, adj = paley_adjacency(clique_p)

    rng = np.random.default_rng(0)
    masks = [int(m) or 1 for m in rng.integers(1, 1 << 13, size=pair_n)]
    ind = indicator_matrix(masks, 13)

    dense = rng.integers(-3, 4, size=(48, 48))
    dense = (dense + dense.T).astype(np.float64)

    total = math.comb(rip_p + 1, 4)
    return [
        ("rip_scan_range", f"C({rip_p + 1},4) = {total} supports",
         lambda impl: impl.rip_scan_range(s_small, 4, 0, total)),
        ("entry_sum_scan_range", f"C({rip_p},4) size-4 subsets",
         lambda impl: impl.entry_sum_scan_range(
             np.ascontiguousarray(s_small[:rip_p, :rip_p]), 4, 0, math.comb(rip_p, 4))),
        ("max_clique", f"Paley graph p = {clique_p}",
         lambda impl: impl.max_clique(adj, 10**9)),
        ("pair_sums_cross", f"{pair_n} x {pair_n} subset pairs at p = 13",
         lambda impl: impl.pair_sums_cross(ctx.chi_table, ind, ind)),
        ("jacobi_extreme", "48 x 48 symmetric, x100",
         lambda impl: [impl.jacobi_extreme(dense) for _ in range(100)]),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true", help="smaller workloads")
    args = ap.parse_args()

    print(f"{'kernel':<22} {'workload':<36} {'python':>9} {'cython':>9} {'speedup':>8}")
    print("-" * 88)
    for name, desc, call in workloads(args.quick):
        t_py, out_py = timeit(call, py_impl)
        if cy_impl is None:
            print(f"{name:<22} {desc:<36} {t_py:>8.3f}s {'n/a':>9} {'n/a':>8}")
            continue
        t_cy, out_cy = timeit(call, cy_impl)
        print(f"{name:<22} {desc:<36} {t_py:>8.3f}s {t_cy:>8.3f}s {t_py / t_cy:>7.1f}x")
    if cy_impl is None:
        print("\ncompiled extension not built; install with Cython available to compare")


if __name__ == "__main__":
    main()
