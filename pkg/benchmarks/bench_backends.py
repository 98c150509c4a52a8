#!/usr/bin/env python3
"""Throughput comparison of the compiled kernel core against the NumPy
fallback, on the three hot loops.

Run from the repository root:

    python benchmarks/bench_backends.py [--budget 200000]
"""

import argparse
import time

import numpy as np

from anisub._backend import get_backend
from anisub.models import factor_arrays, single_atom_model
from anisub.rng import RngSpec


def _time(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench(backend_name, budget):
    kern = get_backend(backend_name)
    alphas, rates, a1, a2 = factor_arrays(single_atom_model(0.5))
    rows = {}

    g = RngSpec(1, 0).generator()
    rows["standard_stable"] = (
        budget * 10,
        _time(lambda: kern.standard_stable(0.5, budget * 10, g.bit_generator)))

    levels = np.full(budget, 1.0)
    rows["first_passage_pairs"] = (
        budget,
        _time(lambda: kern.first_passage_pairs(
            alphas, rates, a1, a2, 0.01, levels, levels, 1 << 21,
            RngSpec(1, 1).generator().bit_generator)))

    grid = np.array([1.0, 2.0, 4.0, 8.0])
    rows["crossing_grid"] = (
        budget // 4,
        _time(lambda: kern.crossing_grid(
            alphas, rates, a1, a2, 0.01, grid, grid, budget // 4, 1 << 21,
            RngSpec(1, 2).generator().bit_generator)))

    cum_p = np.array([1.0])
    ct = np.array([np.cos(np.pi / 4)])
    st = np.array([np.sin(np.pi / 4)])
    rows["ctrw_counts"] = (
        budget // 4,
        _time(lambda: kern.ctrw_counts(
            0.5, cum_p, ct, st, 1000.0, budget // 4, 1 << 24,
            RngSpec(1, 3).generator().bit_generator)))
    return rows


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--budget", type=int, default=200_000)
    args = parser.parse_args()

    backends = ["python"]
    try:
        get_backend("compiled")
        backends.insert(0, "compiled")
    except ImportError:
        print("compiled core not built; timing the fallback only\n")

    results = {b: bench(b, args.budget) for b in backends}
    kernels = list(results[backends[0]])

    header = f"{'kernel':22s} {'n':>10s}" + "".join(f" {b:>12s}" for b in backends)
    if len(backends) == 2:
        header += f" {'speedup':>9s}"
    print(header)
    print("-" * len(header))
    for k in kernels:
        n = results[backends[0]][k][0]
        line = f"{k:22s} {n:>10d}"
        for b in backends:
            line += f" {results[b][k][1]:>11.3f}s"
        if len(backends) == 2:
            line += f" {results['python'][k][1] / results['compiled'][k][1]:>8.1f}x"
        print(line)


if __name__ == "__main__":
    main()
