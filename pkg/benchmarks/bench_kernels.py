#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy twins.

Run: python benchmarks/bench_kernels.py [--sizes 512,2048]

The same kernels back the flow loop and the O(N^2) topology monitors;
the table shows per-call medians and the numba speedup per size.
"""

import argparse
import time

import numpy as np

from curveflow import _kernels
from curveflow.curves import baseball


def median_time(fn, args, budget=0.25):
    fn(*args)  # warm / compile
    t0 = time.perf_counter()
    fn(*args)
    once = time.perf_counter() - t0
    reps = max(3, min(1000, int(budget / max(once, 1e-9))))
    times = []
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(reps):
            fn(*args)
        times.append((time.perf_counter() - t0) / reps)
    return float(np.median(times))


def build_cases(n):
    pts = baseball(n=n, amplitude=0.4).points
    edges = _kernels.edge_lengths_numpy(pts)
    cum = np.concatenate([[0.0], np.cumsum(edges)])[:-1]
    total = float(edges.sum())
    field = _kernels.chord_field_numpy(pts)
    arc = _kernels.cyclic_arc_matrix_numpy(cum, total)
    return {
        "edge_lengths": (pts,),
        "arc_second_derivative": (pts, edges),
        "flow_step": (pts, 0.4, -1.0),
        "curve_stats": (pts,),
        "chord_field": (pts,),
        "cyclic_arc_matrix": (cum, total),
        "avoidance_scan": (pts, cum, total, 0.8, 2.5),
        "torus_local_minima": (field, arc, 0.3 * total, True),
        "max_pair_distance_sq": (pts,),
    }


PAIRS = {
    "edge_lengths": ("edge_lengths_numba", "edge_lengths_numpy"),
    "arc_second_derivative": ("arc_second_derivative_numba", "arc_second_derivative_numpy"),
    "flow_step": ("flow_step_numba", "flow_step_numpy"),
    "curve_stats": ("curve_stats_numba", "curve_stats_numpy"),
    "chord_field": ("chord_field_numba", "chord_field_numpy"),
    "cyclic_arc_matrix": ("cyclic_arc_matrix_numba", "cyclic_arc_matrix_numpy"),
    "avoidance_scan": ("avoidance_scan_numba", "avoidance_scan_numpy"),
    "torus_local_minima": ("torus_local_minima_numba", "torus_local_minima_numpy"),
    "max_pair_distance_sq": ("max_pair_distance_sq_numba", "max_pair_distance_sq_numpy"),
}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="512,2048")
    opts = ap.parse_args()
    sizes = [int(s) for s in opts.sizes.split(",")]

    if not _kernels.NUMBA_AVAILABLE:
        print("numba backend unavailable (or disabled via CURVEFLOW_NUMBA=0); "
              "nothing to compare")
        return

    for n in sizes:
        cases = build_cases(n)
        print(f"\nN = {n}")
        print(f"{'kernel':26s} {'numba':>12s} {'numpy':>12s} {'speedup':>9s}")
        for name, args in cases.items():
            jit_name, np_name = PAIRS[name]
            t_jit = median_time(getattr(_kernels, jit_name), args)
            t_np = median_time(getattr(_kernels, np_name), args)
            print(f"{name:26s} {t_jit * 1e6:10.1f}us {t_np * 1e6:10.1f}us "
                  f"{t_np / t_jit:8.1f}x")


if __name__ == "__main__":
    main()
