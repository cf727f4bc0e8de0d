"""Benchmark the compiled kernel against the numpy fallback.

Times the per-edge smallest-singular-value kernel on the workloads the
certificate computations generate: complete-hypergraph sweeps (many small
submatrices of one matrix) and union-hypergraph sweeps with mixed widths.

Usage: python benchmarks/bench_kernels.py [repeats]
"""

import itertools
import sys
import time

import numpy as np

from sparsecert._kernels import pysv

try:
    from sparsecert._kernels import _minsv
except ImportError:
    _minsv = None


def flatten(edges):
    lengths = np.array([len(e) for e in edges], dtype=np.int64)
    offsets = np.zeros(len(edges) + 1, dtype=np.int64)
    np.cumsum(lengths, out=offsets[1:])
    flat = np.array([j for e in edges for j in e], dtype=np.int64)
    return flat, offsets


def workloads():
    rng = np.random.default_rng(0)
    out = []
    for n, m, k in [(8, 10, 2), (12, 12, 3), (16, 14, 4)]:
        mat = np.ascontiguousarray(rng.standard_normal((n, m)))
        edges = list(itertools.combinations(range(m), k))
        out.append((f"complete n={n} m={m} k={k} ({len(edges)} edges)", mat, edges))
    # mixed widths, like a pairwise-union hypergraph
    mat = np.ascontiguousarray(rng.standard_normal((10, 12)))
    edges = []
    for width in (2, 3, 4):
        edges += [tuple(sorted(rng.choice(12, size=width, replace=False)))
                  for _ in range(80)]
    out.append((f"mixed widths 2-4 ({len(edges)} edges)", mat, edges))
    return out


def time_backend(impl, mat, flat, offsets, repeats):
    impl.edge_min_singular_values(mat, flat, offsets)  # warm up
    start = time.perf_counter()
    for _ in range(repeats):
        impl.edge_min_singular_values(mat, flat, offsets)
    return (time.perf_counter() - start) / repeats


def main():
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    print(f"{'workload':40s} {'numpy':>10s} {'cython':>10s} {'speedup':>8s}")
    for label, mat, edges in workloads():
        flat, offsets = flatten(edges)
        py_t = time_backend(pysv, mat, flat, offsets, repeats)
        if _minsv is None:
            print(f"{label:40s} {py_t * 1e6:9.1f}us {'n/a':>10s} {'n/a':>8s}")
            continue
        cy_t = time_backend(_minsv, mat, flat, offsets, repeats)
        a = pysv.edge_min_singular_values(mat, flat, offsets)
        b = _minsv.edge_min_singular_values(mat, flat, offsets)
        gap = float(np.max(np.abs(a - b)))
        assert gap < 1e-10, f"backend mismatch {gap}"
        print(f"{label:40s} {py_t * 1e6:9.1f}us {cy_t * 1e6:9.1f}us "
              f"{py_t / cy_t:7.1f}x")


if __name__ == "__main__":
    main()
