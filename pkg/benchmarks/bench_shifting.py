"""Timing harness for the two shift backends.

Runs repeated polynomial filter applications over a generated road-style
complex with the jit kernel and with the bincount fallback, in the same
process, and prints a small table. The jit path needs a warmup call so
compilation cost does not pollute the numbers.

Usage: python benchmarks/bench_shifting.py [--nodes N] [--edges M]
"""
import argparse
import time

import numpy as np

import simplicial_filters as sf
from simplicial_filters._kernels import _HAVE_NUMBA


def time_apply(sc, coeffs, flows, backend, repeats):
    low, up = sf.shift_operators(sc, backend=backend)
    from simplicial_filters.filters import apply_operators

    apply_operators(low, up, coeffs, flows[0])  # warmup (jit compile)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for flow in flows:
            apply_operators(low, up, coeffs, flow)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--nodes", type=int, default=546)
    parser.add_argument("--edges", type=int, default=1088)
    parser.add_argument("--seed", type=int, default=11)
    parser.add_argument("--order", type=int, default=10)
    parser.add_argument("--flows", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    sc = sf.generate_road_complex(args.nodes, args.edges, args.seed)
    rng = np.random.default_rng(0)
    coeffs = sf.FilterCoefficients(
        0.5,
        tuple(rng.standard_normal(args.order)),
        tuple(rng.standard_normal(args.order)),
    )
    flows = [rng.standard_normal(sc.n_edges) for _ in range(args.flows)]

    print(f"complex: {sc.vertex_count} nodes, {sc.n_edges} edges, "
          f"{sc.n_triangles} triangles; order {args.order} filter, "
          f"{args.flows} flows per pass")

    t_numpy = time_apply(sc, coeffs, flows, "numpy", args.repeats)
    print(f"numpy bincount: {t_numpy * 1e3:8.2f} ms/pass")
    if _HAVE_NUMBA:
        t_numba = time_apply(sc, coeffs, flows, "numba", args.repeats)
        print(f"numba jit:      {t_numba * 1e3:8.2f} ms/pass "
              f"({t_numpy / t_numba:.2f}x)")
        low_nb, up_nb = sf.shift_operators(sc, backend="numba")
        low_np, up_np = sf.shift_operators(sc, backend="numpy")
        gap = np.abs(low_nb.matvec(flows[0]) - low_np.matvec(flows[0])).max()
        print(f"backend agreement: max |diff| = {gap:.3e}")
    else:
        print("numba not importable; jit lane skipped")


if __name__ == "__main__":
    main()
