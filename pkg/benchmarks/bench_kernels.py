#!/usr/bin/env python3
"""Benchmark the pure-Python and compiled exploration kernels.

Workload: token rings of growing size. A directed cycle of N places with K
tokens has C(K+N-1, N-1) reachable markings, so the state space scales
quickly while every marking stays tiny - exactly the regime the kernels
are built for.

Run from the repository root:

    python benchmarks/bench_kernels.py
    python benchmarks/bench_kernels.py --sizes 8:6,10:8,12:8 --repeat 5
"""

from __future__ import annotations

import argparse
import math
import statistics
import sys
import time

sys.path.insert(0, "src")

from gmec import _explore_py  # noqa: E402

try:
    from gmec import _explore_c
except ImportError:
    _explore_c = None


def ring(n_places: int) -> tuple[tuple, tuple]:
    pre = tuple((i,) for i in range(n_places))
    post = tuple(((i + 1) % n_places,) for i in range(n_places))
    return pre, post


def run(kernel, n_places: int, tokens: int, repeat: int) -> tuple[float, int]:
    pre, post = ring(n_places)
    allowed = tuple(range(n_places))
    root = (tokens,) + (0,) * (n_places - 1)
    timings = []
    nodes = 0
    for _ in range(repeat):
        start = time.perf_counter()
        result = kernel.explore(n_places, pre, post, allowed, root, 10**7, 255)
        timings.append(time.perf_counter() - start)
        nodes = len(result[0])
        assert result[2] == _explore_py.STATUS_COMPLETE
    return statistics.median(timings), nodes


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="8:6,10:8,12:8",
                        help="comma-separated places:tokens pairs")
    parser.add_argument("--repeat", type=int, default=3,
                        help="repetitions per cell (median reported)")
    parser.add_argument("--check", action="store_true",
                        help="verify the kernels produce identical output")
    args = parser.parse_args()

    sizes = []
    for chunk in args.sizes.split(","):
        n, k = chunk.split(":")
        sizes.append((int(n), int(k)))

    if _explore_c is None:
        print("compiled kernel not built; benchmarking the pure kernel only")

    header = f"{'places':>7} {'tokens':>7} {'markings':>9} {'pure [s]':>10}"
    if _explore_c is not None:
        header += f" {'compiled [s]':>13} {'speedup':>8}"
    print(header)
    for n, k in sizes:
        expected = math.comb(k + n - 1, n - 1)
        pure_t, nodes = run(_explore_py, n, k, args.repeat)
        assert nodes == expected, (nodes, expected)
        row = f"{n:>7} {k:>7} {nodes:>9} {pure_t:>10.4f}"
        if _explore_c is not None:
            comp_t, comp_nodes = run(_explore_c, n, k, args.repeat)
            assert comp_nodes == nodes
            row += f" {comp_t:>13.4f} {pure_t / comp_t:>7.1f}x"
            if args.check:
                pre, post = ring(n)
                allowed = tuple(range(n))
                root = (k,) + (0,) * (n - 1)
                a = _explore_py.explore(n, pre, post, allowed, root, 10**7, 255)
                b = _explore_c.explore(n, pre, post, allowed, root, 10**7, 255)
                assert a == b, "kernel outputs diverge"
        print(row)
    return 0


if __name__ == "__main__":
    sys.exit(main())
