"""Time the pure-Python and compiled kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from qalloc import LabeledGraph
from qalloc._backend import available_backends


def cases():
    g = LabeledGraph.grid(10, 10)
    ip, ix, al = g.to_csr()
    rng = np.random.default_rng(0)
    colors = rng.permutation(np.repeat(np.arange(20), 5)).astype(np.int32)
    draws = rng.random((1000, 3))

    big = LabeledGraph.grid(25, 25)
    bip, bix, bal = big.to_csr()
    bcol = rng.permutation(np.repeat(np.arange(25), 25)).astype(np.int32)
    src = (bcol == 0).astype(np.uint8)
    sink = (bcol == 1).astype(np.uint8)

    return {
        "bfs 25x25 single source": lambda k: k.bfs_distances(bip, bix, bal, np.array([0], np.int32)),
        "class distances 25x25, 25 nodes": lambda k: k.class_distance_matrix(bip, bix, bal, bcol, 25),
        "disjoint-path flow 25x25": lambda k: k.vertex_disjoint_flow(bip, bix, bal, src, sink),
        "anneal 10x10, 20 nodes, 1000 steps": lambda k: k.anneal(ip, ix, colors, 20, 10.0, 0.99, draws),
    }


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = available_backends()
    print(f"{'kernel':38s}" + "".join(f"{name:>12s}" for name in backends) + f"{'speedup':>10s}")
    for label, fn in cases().items():
        times = {}
        for name, k in backends.items():
            number = 1
            times[name] = min(timeit.repeat(lambda: fn(k), number=number, repeat=args.repeat)) / number
        cols = "".join(f"{times[n] * 1e3:10.2f}ms" for n in backends)
        speed = f"{times['python'] / times['cython']:9.1f}x" if "cython" in times else ""
        print(f"{label:38s}{cols}{speed}")


if __name__ == "__main__":
    main()
