"""Slow, obviously-correct reference implementations used only by the tests."""
from __future__ import annotations

import itertools

import numpy as np


def simple_paths(adj: dict, s: int, t: int):
    """Every simple s-t path as a tuple of vertices."""
    out = []
    stack = [(s, (s,))]
    while stack:
        v, path = stack.pop()
        for w in adj[v]:
            if w == t:
                out.append(path + (t,))
            elif w not in path:
                stack.append((w, path + (w,)))
    return out


def max_disjoint_family(paths) -> int:
    """Largest family of paths whose interiors are pairwise disjoint."""
    interiors = sorted({frozenset(p[1:-1]) for p in paths}, key=len)
    # the direct edge has an empty interior and is compatible with everything
    direct = frozenset() in interiors
    interiors = [i for i in interiors if i]
    best = 0

    def search(start, used, count):
        nonlocal best
        best = max(best, count)
        if count + (len(interiors) - start) <= best:
            return
        for k in range(start, len(interiors)):
            if not interiors[k] & used:
                search(k + 1, used | interiors[k], count + 1)

    search(0, frozenset(), 0)
    return best + int(direct)


def adjacency(g) -> dict:
    return {v: sorted(g.neighbors(v)) for v in g.live_vertices()}


def brute_kappa(g, s: int, t: int) -> int:
    return max_disjoint_family(simple_paths(adjacency(g), s, t))


def brute_class_kappa(g, src, dst) -> int:
    """Disjoint paths between two vertex sets through two virtual terminals."""
    adj = adjacency(g)
    S, T = -1, -2
    adj = {v: list(ws) for v, ws in adj.items()}
    adj[S] = sorted(src)
    adj[T] = sorted(dst)
    for v in src:
        adj[v] = adj[v] + [S]
    for v in dst:
        adj[v] = adj[v] + [T]
    return max_disjoint_family(simple_paths(adj, S, T))


def bfs_all_pairs(g) -> dict:
    dist = {}
    for s in g.live_vertices():
        seen = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for v in frontier:
                for w in g.neighbors(v):
                    if w not in seen:
                        seen[w] = seen[v] + 1
                        nxt.append(w)
            frontier = nxt
        dist[s] = seen
    return dist


def objective_of(g, colors, c_count) -> int:
    dist = bfs_all_pairs(g)
    worst = 0
    for a, b in itertools.combinations(range(c_count), 2):
        sa = [v for v in g.live_vertices() if colors[v] == a]
        sb = [v for v in g.live_vertices() if colors[v] == b]
        d = min((dist[u].get(v, 10**9) for u in sa for v in sb), default=10**9)
        worst = max(worst, d)
    return worst


def exhaustive_minmax(g, c_count: int) -> int:
    """Smallest min-max objective over every balanced coloring."""
    n = g.vertex_count
    k = n // c_count
    best = 10**9
    base = [c for c in range(c_count) for _ in range(k)]
    for perm in set(itertools.permutations(base)):
        if perm[0] != 0:  # colors are interchangeable
            continue
        best = min(best, objective_of(g, perm, c_count))
    return best


# dense graph-state simulation written independently of the library oracle

_PLUS = {
    "X": np.array([1, 1]) / np.sqrt(2),
    "Y": np.array([1, 1j]) / np.sqrt(2),
    "Z": np.array([1, 0]),
}


def graph_state_vector(n: int, edges) -> np.ndarray:
    amps = np.empty(2**n, dtype=complex)
    for idx in range(2**n):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        parity = sum(bits[u] & bits[v] for u, v in edges)
        amps[idx] = (-1) ** parity
    return amps / np.sqrt(2**n)


def measure_dense(psi: np.ndarray, n: int, q: int, basis: str) -> np.ndarray:
    proj = np.conj(_PLUS[basis])
    t = np.moveaxis(psi.reshape([2] * n), q, 0)
    out = np.tensordot(proj, t, axes=(0, 0)).reshape(-1)
    return out / np.linalg.norm(out)


def reduced_rank(psi: np.ndarray, n: int, part) -> int:
    """Rank of the reduced density matrix on ``part`` (positions, not labels)."""
    rest = [q for q in range(n) if q not in part]
    t = psi.reshape([2] * n).transpose(list(part) + rest).reshape(2 ** len(part), -1)
    rho = t @ t.conj().T
    return int(np.sum(np.linalg.eigvalsh(rho) > 1e-9))


def rank_signature(psi: np.ndarray, n: int) -> list:
    return [
        reduced_rank(psi, n, part)
        for r in range(1, n // 2 + 1)
        for part in itertools.combinations(range(n), r)
    ]
