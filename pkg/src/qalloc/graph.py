"""Undirected simple graphs with stable vertex ids.

Vertices are the dense integers ``0..vertex_count-1``.  Deleting a vertex
flips its liveness bit instead of renumbering, so ids held elsewhere (colorings,
failure traces) keep pointing at the same vertex.
"""
from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Optional

import numpy as np

from ._backend import kernels
from .errors import InvalidArgumentError, InvalidVertexError

Edge = tuple[int, int]


class LabeledGraph:
    """Undirected simple graph over integer vertex ids with a liveness mask."""

    def __init__(self, vertex_count: int, edges: Iterable[Edge] = ()):
        if vertex_count < 0:
            raise InvalidArgumentError("vertex_count must be non-negative")
        self._adj: list[set[int]] = [set() for _ in range(vertex_count)]
        self._alive = [True] * vertex_count
        for u, v in edges:
            self.add_edge(u, v)

    # construction helpers

    @classmethod
    def path(cls, n: int) -> "LabeledGraph":
        return cls(n, ((i, i + 1) for i in range(n - 1)))

    @classmethod
    def cycle(cls, n: int) -> "LabeledGraph":
        if n < 3:
            raise InvalidArgumentError("a cycle needs at least 3 vertices")
        return cls(n, ((i, (i + 1) % n) for i in range(n)))

    @classmethod
    def complete(cls, n: int) -> "LabeledGraph":
        return cls(n, ((i, j) for i in range(n) for j in range(i + 1, n)))

    @classmethod
    def grid(cls, rows: int, cols: int) -> "LabeledGraph":
        """Nearest-neighbour grid; vertex ``r * cols + c`` sits at row r, column c."""
        if rows < 1 or cols < 1:
            raise InvalidArgumentError("grid dimensions must be positive")
        edges = []
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    edges.append((v, v + 1))
                if r + 1 < rows:
                    edges.append((v, v + cols))
        return cls(rows * cols, edges)

    def copy(self) -> "LabeledGraph":
        g = LabeledGraph(0)
        g._adj = [set(a) for a in self._adj]
        g._alive = list(self._alive)
        return g

    # queries

    @property
    def vertex_count(self) -> int:
        return len(self._adj)

    def is_live(self, v: int) -> bool:
        return 0 <= v < len(self._adj) and self._alive[v]

    def check_vertex(self, v: int) -> None:
        if not self.is_live(v):
            raise InvalidVertexError(f"vertex {v} is not a live vertex")

    def live_vertices(self) -> list[int]:
        return [v for v, a in enumerate(self._alive) if a]

    @property
    def live_count(self) -> int:
        return sum(self._alive)

    def neighbors(self, v: int) -> set[int]:
        self.check_vertex(v)
        return set(self._adj[v])

    def degree(self, v: int) -> int:
        self.check_vertex(v)
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return self.is_live(u) and v in self._adj[u]

    def edges(self) -> list[Edge]:
        """Sorted list of edges as ``(u, v)`` with ``u < v``."""
        return sorted((u, v) for u, adj in enumerate(self._adj) for v in adj if u < v)

    @property
    def edge_count(self) -> int:
        return sum(len(a) for a in self._adj) // 2

    def __iter__(self) -> Iterator[int]:
        return iter(self.live_vertices())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LabeledGraph):
            return NotImplemented
        return self._alive == other._alive and self._adj == other._adj

    def __repr__(self) -> str:
        return f"LabeledGraph(live={self.live_count}/{self.vertex_count}, edges={self.edge_count})"

    # mutation

    def add_edge(self, u: int, v: int) -> None:
        self.check_vertex(u)
        self.check_vertex(v)
        if u == v:
            raise InvalidArgumentError(f"self-loop at {u}")
        self._adj[u].add(v)
        self._adj[v].add(u)

    def remove_edge(self, u: int, v: int) -> None:
        self._adj[u].discard(v)
        self._adj[v].discard(u)

    def toggle_edge(self, u: int, v: int) -> None:
        if v in self._adj[u]:
            self.remove_edge(u, v)
        else:
            self.add_edge(u, v)

    def delete_vertex(self, v: int) -> None:
        self.check_vertex(v)
        for w in self._adj[v]:
            self._adj[w].discard(v)
        self._adj[v].clear()
        self._alive[v] = False

    def delete_vertices(self, vs: Iterable[int]) -> None:
        for v in vs:
            if self._alive[v]:
                self.delete_vertex(v)

    def induced_subgraph(self, keep: Iterable[int]) -> "LabeledGraph":
        """Copy with every live vertex outside ``keep`` deleted (ids preserved)."""
        keep = set(keep)
        g = self.copy()
        g.delete_vertices([v for v in self.live_vertices() if v not in keep])
        return g

    # kernel interop

    def to_csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        degrees = [len(a) for a in self._adj]
        indptr = np.zeros(len(self._adj) + 1, dtype=np.int32)
        np.cumsum(degrees, out=indptr[1:])
        indices = np.fromiter(
            (w for a in self._adj for w in sorted(a)), dtype=np.int32, count=int(indptr[-1])
        )
        alive = np.fromiter(self._alive, dtype=np.uint8, count=len(self._alive))
        return indptr, indices, alive

    # serialization

    def to_edgelist(self) -> str:
        lines = [f"n {self.vertex_count}"]
        dead = [v for v, a in enumerate(self._alive) if not a]
        if dead:
            lines.append("dead " + " ".join(map(str, dead)))
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edgelist(cls, text: str) -> "LabeledGraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows or rows[0][0] != "n" or len(rows[0]) != 2:
            raise InvalidArgumentError("edge list must start with 'n <vertex_count>'")
        g = cls(int(rows[0][1]))
        dead: list[int] = []
        for row in rows[1:]:
            if row[0] == "dead":
                dead.extend(int(x) for x in row[1:])
            elif len(row) == 2:
                g.add_edge(int(row[0]), int(row[1]))
            else:
                raise InvalidArgumentError(f"malformed edge line: {' '.join(row)}")
        g.delete_vertices(dead)
        return g


def shortest_path_distance(g: LabeledGraph, u: int, v: int) -> Optional[int]:
    """Hop distance between ``u`` and ``v``; ``None`` when no path exists."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        return 0
    seen = {u: 0}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        for w in g._adj[x]:
            if w not in seen:
                if w == v:
                    return seen[x] + 1
                seen[w] = seen[x] + 1
                queue.append(w)
    return None


def bfs_distances(g: LabeledGraph, sources: Iterable[int]) -> np.ndarray:
    """Multi-source hop distances to every vertex (-1 where unreachable or dead)."""
    sources = list(sources)
    for s in sources:
        g.check_vertex(s)
    indptr, indices, alive = g.to_csr()
    return kernels.bfs_distances(indptr, indices, alive, sources)


def connected_components(g: LabeledGraph) -> list[frozenset[int]]:
    """Partition of the live vertices into maximal connected sets, ordered by smallest id."""
    seen: set[int] = set()
    parts = []
    for s in g.live_vertices():
        if s in seen:
            continue
        comp = {s}
        queue = deque([s])
        while queue:
            x = queue.popleft()
            for w in g._adj[x]:
                if w not in comp:
                    comp.add(w)
                    queue.append(w)
        seen |= comp
        parts.append(frozenset(comp))
    return parts


def diameter(g: LabeledGraph) -> Optional[int]:
    """Largest finite hop distance between live vertices (``None`` for an empty graph)."""
    live = g.live_vertices()
    if not live:
        return None
    indptr, indices, alive = g.to_csr()
    return max(int(kernels.bfs_distances(indptr, indices, alive, [s]).max()) for s in live)


def max_vertex_disjoint_paths(g: LabeledGraph, s: int, t: int) -> int:
    """Maximum number of s-t paths that pairwise share only their endpoints.

    A direct s-t edge counts as one path.  The remaining paths are counted by a
    unit-capacity max-flow from the neighbours of ``s`` to the neighbours of
    ``t`` with ``s`` and ``t`` themselves removed.
    """
    g.check_vertex(s)
    g.check_vertex(t)
    if s == t:
        raise InvalidArgumentError("s and t must differ")
    indptr, indices, alive = g.to_csr()
    alive[s] = 0
    alive[t] = 0
    src = np.zeros_like(alive)
    sink = np.zeros_like(alive)
    src[list(g._adj[s] - {t})] = 1
    sink[list(g._adj[t] - {s})] = 1
    direct = 1 if t in g._adj[s] else 0
    return direct + int(kernels.vertex_disjoint_flow(indptr, indices, alive, src, sink))


def set_disjoint_paths(g: LabeledGraph, sources: Iterable[int], sinks: Iterable[int]) -> int:
    """Maximum number of fully vertex-disjoint paths from a vertex set to another.

    Equivalent to attaching a virtual source to every vertex of ``sources`` and
    a virtual sink to every vertex of ``sinks`` and counting internally
    disjoint paths between the two virtual vertices.
    """
    indptr, indices, alive = g.to_csr()
    src = np.zeros_like(alive)
    sink = np.zeros_like(alive)
    for v in sources:
        g.check_vertex(v)
        src[v] = 1
    for v in sinks:
        g.check_vertex(v)
        sink[v] = 1
    return int(kernels.vertex_disjoint_flow(indptr, indices, alive, src, sink))
