"""Entanglement topologies: a connectivity graph plus a vertex-to-node coloring.

Each vertex of the connectivity graph is a logical system made of ``mu``
physical qubits (``3 * mu`` with decorations).  Decorations change memory
accounting and failure behaviour but never the connectivity graph.

Node metrics skip empty color classes; random allocation can leave a node
without any vertex.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from ._backend import kernels
from .errors import (
    DegenerateTopologyError,
    EmptyClassError,
    InvalidArgumentError,
)
from .graph import LabeledGraph

DECORATION_FACTOR = 3
# qubits per pre-shared Bell pair in the all-to-all baseline (decorated pair)
BELL_PAIR_QUBITS = 6


class Coloring:
    """Map from vertex id to node id in ``0..node_count-1``; ``-1`` marks an uncolored vertex."""

    def __init__(self, assignment: Sequence[int], node_count: Optional[int] = None):
        arr = np.asarray(list(assignment) if not isinstance(assignment, np.ndarray) else assignment)
        arr = arr.astype(np.int32, copy=True).reshape(-1)
        if node_count is None:
            node_count = int(arr.max()) + 1 if arr.size and arr.max() >= 0 else 0
        if arr.size and (arr.min() < -1 or arr.max() >= node_count):
            raise InvalidArgumentError(f"node ids must lie in 0..{node_count - 1}")
        arr.setflags(write=False)
        self._assignment = arr
        self.node_count = int(node_count)

    @property
    def assignment(self) -> np.ndarray:
        return self._assignment

    def __len__(self) -> int:
        return len(self._assignment)

    def __getitem__(self, v: int) -> int:
        return int(self._assignment[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Coloring):
            return NotImplemented
        return self.node_count == other.node_count and np.array_equal(
            self._assignment, other._assignment
        )

    def __repr__(self) -> str:
        return f"Coloring({self._assignment.tolist()}, node_count={self.node_count})"

    def tolist(self) -> list[int]:
        return self._assignment.tolist()

    def color_class(self, c: int) -> list[int]:
        return np.flatnonzero(self._assignment == c).tolist()

    def class_sizes(self) -> np.ndarray:
        a = self._assignment
        return np.bincount(a[a >= 0], minlength=self.node_count)


class WorstDistance(NamedTuple):
    value: Optional[int]
    unreachable: frozenset


@dataclass(frozen=True)
class MemoryReport:
    per_node: dict
    max_per_node: int
    total: int


@dataclass(frozen=True, eq=False)
class EntanglementTopology:
    connectivity: LabeledGraph
    coloring: Coloring
    mu: int = 1
    decorated: bool = False
    lattice_dims: Optional[tuple[int, int]] = None
    failed_nodes: tuple[int, ...] = field(default=())

    def __post_init__(self):
        if self.mu < 1:
            raise InvalidArgumentError("mu must be a positive integer")
        if len(self.coloring) != self.connectivity.vertex_count:
            raise InvalidArgumentError(
                f"coloring covers {len(self.coloring)} vertices, graph has "
                f"{self.connectivity.vertex_count}"
            )
        a = self.coloring.assignment
        live = self.connectivity.live_vertices()
        if live and (a[live] < 0).any():
            raise InvalidArgumentError("every live connectivity vertex must be colored")
        object.__setattr__(self, "connectivity", self.connectivity.copy())

    @property
    def node_count(self) -> int:
        return self.coloring.node_count

    def replace(self, **changes) -> "EntanglementTopology":
        fields = dict(
            connectivity=self.connectivity,
            coloring=self.coloring,
            mu=self.mu,
            decorated=self.decorated,
            lattice_dims=self.lattice_dims,
            failed_nodes=self.failed_nodes,
        )
        fields.update(changes)
        return EntanglementTopology(**fields)

    @cached_property
    def csr(self):
        return self.connectivity.to_csr()

    @cached_property
    def live_colors(self) -> np.ndarray:
        """Per-vertex node ids with -1 on deleted vertices."""
        _, _, alive = self.csr
        return np.where(alive.astype(bool), self.coloring.assignment, -1).astype(np.int32)

    def color_class(self, c: int) -> list[int]:
        """Live vertices owned by node ``c``."""
        return np.flatnonzero(self.live_colors == c).tolist()

    def class_sizes(self) -> np.ndarray:
        lc = self.live_colors
        return np.bincount(lc[lc >= 0], minlength=self.node_count)

    def nonempty_nodes(self) -> list[int]:
        return np.flatnonzero(self.class_sizes() > 0).tolist()

    def empty_node_count(self) -> int:
        return self.node_count - len(self.nonempty_nodes())

    @cached_property
    def class_distances(self) -> np.ndarray:
        """Node-by-node minimum hop distances; -1 for unreachable pairs or empty classes."""
        indptr, indices, alive = self.csr
        return kernels.class_distance_matrix(indptr, indices, alive, self.live_colors, self.node_count)

    def restricted(self, vertices) -> "EntanglementTopology":
        """Same topology with every live vertex outside ``vertices`` deleted."""
        return self.replace(connectivity=self.connectivity.induced_subgraph(vertices))

    # serialization

    def to_dict(self) -> dict:
        out = {
            "dims": list(self.lattice_dims) if self.lattice_dims else None,
            "mu": self.mu,
            "decorated": self.decorated,
            "edges": [list(e) for e in self.connectivity.edges()],
            "coloring": [c if c >= 0 else None for c in self.coloring.tolist()],
            "node_count": self.node_count,
        }
        dead = [v for v in range(self.connectivity.vertex_count) if not self.connectivity.is_live(v)]
        if dead:
            out["dead"] = dead
        if self.failed_nodes:
            out["failed_nodes"] = list(self.failed_nodes)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, doc: dict) -> "EntanglementTopology":
        colors = [-1 if c is None else int(c) for c in doc["coloring"]]
        g = LabeledGraph(len(colors), (tuple(e) for e in doc["edges"]))
        g.delete_vertices(doc.get("dead", []))
        dims = tuple(doc["dims"]) if doc.get("dims") else None
        return cls(
            g,
            Coloring(colors, doc["node_count"]),
            mu=int(doc["mu"]),
            decorated=bool(doc["decorated"]),
            lattice_dims=dims,
            failed_nodes=tuple(doc.get("failed_nodes", ())),
        )

    @classmethod
    def from_json(cls, text: str) -> "EntanglementTopology":
        return cls.from_dict(json.loads(text))


ColoringLike = Union[Coloring, Sequence[int]]


def _as_coloring(coloring: ColoringLike, node_count: Optional[int] = None) -> Coloring:
    if isinstance(coloring, Coloring):
        return coloring
    return Coloring(coloring, node_count)


def build_topology(
    graph: LabeledGraph, coloring: ColoringLike, mu: int = 1, decorated: bool = False
) -> EntanglementTopology:
    return EntanglementTopology(graph, _as_coloring(coloring), mu=mu, decorated=decorated)


def build_snake(
    n_logical: int, mu: int, decorated: bool, coloring: ColoringLike
) -> EntanglementTopology:
    if n_logical < 1:
        raise InvalidArgumentError("n_logical must be positive")
    col = _as_coloring(coloring)
    if len(col) != n_logical:
        raise InvalidArgumentError(f"coloring covers {len(col)} vertices, expected {n_logical}")
    return EntanglementTopology(
        LabeledGraph.path(n_logical), col, mu=mu, decorated=decorated, lattice_dims=(1, n_logical)
    )


def build_lattice(
    m_logical: int, n_logical: int, mu: int, decorated: bool, coloring: ColoringLike
) -> EntanglementTopology:
    if m_logical < 1 or n_logical < 1:
        raise InvalidArgumentError("lattice dimensions must be positive")
    if m_logical == 1:
        return build_snake(n_logical, mu, decorated, coloring)
    col = _as_coloring(coloring)
    if len(col) != m_logical * n_logical:
        raise InvalidArgumentError(
            f"coloring covers {len(col)} vertices, expected {m_logical * n_logical}"
        )
    return EntanglementTopology(
        LabeledGraph.grid(m_logical, n_logical),
        col,
        mu=mu,
        decorated=decorated,
        lattice_dims=(m_logical, n_logical),
    )


def _require_class(t: EntanglementTopology, c: int) -> None:
    if not 0 <= c < t.node_count:
        raise InvalidArgumentError(f"unknown node {c}")
    if t.class_sizes()[c] == 0:
        raise EmptyClassError(f"node {c} owns no live vertex")


def inter_node_distance(t: EntanglementTopology, c: int, c2: int) -> Optional[int]:
    """Minimum hop distance between any vertex of node ``c`` and any of ``c2``."""
    if c == c2:
        raise InvalidArgumentError("inter-node distance needs two distinct nodes")
    _require_class(t, c)
    _require_class(t, c2)
    d = int(t.class_distances[c, c2])
    return None if d < 0 else d


def worst_inter_node_distance(t: EntanglementTopology, c: int) -> WorstDistance:
    """Largest inter-node distance from ``c`` to any other nonempty node.

    Unreachable nodes are left out of the maximum and listed in ``unreachable``.
    """
    _require_class(t, c)
    others = [o for o in t.nonempty_nodes() if o != c]
    if not others:
        raise DegenerateTopologyError(f"node {c} is the only nonempty node")
    row = t.class_distances[c]
    finite = [int(row[o]) for o in others if row[o] >= 0]
    unreachable = frozenset(o for o in others if row[o] < 0)
    return WorstDistance(max(finite) if finite else None, unreachable)


def worst_distances(t: EntanglementTopology) -> dict[int, Optional[int]]:
    """Worst inter-node distance of every nonempty node."""
    nodes = t.nonempty_nodes()
    if len(nodes) < 2:
        raise DegenerateTopologyError("fewer than two nonempty nodes")
    D = t.class_distances
    out = {}
    for c in nodes:
        finite = [int(D[c, o]) for o in nodes if o != c and D[c, o] >= 0]
        out[c] = max(finite) if finite else None
    return out


def minmax_objective(t: EntanglementTopology) -> int:
    """Worst-case inter-node distance over all nodes (the allocation objective)."""
    values = [v for v in worst_distances(t).values() if v is not None]
    if not values:
        raise DegenerateTopologyError("no pair of nodes is connected")
    return max(values)


def kappa_inter_node(t: EntanglementTopology, c: int, c2: int) -> int:
    """Number of fully vertex-disjoint paths joining distinct vertices of ``c`` and ``c2``."""
    if c == c2:
        raise InvalidArgumentError("kappa needs two distinct nodes")
    _require_class(t, c)
    _require_class(t, c2)
    return _kappa(t, c, c2)


def _kappa(t: EntanglementTopology, c: int, c2: int) -> int:
    indptr, indices, alive = t.csr
    lc = t.live_colors
    src = (lc == c).astype(np.uint8)
    sink = (lc == c2).astype(np.uint8)
    return int(kernels.vertex_disjoint_flow(indptr, indices, alive, src, sink))


def kappa_matrix(t: EntanglementTopology) -> dict[tuple[int, int], int]:
    nodes = t.nonempty_nodes()
    return {(a, b): _kappa(t, a, b) for i, a in enumerate(nodes) for b in nodes[i + 1 :]}


def kappa_bar(t: EntanglementTopology) -> float:
    """Mean of kappa over all unordered pairs of nonempty nodes."""
    nodes = t.nonempty_nodes()
    if len(nodes) < 2:
        raise DegenerateTopologyError("fewer than two nonempty nodes")
    values = kappa_matrix(t).values()
    return 2.0 * sum(values) / (len(nodes) * (len(nodes) - 1))


def qubits_per_logical_vertex(t: EntanglementTopology) -> int:
    return t.mu * (DECORATION_FACTOR if t.decorated else 1)


def memory_report(t: EntanglementTopology) -> MemoryReport:
    per_vertex = qubits_per_logical_vertex(t)
    sizes = t.class_sizes()
    per_node = {c: int(sizes[c]) * per_vertex for c in range(t.node_count)}
    return MemoryReport(
        per_node=per_node,
        max_per_node=max(per_node.values(), default=0),
        total=sum(per_node.values()),
    )


def all_to_all_memory(c_count: int) -> MemoryReport:
    """Memory for one decorated Bell pair shared by every unordered pair of nodes."""
    if c_count < 2:
        raise InvalidArgumentError("the all-to-all baseline needs at least two nodes")
    each = BELL_PAIR_QUBITS // 2 * (c_count - 1)
    per_node = {c: each for c in range(c_count)}
    return MemoryReport(per_node=per_node, max_per_node=each, total=each * c_count)


def all_to_all_topology(c_count: int) -> EntanglementTopology:
    """Complete connectivity graph with one vertex per node (the Bell-pair baseline)."""
    if c_count < 2:
        raise InvalidArgumentError("the all-to-all baseline needs at least two nodes")
    return EntanglementTopology(
        LabeledGraph.complete(c_count), Coloring(range(c_count), c_count), decorated=True
    )
