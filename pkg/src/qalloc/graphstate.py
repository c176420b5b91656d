"""Graph states as graphs: local complementation and Pauli measurement rewrites.

Only the graph of the post-measurement state is tracked.  The local unitary
that relates the physical post-measurement state to the graph state is not
modeled, and only the +1 outcome branch is considered.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Sequence

from .errors import InvalidArgumentError
from .graph import LabeledGraph

BASES = ("X", "Y", "Z")


class GraphState:
    """Stabilizer state fixed by ``X_a prod_{b in N(a)} Z_b`` for every live qubit ``a``.

    Operations never mutate ``self``; they return a new state.
    """

    def __init__(self, graph: LabeledGraph):
        self._graph = graph.copy()

    @property
    def graph(self) -> LabeledGraph:
        return self._graph.copy()

    @property
    def qubits(self) -> list[int]:
        return self._graph.live_vertices()

    def neighbors(self, a: int) -> set[int]:
        return self._graph.neighbors(a)

    def edges(self) -> list[tuple[int, int]]:
        return self._graph.edges()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GraphState):
            return NotImplemented
        return self._graph == other._graph

    def __repr__(self) -> str:
        return f"GraphState(qubits={len(self.qubits)}, edges={self.edges()})"


@dataclass(frozen=True)
class MeasurementOutcomeGraph:
    result_graph: LabeledGraph
    basis: str
    measured_qubit: int
    special_neighbor: Optional[int] = None

    @property
    def state(self) -> GraphState:
        return GraphState(self.result_graph)


def linear_cluster(n: int) -> GraphState:
    if n < 1:
        raise InvalidArgumentError("a linear cluster needs at least one qubit")
    return GraphState(LabeledGraph.path(n))


def lattice_cluster(rows: int, cols: int) -> GraphState:
    if rows < 1 or cols < 1:
        raise InvalidArgumentError("lattice dimensions must be positive")
    return GraphState(LabeledGraph.grid(rows, cols))


def _lc_inplace(g: LabeledGraph, a: int) -> None:
    for u, v in combinations(sorted(g.neighbors(a)), 2):
        g.toggle_edge(u, v)


def local_complement(state: GraphState, a: int) -> GraphState:
    """Complement the edges among the neighbours of ``a``."""
    g = state.graph
    g.check_vertex(a)
    _lc_inplace(g, a)
    return GraphState(g)


def _measure_inplace(g: LabeledGraph, a: int, basis: str, b0: Optional[int]) -> Optional[int]:
    g.check_vertex(a)
    if basis not in BASES:
        raise InvalidArgumentError(f"unknown basis {basis!r}")
    nbrs = g.neighbors(a)
    if b0 is not None and b0 not in nbrs:
        raise InvalidArgumentError(f"b0={b0} is not a neighbour of qubit {a}")
    if not nbrs:
        g.delete_vertex(a)
        return None
    if basis == "Z":
        g.delete_vertex(a)
        return None
    if basis == "Y":
        _lc_inplace(g, a)
        g.delete_vertex(a)
        return None
    if b0 is None:
        b0 = min(nbrs)
    _lc_inplace(g, b0)
    _lc_inplace(g, a)
    g.delete_vertex(a)
    _lc_inplace(g, b0)
    return b0


def measure_pauli(
    state: GraphState, a: int, basis: str, b0: Optional[int] = None
) -> MeasurementOutcomeGraph:
    """Graph of the state left after measuring qubit ``a`` in a Pauli basis.

    Z deletes ``a``; Y complements at ``a`` then deletes it; X complements at
    a neighbour ``b0`` (smallest neighbour by default), then at ``a``, deletes
    ``a`` and complements at ``b0`` again.
    """
    g = state.graph
    used = _measure_inplace(g, a, basis.upper(), b0)
    return MeasurementOutcomeGraph(g, basis.upper(), a, used if basis.upper() == "X" else None)


def _is_path(g: LabeledGraph, path: Sequence[int]) -> bool:
    if len(path) < 2 or len(set(path)) != len(path):
        return False
    if not all(g.is_live(v) for v in path):
        return False
    return all(g.has_edge(u, v) for u, v in zip(path, path[1:]))


def extract_bell_plan(state: GraphState, path: Sequence[int]) -> list[tuple[int, str, Optional[int]]]:
    """Measurement schedule that isolates ``path`` and joins its endpoints.

    Every live neighbour of the path outside it is Z-measured, then the
    interior qubits are X-measured in order.  Each X measurement uses the
    first endpoint as ``b0``: once the path is isolated that endpoint is a
    leaf attached to the next interior qubit, and the rewrite contracts the
    path by one qubit.  (Using the following path qubit instead leaves a
    star after the first step, and the following rewrite has no valid ``b0``.)

    The endpoints end up as an isolated pair only when the path has no chords.
    """
    g = state._graph
    path = list(path)
    if not _is_path(g, path):
        raise InvalidArgumentError(f"{path} is not a path in the graph")
    on_path = set(path)
    outside = sorted({w for v in path for w in g.neighbors(v)} - on_path)
    plan: list[tuple[int, str, Optional[int]]] = [(w, "Z", None) for w in outside]
    plan.extend((v, "X", path[0]) for v in path[1:-1])
    return plan


def extract_bell_along_path(state: GraphState, path: Sequence[int]) -> GraphState:
    g = state.graph
    for qubit, basis, b0 in extract_bell_plan(state, path):
        _measure_inplace(g, qubit, basis, b0)
    return GraphState(g)
