"""Qubit-to-node allocation strategies: clustered, random and annealed."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._backend import kernels
from .errors import InvalidArgumentError
from .graph import LabeledGraph
from .topology import Coloring

STRATEGIES = ("optimized", "random", "clustered")


@dataclass(frozen=True)
class SAParams:
    initial_temperature: float = 10.0
    cooling_rate: float = 0.99
    iterations: int = 5000

    def __post_init__(self):
        if not 0.0 < self.cooling_rate < 1.0:
            raise InvalidArgumentError("cooling_rate must lie in (0, 1)")
        if self.initial_temperature <= 0:
            raise InvalidArgumentError("initial_temperature must be positive")
        if self.iterations < 1:
            raise InvalidArgumentError("iterations must be positive")


@dataclass(frozen=True)
class AllocationSpec:
    strategy: str
    node_count: int
    seed: int = 0
    sa_params: SAParams = field(default_factory=SAParams)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise InvalidArgumentError(f"unknown strategy {self.strategy!r}")
        if self.node_count < 1:
            raise InvalidArgumentError("node_count must be at least 1")


@dataclass(frozen=True)
class AnnealResult:
    coloring: Coloring
    objective: int
    tie_break: int
    initial_objective: int


def _block_sizes(n: int, c_count: int) -> np.ndarray:
    base, extra = divmod(n, c_count)
    return np.array([base + 1 if i < extra else base for i in range(c_count)])


def allocate_clustered(g: LabeledGraph, c_count: int) -> Coloring:
    """Contiguous row-major blocks; block ``i`` goes to node ``i``.

    Block sizes differ by at most one, larger blocks first.  Lattice graphs
    built by :meth:`LabeledGraph.grid` number vertices row-major, so id order
    is the traversal order.
    """
    live = g.live_vertices()
    if c_count < 1 or c_count > len(live):
        raise InvalidArgumentError(f"cannot split {len(live)} vertices into {c_count} blocks")
    colors = np.full(g.vertex_count, -1, dtype=np.int32)
    colors[live] = np.repeat(np.arange(c_count), _block_sizes(len(live), c_count))
    return Coloring(colors, c_count)


def allocate_random(g: LabeledGraph, c_count: int, seed: int) -> Coloring:
    """Independent uniform node per vertex; some nodes may end up with nothing."""
    if c_count < 1:
        raise InvalidArgumentError("c_count must be at least 1")
    rng = np.random.default_rng(seed)
    live = g.live_vertices()
    colors = np.full(g.vertex_count, -1, dtype=np.int32)
    colors[live] = rng.integers(0, c_count, size=len(live))
    return Coloring(colors, c_count)


def anneal_coloring(
    g: LabeledGraph,
    c_count: int,
    seed: int,
    params: Optional[SAParams] = None,
    allow_uneven: bool = False,
) -> AnnealResult:
    """Simulated annealing over balanced colorings, minimizing the worst inter-node distance.

    Starts from a seeded random balanced coloring and proposes swaps of two
    vertices with different colors, so class sizes never change.  With
    ``allow_uneven`` the vertex count need not be a multiple of ``c_count``
    and class sizes differ by at most one.
    """
    params = params or SAParams()
    live = g.live_vertices()
    n = len(live)
    if c_count < 1 or c_count > n:
        raise InvalidArgumentError(f"cannot allocate {n} vertices to {c_count} nodes")
    if n % c_count and not allow_uneven:
        raise InvalidArgumentError(
            f"{n} vertices do not split evenly over {c_count} nodes"
        )
    sub = g if n == g.vertex_count else _compact(g, live)
    indptr, indices, _ = sub.to_csr()

    rng = np.random.default_rng(seed)
    init = rng.permutation(np.repeat(np.arange(c_count), _block_sizes(n, c_count))).astype(np.int32)
    draws = rng.random((params.iterations, 3))
    best, obj, sec, init_obj, _ = kernels.anneal(
        indptr, indices, init, c_count, float(params.initial_temperature),
        float(params.cooling_rate), draws,
    )
    colors = np.full(g.vertex_count, -1, dtype=np.int32)
    colors[live] = best
    return AnnealResult(Coloring(colors, c_count), int(obj), int(sec), int(init_obj))


def allocate_optimized(
    g: LabeledGraph,
    c_count: int,
    seed: int,
    params: Optional[SAParams] = None,
    allow_uneven: bool = False,
) -> Coloring:
    return anneal_coloring(g, c_count, seed, params, allow_uneven).coloring


def _compact(g: LabeledGraph, live: list[int]) -> LabeledGraph:
    index = {v: k for k, v in enumerate(live)}
    return LabeledGraph(len(live), ((index[u], index[v]) for u, v in g.edges()))


def allocate(spec: AllocationSpec, g: LabeledGraph, allow_uneven: bool = False) -> Coloring:
    if spec.strategy == "clustered":
        return allocate_clustered(g, spec.node_count)
    if spec.strategy == "random":
        return allocate_random(g, spec.node_count, spec.seed)
    return allocate_optimized(g, spec.node_count, spec.seed, spec.sa_params, allow_uneven)
