"""Nested node failures, local re-healing and per-component resilience metrics.

Without decorations a failed node takes its own vertices and every logical
neighbour with it (the neighbours are Z-measured out of the lattice).  With
decorations only the node's own vertices disappear.

After a failure the graph may split.  A node whose vertices end up in several
components can reconnect them with local operations, modelled by adding
edges between its own vertices.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgumentError
from .graph import LabeledGraph, connected_components
from .topology import EntanglementTopology, kappa_bar, minmax_objective


def fail_node(t: EntanglementTopology, c: int) -> EntanglementTopology:
    if not 0 <= c < t.node_count:
        raise InvalidArgumentError(f"unknown node {c}")
    if c in t.failed_nodes:
        raise InvalidArgumentError(f"node {c} has already failed")
    g = t.connectivity.copy()
    lost = set(t.color_class(c))
    if not t.decorated:
        lost |= {w for v in lost for w in g.neighbors(v)}
    g.delete_vertices(sorted(lost))
    return t.replace(connectivity=g, failed_nodes=t.failed_nodes + (c,))


class _DisjointSet:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def reheal_edges(t: EntanglementTopology) -> list[tuple[int, int]]:
    """Edges that reconnect every node's vertices into a single component.

    For each node in id order, the lowest vertex of the node in each component
    it touches is linked to the lowest such representative (a star).
    """
    g = t.connectivity
    ds = _DisjointSet(g.vertex_count)
    for u, v in g.edges():
        ds.union(u, v)
    added = []
    for c in range(t.node_count):
        reps: dict[int, int] = {}
        for v in t.color_class(c):
            reps.setdefault(ds.find(v), v)
        if len(reps) < 2:
            continue
        hub, *rest = sorted(reps.values())
        for v in rest:
            added.append((hub, v))
            ds.union(hub, v)
    return added


def reheal(t: EntanglementTopology) -> EntanglementTopology:
    edges = reheal_edges(t)
    if not edges:
        return t
    g = t.connectivity.copy()
    for u, v in edges:
        g.add_edge(u, v)
    return t.replace(connectivity=g)


@dataclass(frozen=True)
class ComponentMetrics:
    kappa_hat: float
    d_hat: float
    qualifying: int
    excluded: int


def component_metrics(t: EntanglementTopology) -> ComponentMetrics:
    """Per-component averages of kappa-bar and worst-case inter-node distance.

    Components holding fewer than two nodes have no inter-node pair; they are
    left out of both averages and counted in ``excluded``.  When nothing
    qualifies both averages are 0.
    """
    kappas = []
    dists = []
    excluded = 0
    colors = t.live_colors
    for comp in connected_components(t.connectivity):
        present = np.unique(colors[sorted(comp)])
        if len(present) < 2:
            excluded += 1
            continue
        sub = t.restricted(comp)
        kappas.append(kappa_bar(sub))
        dists.append(minmax_objective(sub))
    if not kappas:
        return ComponentMetrics(0.0, 0.0, 0, excluded)
    return ComponentMetrics(
        float(np.mean(kappas)), float(np.mean(dists)), len(kappas), excluded
    )


def kappa_hat(t: EntanglementTopology) -> float:
    return component_metrics(t).kappa_hat


def d_hat(t: EntanglementTopology) -> float:
    return component_metrics(t).d_hat


@dataclass(frozen=True)
class StepRecord:
    failures: int
    failed_node: Optional[int]
    surviving_graph: LabeledGraph
    components: list
    kappa_hat: float
    d_hat: float
    excluded_components: int
    reheal_edges: int = 0

    def to_dict(self) -> dict:
        return {
            "failures": self.failures,
            "failed_node": self.failed_node,
            "surviving_vertices": self.surviving_graph.live_count,
            "component_sizes": [len(c) for c in self.components],
            "kappa_hat": self.kappa_hat,
            "d_hat": self.d_hat,
            "excluded_components": self.excluded_components,
            "reheal_edges": self.reheal_edges,
        }


@dataclass(frozen=True)
class FailureTrace:
    initial: EntanglementTopology
    failed_nodes: tuple
    steps: list = field(default_factory=list)
    seed: Optional[int] = None
    reheal_enabled: bool = True

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "reheal": self.reheal_enabled,
            "decorated": self.initial.decorated,
            "failed_nodes": list(self.failed_nodes),
            "steps": [s.to_dict() for s in self.steps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _record(t: EntanglementTopology, failures, node, n_heal) -> StepRecord:
    m = component_metrics(t)
    return StepRecord(
        failures=failures,
        failed_node=node,
        surviving_graph=t.connectivity.copy(),
        components=connected_components(t.connectivity),
        kappa_hat=m.kappa_hat,
        d_hat=m.d_hat,
        excluded_components=m.excluded,
        reheal_edges=n_heal,
    )


def run_failure_sequence(
    t: EntanglementTopology, k_failures: int, seed: int, reheal_enabled: bool = True
) -> FailureTrace:
    """Fail ``k_failures`` distinct random nodes one after another.

    The first step records the intact topology; each later step records the
    state after one more failure (and re-healing, when enabled).
    """
    candidates = [c for c in range(t.node_count) if c not in t.failed_nodes]
    if k_failures < 0 or k_failures >= len(candidates):
        raise InvalidArgumentError(
            f"k_failures must lie in 0..{len(candidates) - 1}, got {k_failures}"
        )
    rng = np.random.default_rng(seed)
    order = [int(c) for c in rng.choice(candidates, size=k_failures, replace=False)]
    steps = [_record(t, 0, None, 0)]
    current = t
    for i, c in enumerate(order, start=1):
        current = fail_node(current, c)
        n_heal = 0
        if reheal_enabled:
            n_heal = len(reheal_edges(current))
            current = reheal(current)
        steps.append(_record(current, i, c, n_heal))
    return FailureTrace(t, tuple(order), steps, seed, reheal_enabled)
