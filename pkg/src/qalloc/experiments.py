"""Seeded batch experiments producing CSV-ready result tables.

Trial ``i`` of every experiment uses seed ``base_seed + i``.  Trials run in
a process pool but rows are always emitted in task order, so output depends
only on the configuration.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import __version__
from ._backend import BACKEND
from .allocation import STRATEGIES, SAParams, allocate_clustered, allocate_random, anneal_coloring
from .errors import ConfigError, InvalidArgumentError
from .failures import run_failure_sequence
from .graph import LabeledGraph
from .graphstate import GraphState, measure_pauli
from .statevector import MAX_QUBITS, statevector_oracle_check
from .topology import (
    EntanglementTopology,
    Coloring,
    all_to_all_memory,
    all_to_all_topology,
    build_lattice,
    kappa_bar,
    memory_report,
    minmax_objective,
)

EXPERIMENTS = ("static-eval", "memory-compare", "resilience", "optimize", "graphstate-verify")

COLUMNS = [
    "experiment", "nodes", "M", "N", "strategy", "seed", "failures",
    "objective", "kappa", "d", "excluded", "qubits_total", "wall_time",
]
VERIFY_COLUMNS = ["experiment", "qubits", "seed", "qubit", "basis", "b0", "passed", "edges", "wall_time"]
SUMMARY_METRICS = ("objective", "kappa", "d", "excluded", "qubits_total")
GROUP_KEYS = ("experiment", "nodes", "M", "N", "strategy", "failures")


@dataclass
class ExperimentConfig:
    experiment: str
    node_count: int = 20
    lattice_list: list = field(default_factory=lambda: [(2, 10)])
    strategies: list = field(default_factory=lambda: list(STRATEGIES))
    trials: int = 1
    seed: int = 0
    mu: int = 1
    decorated: bool = False
    failures_max: Optional[int] = None
    sa_params: SAParams = field(default_factory=SAParams)
    reheal: bool = True
    node_sweep: list = field(default_factory=lambda: list(range(2, 21, 2)))
    occupancies: list = field(default_factory=lambda: [1, 2, 3, 4])
    max_qubits: int = 8

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        known = set(cls.__dataclass_fields__)
        unknown = set(doc) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        if "experiment" not in doc:
            raise ConfigError("experiment", "missing")
        try:
            if "sa_params" in doc and isinstance(doc["sa_params"], dict):
                doc["sa_params"] = SAParams(**doc["sa_params"])
        except (TypeError, InvalidArgumentError) as exc:
            raise ConfigError("sa_params", str(exc)) from None
        if "lattice_list" in doc:
            try:
                doc["lattice_list"] = [(int(m), int(n)) for m, n in doc["lattice_list"]]
            except (TypeError, ValueError):
                raise ConfigError("lattice_list", "expected a list of [M, N] pairs") from None
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    def to_dict(self) -> dict:
        out = asdict(self)
        out["lattice_list"] = [list(p) for p in self.lattice_list]
        return out

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError("experiment", f"must be one of {', '.join(EXPERIMENTS)}")
        for name in ("node_count", "trials", "mu"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 1:
                raise ConfigError(name, "must be a positive integer")
        if not isinstance(self.seed, int) or not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        bad = [s for s in self.strategies if s not in STRATEGIES]
        if bad or not self.strategies:
            raise ConfigError("strategies", f"must be a nonempty subset of {', '.join(STRATEGIES)}")
        if self.experiment in ("static-eval", "resilience", "optimize"):
            if not self.lattice_list:
                raise ConfigError("lattice_list", "must not be empty")
            for m, n in self.lattice_list:
                if m < 1 or n < 1:
                    raise ConfigError("lattice_list", f"{m}x{n} has a non-positive dimension")
                if m * n < self.node_count:
                    raise ConfigError(
                        "lattice_list", f"{m}x{n} has fewer vertices than node_count={self.node_count}"
                    )
                # resilience runs accept near-balanced classes (size differs by at most one)
                needs_even = self.experiment == "optimize" or (
                    self.experiment == "static-eval" and "optimized" in self.strategies
                )
                if needs_even and (m * n) % self.node_count:
                    raise ConfigError(
                        "lattice_list",
                        f"{m}x{n} is not divisible by node_count={self.node_count} (optimized strategy)",
                    )
        if self.experiment == "resilience":
            if self.failures_max is None:
                raise ConfigError("failures_max", "required for resilience")
            if not 0 <= self.failures_max < self.node_count:
                raise ConfigError("failures_max", "must lie in 0..node_count-1")
        if self.experiment == "memory-compare":
            if not self.node_sweep or min(self.node_sweep) < 2:
                raise ConfigError("node_sweep", "node counts must be at least 2")
            if not self.occupancies or min(self.occupancies) < 1:
                raise ConfigError("occupancies", "occupancies must be positive")
        if self.experiment == "graphstate-verify" and not 1 <= self.max_qubits <= MAX_QUBITS:
            raise ConfigError("max_qubits", f"must lie in 1..{MAX_QUBITS}")


@dataclass
class ResultTable:
    experiment: str
    columns: list
    rows: list
    summary_columns: list
    summary: list

    def to_csv(self, which: str = "rows", drop: tuple = ()) -> str:
        cols = self.columns if which == "rows" else self.summary_columns
        data = self.rows if which == "rows" else self.summary
        cols = [c for c in cols if c not in drop]
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in data:
            writer.writerow([_fmt(row.get(c)) for c in cols])
        return buf.getvalue()


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(round(v, 12))
    return str(v)


def _row(**kw) -> dict:
    out = {c: None for c in COLUMNS}
    out.update(kw)
    return out


def _allocate(g: LabeledGraph, strategy: str, c_count: int, seed: int,
              params: SAParams, allow_uneven: bool) -> Coloring:
    if strategy == "clustered":
        return allocate_clustered(g, c_count)
    if strategy == "random":
        return allocate_random(g, c_count, seed)
    return anneal_coloring(g, c_count, seed, params, allow_uneven).coloring


def derive_seed(seed: int, stream: int) -> int:
    """Independent 63-bit seed for a secondary random stream of one trial."""
    return int(np.random.SeedSequence([seed, stream]).generate_state(1, np.uint64)[0] >> 1)


# trial workers (module level so they pickle into worker processes)

def _static_trial(task) -> list:
    cfg, m, n, strategy, seed = task
    start = time.perf_counter()
    g = LabeledGraph.grid(m, n)
    col = _allocate(g, strategy, cfg.node_count, seed, cfg.sa_params, False)
    t = build_lattice(m, n, cfg.mu, cfg.decorated, col)
    return [_row(
        experiment=cfg.experiment, nodes=cfg.node_count, M=m, N=n, strategy=strategy, seed=seed,
        failures=-1, objective=minmax_objective(t), kappa=kappa_bar(t), excluded=t.empty_node_count(),
        qubits_total=memory_report(t).total, wall_time=time.perf_counter() - start,
        _topology=t.to_dict() if cfg.experiment == "optimize" else None,
    )]


def _resilience_trial(task) -> list:
    cfg, m, n, strategy, seed = task
    start = time.perf_counter()
    g = LabeledGraph.grid(m, n)
    col = _allocate(g, strategy, cfg.node_count, seed, cfg.sa_params, True)
    t = build_lattice(m, n, cfg.mu, cfg.decorated, col)
    trace = run_failure_sequence(t, cfg.failures_max, derive_seed(seed, 1), cfg.reheal)
    elapsed = time.perf_counter() - start
    rows = []
    for step in trace.steps:
        rows.append(_row(
            experiment=cfg.experiment, nodes=cfg.node_count, M=m, N=n, strategy=strategy,
            seed=seed, failures=step.failures, kappa=step.kappa_hat, d=step.d_hat,
            excluded=step.excluded_components, qubits_total=step.surviving_graph.live_count
            * cfg.mu * (3 if cfg.decorated else 1),
            wall_time=elapsed,
        ))
    return rows


def _lattice_shape(vertices: int) -> tuple[int, int]:
    m = int(math.isqrt(vertices))
    while vertices % m:
        m -= 1
    return m, vertices // m


def _memory_trial(task) -> list:
    cfg, c_count, k, seed = task
    start = time.perf_counter()
    if k == 0:
        t = all_to_all_topology(c_count)
        return [_row(
            experiment=cfg.experiment, nodes=c_count, strategy="all-to-all", seed=seed, failures=-1,
            objective=minmax_objective(t), kappa=kappa_bar(t), excluded=0,
            qubits_total=all_to_all_memory(c_count).total, wall_time=time.perf_counter() - start,
        )]
    # one and two vertices per node form a snake, more form the squarest lattice
    m, n = (1, k * c_count) if k <= 2 else _lattice_shape(k * c_count)
    g = LabeledGraph.grid(m, n)
    col = anneal_coloring(g, c_count, seed, cfg.sa_params).coloring
    t = build_lattice(m, n, cfg.mu, True, col)
    return [_row(
        experiment=cfg.experiment, nodes=c_count, M=m, N=n, strategy="optimized", seed=seed,
        failures=-1, objective=minmax_objective(t), kappa=kappa_bar(t), excluded=t.empty_node_count(),
        qubits_total=memory_report(t).total, wall_time=time.perf_counter() - start,
    )]


def random_graph(n: int, seed: int, p: float = 0.5) -> LabeledGraph:
    rng = np.random.default_rng(seed)
    g = LabeledGraph(n)
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                g.add_edge(u, v)
    return g


def _verify_trial(task) -> list:
    cfg, seed, rule = task
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, cfg.max_qubits + 1))
    g = random_graph(n, derive_seed(seed, 1))
    state = GraphState(g)
    edges = ";".join(f"{u}-{v}" for u, v in g.edges())
    rows = []
    for a in range(n):
        for basis in ("X", "Y", "Z"):
            start = time.perf_counter()
            out = rule(state, a, basis)
            ok = statevector_oracle_check(state, a, basis, out.special_neighbor, out.result_graph)
            rows.append({
                "experiment": cfg.experiment, "qubits": n, "seed": seed, "qubit": a, "basis": basis,
                "b0": out.special_neighbor, "passed": ok, "edges": edges,
                "wall_time": time.perf_counter() - start,
            })
    return rows


def _run_tasks(fn: Callable, tasks: list, workers: Optional[int]) -> list:
    workers = workers or os.cpu_count() or 1
    if workers <= 1 or len(tasks) <= 1:
        results = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [row for chunk in results for row in chunk]


def summarize(rows: list) -> tuple[list, list]:
    """Per-cell count, mean and sample standard deviation of every metric."""
    groups: dict = {}
    for row in rows:
        groups.setdefault(tuple(row[k] for k in GROUP_KEYS), []).append(row)
    columns = list(GROUP_KEYS) + ["trials"]
    for metric in SUMMARY_METRICS:
        columns += [f"{metric}_mean", f"{metric}_std"]
    out = []
    for key, members in groups.items():
        rec = dict(zip(GROUP_KEYS, key))
        rec["trials"] = len(members)
        for metric in SUMMARY_METRICS:
            vals = [r[metric] for r in members if r[metric] is not None]
            if not vals:
                rec[f"{metric}_mean"] = rec[f"{metric}_std"] = None
                continue
            rec[f"{metric}_mean"] = float(np.mean(vals))
            rec[f"{metric}_std"] = float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0
        out.append(rec)
    return columns, out


def _table(cfg, rows) -> ResultTable:
    if cfg.experiment != "optimize":
        for r in rows:
            r.pop("_topology", None)
    sc, summary = summarize(rows)
    return ResultTable(cfg.experiment, list(COLUMNS), rows, sc, summary)


def _grid_tasks(cfg) -> list:
    return [
        (cfg, m, n, strategy, cfg.seed + i)
        for (m, n) in cfg.lattice_list
        for strategy in cfg.strategies
        for i in range(cfg.trials)
    ]


def run_static_eval(cfg: ExperimentConfig, workers: Optional[int] = None) -> ResultTable:
    if cfg.experiment != "static-eval":
        raise ConfigError("experiment", "expected static-eval")
    cfg.validate()
    return _table(cfg, _run_tasks(_static_trial, _grid_tasks(cfg), workers))


def run_optimize(cfg: ExperimentConfig, workers: Optional[int] = None) -> ResultTable:
    if cfg.experiment != "optimize":
        raise ConfigError("experiment", "expected optimize")
    cfg.validate()
    tasks = [(cfg, m, n, "optimized", cfg.seed + i) for (m, n) in cfg.lattice_list for i in range(cfg.trials)]
    return _table(cfg, _run_tasks(_static_trial, tasks, workers))


def run_resilience(cfg: ExperimentConfig, workers: Optional[int] = None) -> ResultTable:
    if cfg.experiment != "resilience":
        raise ConfigError("experiment", "expected resilience")
    cfg.validate()
    return _table(cfg, _run_tasks(_resilience_trial, _grid_tasks(cfg), workers))


def run_memory_compare(cfg: ExperimentConfig, workers: Optional[int] = None) -> ResultTable:
    if cfg.experiment != "memory-compare":
        raise ConfigError("experiment", "expected memory-compare")
    cfg.validate()
    tasks = []
    for c_count in cfg.node_sweep:
        tasks.append((cfg, c_count, 0, cfg.seed))
        for k in cfg.occupancies:
            tasks.extend((cfg, c_count, k, cfg.seed + i) for i in range(cfg.trials))
    return _table(cfg, _run_tasks(_memory_trial, tasks, workers))


def run_graphstate_verify(
    cfg: ExperimentConfig, workers: Optional[int] = None, rule: Callable = measure_pauli
) -> ResultTable:
    """Check the measurement rewrite ``rule`` against the statevector oracle.

    ``rule`` defaults to :func:`measure_pauli`; tests substitute a broken rule
    to make sure failures surface with their (graph, qubit, basis).
    """
    if cfg.experiment != "graphstate-verify":
        raise ConfigError("experiment", "expected graphstate-verify")
    cfg.validate()
    tasks = [(cfg, cfg.seed + i, rule) for i in range(cfg.trials)]
    # a substituted rule may be a local closure, so keep it in-process
    rows = _run_tasks(_verify_trial, tasks, workers if rule is measure_pauli else 1)
    summary = []
    for basis in ("X", "Y", "Z", "all"):
        sel = [r for r in rows if basis == "all" or r["basis"] == basis]
        passed = sum(r["passed"] for r in sel)
        summary.append({"basis": basis, "checks": len(sel), "passed": passed, "failed": len(sel) - passed})
    return ResultTable(cfg.experiment, list(VERIFY_COLUMNS), rows,
                       ["basis", "checks", "passed", "failed"], summary)


RUNNERS = {
    "static-eval": run_static_eval,
    "memory-compare": run_memory_compare,
    "resilience": run_resilience,
    "optimize": run_optimize,
    "graphstate-verify": run_graphstate_verify,
}


def run_experiment(cfg: ExperimentConfig, workers: Optional[int] = None) -> ResultTable:
    return RUNNERS[cfg.experiment](cfg, workers)


def write_outputs(table: ResultTable, cfg: ExperimentConfig, out: str) -> dict:
    """Write ``out`` (raw rows), ``<out>.summary.csv`` and ``<out>.meta.json``."""
    base = out[:-4] if out.endswith(".csv") else out
    paths = {"rows": out, "summary": base + ".summary.csv", "meta": out + ".meta.json"}
    with open(paths["rows"], "w", encoding="utf-8", newline="") as fh:
        fh.write(table.to_csv("rows"))
    with open(paths["summary"], "w", encoding="utf-8", newline="") as fh:
        fh.write(table.to_csv("summary"))
    if table.experiment == "optimize":
        paths["topologies"] = base + ".topologies.jsonl"
        with open(paths["topologies"], "w", encoding="utf-8") as fh:
            for row in table.rows:
                doc = {"seed": row["seed"], "M": row["M"], "N": row["N"], "topology": row.get("_topology")}
                fh.write(json.dumps(doc) + "\n")
    meta = {
        "config": cfg.to_dict(),
        "version": __version__,
        "backend": BACKEND,
        "columns": table.columns,
        "summary_columns": table.summary_columns,
        "files": paths,
    }
    with open(paths["meta"], "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return paths
