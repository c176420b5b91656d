"""Qubit allocation over lattice-shaped entanglement topologies for quantum networks."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .allocation import (
    STRATEGIES,
    AllocationSpec,
    AnnealResult,
    SAParams,
    allocate,
    allocate_clustered,
    allocate_optimized,
    allocate_random,
    anneal_coloring,
)
from .errors import (
    CapacityError,
    ConfigError,
    DegenerateTopologyError,
    EmptyClassError,
    InvalidArgumentError,
    InvalidVertexError,
    QallocError,
)
from .failures import (
    ComponentMetrics,
    FailureTrace,
    StepRecord,
    component_metrics,
    d_hat,
    fail_node,
    kappa_hat,
    reheal,
    reheal_edges,
    run_failure_sequence,
)
from .graph import (
    LabeledGraph,
    bfs_distances,
    connected_components,
    diameter,
    max_vertex_disjoint_paths,
    set_disjoint_paths,
    shortest_path_distance,
)
from .graphstate import (
    GraphState,
    MeasurementOutcomeGraph,
    extract_bell_along_path,
    extract_bell_plan,
    lattice_cluster,
    linear_cluster,
    local_complement,
    measure_pauli,
)
from .statevector import Statevector, statevector_oracle_check
from .topology import (
    Coloring,
    EntanglementTopology,
    MemoryReport,
    WorstDistance,
    all_to_all_memory,
    all_to_all_topology,
    build_lattice,
    build_snake,
    build_topology,
    inter_node_distance,
    kappa_bar,
    kappa_inter_node,
    kappa_matrix,
    memory_report,
    minmax_objective,
    worst_distances,
    worst_inter_node_distance,
)
