"""Dense statevector oracle for checking graph-state rewrite rules.

Amplitudes of a graph state are ``(-1)^{#edges inside x} / 2^{n/2}`` over
bitstrings ``x``.  A rewrite is accepted when the post-measurement state and
the claimed graph state have equal Schmidt rank across every bipartition of
the surviving qubits.  Schmidt ranks are invariant under local unitaries, so
this checks the "equal up to local unitaries" claim without reconstructing
the correction operators.
"""
from __future__ import annotations

from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .errors import CapacityError, InvalidArgumentError
from .graph import LabeledGraph
from .graphstate import GraphState

MAX_QUBITS = 12

# +1 eigenvectors of the single-qubit Pauli operators
_EIGEN = {
    "X": np.array([1.0, 1.0]) / np.sqrt(2.0),
    "Y": np.array([1.0, 1.0j]) / np.sqrt(2.0),
    "Z": np.array([1.0, 0.0]),
}


class Statevector:
    """Pure state on labelled qubits; axis ``k`` of ``tensor`` is qubit ``labels[k]``."""

    def __init__(self, tensor: np.ndarray, labels: Sequence[int]):
        self.tensor = tensor
        self.labels = list(labels)

    @classmethod
    def from_graph(cls, g: LabeledGraph) -> "Statevector":
        qubits = g.live_vertices()
        n = len(qubits)
        if n > MAX_QUBITS:
            raise CapacityError(f"{n} qubits exceeds the oracle limit of {MAX_QUBITS}")
        index = {q: k for k, q in enumerate(qubits)}
        bits = (np.arange(2**n)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1
        parity = np.zeros(2**n, dtype=np.int64)
        for u, v in g.edges():
            parity += bits[:, index[u]] * bits[:, index[v]]
        amps = np.where(parity % 2 == 0, 1.0, -1.0).astype(complex) / np.sqrt(2.0**n)
        return cls(amps.reshape((2,) * n) if n else amps.reshape(()), qubits)

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def project(self, qubit: int, basis: str) -> "Statevector":
        """Project ``qubit`` onto the +1 eigenstate of ``basis``, renormalize and drop it."""
        if qubit not in self.labels:
            raise InvalidArgumentError(f"qubit {qubit} not present")
        axis = self.labels.index(qubit)
        out = np.tensordot(_EIGEN[basis].conj(), self.tensor, axes=([0], [axis]))
        norm = np.linalg.norm(out)
        if norm < 1e-12:
            raise InvalidArgumentError(f"outcome +1 of {basis} on {qubit} has zero probability")
        labels = self.labels[:axis] + self.labels[axis + 1 :]
        return Statevector(out / norm, labels)

    def schmidt_rank(self, part: Sequence[int], tol: float = 1e-9) -> int:
        """Schmidt rank across ``part`` versus the remaining qubits."""
        axes = [self.labels.index(q) for q in part]
        rest = [k for k in range(self.n_qubits) if k not in axes]
        if not axes or not rest:
            return 1
        mat = np.transpose(self.tensor, axes + rest).reshape(2 ** len(axes), 2 ** len(rest))
        sv = np.linalg.svd(mat, compute_uv=False)
        return int(np.sum(sv > tol * sv[0]))


def bipartitions(qubits: Sequence[int]):
    """Each unordered nontrivial bipartition once, as the side not holding ``qubits[0]``."""
    qubits = list(qubits)
    rest = qubits[1:]
    for k in range(1, len(qubits)):
        for side in combinations(rest, k):
            yield side


def rank_profile(sv: Statevector) -> dict[tuple[int, ...], int]:
    return {side: sv.schmidt_rank(side) for side in bipartitions(sorted(sv.labels))}


def statevector_oracle_check(
    before: GraphState,
    a: int,
    basis: str,
    b0: Optional[int],
    after: LabeledGraph,
) -> bool:
    """True when measuring ``a`` on ``|before>`` yields a state LU-equivalent to ``|after>``.

    ``b0`` only selects which labelled graph the rewrite produced and has no
    effect on the physical state; it is accepted for symmetry with
    ``measure_pauli`` and ignored here.
    """
    del b0
    g = before.graph
    if g.live_count > MAX_QUBITS:
        raise CapacityError(f"{g.live_count} qubits exceeds the oracle limit of {MAX_QUBITS}")
    measured = Statevector.from_graph(g).project(a, basis.upper())
    if sorted(after.live_vertices()) != sorted(measured.labels):
        return False
    claimed = Statevector.from_graph(after)
    return rank_profile(measured) == rank_profile(claimed)


def simulate_plan(g: LabeledGraph, plan) -> Statevector:
    """Apply a sequence of ``(qubit, basis, b0)`` measurements to the dense state."""
    sv = Statevector.from_graph(g)
    for qubit, basis, _ in plan:
        sv = sv.project(qubit, basis)
    return sv
