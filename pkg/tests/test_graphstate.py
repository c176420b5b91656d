import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import graph_state_vector, measure_dense, rank_signature
from qalloc import (
    CapacityError,
    GraphState,
    InvalidArgumentError,
    InvalidVertexError,
    LabeledGraph,
    connected_components,
    extract_bell_along_path,
    lattice_cluster,
    linear_cluster,
    local_complement,
    measure_pauli,
    statevector_oracle_check,
)
from qalloc.graphstate import extract_bell_plan
from qalloc.statevector import Statevector, simulate_plan
from strategies import graphs


def P3():
    return GraphState(LabeledGraph.path(3))


def dense_agrees(before: LabeledGraph, a, basis, after: LabeledGraph) -> bool:
    """Independent check: rank signature after a dense projection vs the claimed graph."""
    live = before.live_vertices()
    pos = {v: i for i, v in enumerate(live)}
    n = len(live)
    psi = graph_state_vector(n, [(pos[u], pos[v]) for u, v in before.edges()])
    psi = measure_dense(psi, n, pos[a], basis)
    rest = [v for v in live if v != a]
    if after.live_vertices() != rest:
        return False
    rpos = {v: i for i, v in enumerate(rest)}
    phi = graph_state_vector(n - 1, [(rpos[u], rpos[v]) for u, v in after.edges()])
    return rank_signature(psi, n - 1) == rank_signature(phi, n - 1)


class TestConstructors:
    def test_linear(self):
        assert linear_cluster(1).edges() == [] and linear_cluster(1).qubits == [0]
        assert linear_cluster(2).edges() == [(0, 1)]
        assert linear_cluster(4).edges() == [(0, 1), (1, 2), (2, 3)]
        with pytest.raises(InvalidArgumentError):
            linear_cluster(0)

    def test_lattice(self):
        assert lattice_cluster(1, 5) == linear_cluster(5)
        assert len(lattice_cluster(2, 2).edges()) == 4
        assert len(lattice_cluster(3, 3).edges()) == 12
        with pytest.raises(InvalidArgumentError):
            lattice_cluster(0, 3)


class TestLocalComplement:
    def test_star(self):
        star = GraphState(LabeledGraph(4, [(0, 1), (0, 2), (0, 3)]))
        out = local_complement(star, 0)
        assert out.edges() == [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        assert star.edges() == [(0, 1), (0, 2), (0, 3)]  # input untouched

    def test_isolated(self):
        s = GraphState(LabeledGraph(3, [(1, 2)]))
        assert local_complement(s, 0) == s

    def test_dead_qubit(self):
        g = LabeledGraph.path(3)
        g.delete_vertex(1)
        with pytest.raises(InvalidVertexError):
            local_complement(GraphState(g), 1)

    @given(graphs(min_n=1, max_n=8), st.data())
    def test_involution(self, g, data):
        a = data.draw(st.integers(0, g.vertex_count - 1))
        s = GraphState(g)
        once = local_complement(s, a)
        assert local_complement(once, a) == s
        assert once.qubits == s.qubits


class TestMeasurement:
    def test_z_middle(self):
        out = measure_pauli(P3(), 1, "Z")
        assert out.result_graph.live_vertices() == [0, 2]
        assert out.result_graph.edges() == []
        assert out.special_neighbor is None

    def test_y_middle(self):
        assert measure_pauli(P3(), 1, "Y").result_graph.edges() == [(0, 2)]

    def test_x_middle(self):
        out = measure_pauli(P3(), 1, "X", b0=0)
        assert out.result_graph.edges() == [(0, 2)]
        assert out.special_neighbor == 0 and out.basis == "X" and out.measured_qubit == 1

    def test_x_default_b0_is_smallest(self):
        g = LabeledGraph(4, [(3, 1), (3, 2)])
        assert measure_pauli(GraphState(g), 3, "X").special_neighbor == 1

    def test_bad_b0(self):
        with pytest.raises(InvalidArgumentError):
            measure_pauli(P3(), 0, "X", b0=2)

    def test_bad_basis(self):
        with pytest.raises(InvalidArgumentError):
            measure_pauli(P3(), 0, "W")

    @pytest.mark.parametrize("basis", "XYZ")
    def test_isolated_is_deleted(self, basis):
        out = measure_pauli(GraphState(LabeledGraph(1)), 0, basis)
        assert out.result_graph.live_vertices() == []
        assert statevector_oracle_check(GraphState(LabeledGraph(1)), 0, basis, None, out.result_graph)

    @given(graphs(min_n=1, max_n=7), st.data())
    def test_removes_exactly_one_qubit(self, g, data):
        a = data.draw(st.integers(0, g.vertex_count - 1))
        basis = data.draw(st.sampled_from("XYZ"))
        out = measure_pauli(GraphState(g), a, basis)
        assert out.result_graph.live_count == g.live_count - 1
        assert not out.result_graph.is_live(a)

    @given(graphs(min_n=1, max_n=8), st.data())
    def test_z_never_merges_components(self, g, data):
        a = data.draw(st.integers(0, g.vertex_count - 1))
        out = measure_pauli(GraphState(g), a, "Z").result_graph
        before = connected_components(g)
        for comp in connected_components(out):
            assert any(comp <= b for b in before)

    @given(graphs(min_n=1, max_n=7), st.data())
    def test_rules_pass_both_oracles(self, g, data):
        a = data.draw(st.integers(0, g.vertex_count - 1))
        basis = data.draw(st.sampled_from("XYZ"))
        nbrs = sorted(g.neighbors(a))
        b0 = data.draw(st.sampled_from(nbrs)) if basis == "X" and nbrs else None
        out = measure_pauli(GraphState(g), a, basis, b0)
        assert statevector_oracle_check(GraphState(g), a, basis, b0, out.result_graph)
        assert dense_agrees(g, a, basis, out.result_graph)


class TestOracle:
    def test_accepts_correct_claim(self):
        claim = LabeledGraph(3)
        claim.delete_vertex(1)
        assert statevector_oracle_check(P3(), 1, "Z", None, claim)

    def test_rejects_wrong_claim(self):
        claim = LabeledGraph(3, [(0, 2)])
        claim.delete_vertex(1)
        assert not statevector_oracle_check(P3(), 1, "Z", None, claim)

    def test_rejects_wrong_vertex_set(self):
        claim = LabeledGraph(3, [(0, 1)])
        claim.delete_vertex(2)
        assert not statevector_oracle_check(P3(), 1, "Z", None, claim)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            statevector_oracle_check(linear_cluster(13), 0, "Z", None, LabeledGraph(13))

    def test_rank_profile_matches_independent_simulation(self):
        rng = random.Random(3)
        for _ in range(20):
            n = rng.randint(2, 7)
            edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
            sv = Statevector.from_graph(LabeledGraph(n, edges))
            psi = graph_state_vector(n, edges)
            parts = [p for k in range(1, n // 2 + 1) for p in itertools.combinations(range(n), k)]
            assert [sv.schmidt_rank(list(p)) for p in parts] == rank_signature(psi, n)


class TestBellExtraction:
    @pytest.mark.parametrize("n", range(2, 9))
    def test_linear(self, n):
        out = extract_bell_along_path(linear_cluster(n), list(range(n)))
        assert out.edges() == [(0, n - 1)]
        assert out.qubits == [0, n - 1]

    def test_four_qubit_path(self):
        assert extract_bell_along_path(linear_cluster(4), [0, 1, 2, 3]).edges() == [(0, 3)]

    def test_single_edge_unchanged(self):
        s = linear_cluster(2)
        assert extract_bell_along_path(s, [0, 1]) == s

    def test_grid_middle_row(self):
        out = extract_bell_along_path(lattice_cluster(3, 3), [3, 4, 5])
        comps = connected_components(out.graph)
        assert frozenset({3, 5}) in comps
        assert out.graph.has_edge(3, 5)

    def test_plan_state_is_a_bell_pair(self):
        s = lattice_cluster(3, 3)
        plan = extract_bell_plan(s, [3, 4, 5])
        sv = simulate_plan(s.graph, plan)
        assert sv.schmidt_rank([3]) == 2

    def test_reversed_path(self):
        assert extract_bell_along_path(linear_cluster(5), [4, 3, 2, 1, 0]).edges() == [(0, 4)]

    def test_not_a_path(self):
        with pytest.raises(InvalidArgumentError):
            extract_bell_along_path(linear_cluster(4), [0, 2, 3])
        with pytest.raises(InvalidArgumentError):
            extract_bell_along_path(linear_cluster(4), [1])
