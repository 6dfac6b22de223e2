import math

import numpy
import pytest

from beamplan.errors import StructuralError
from beamplan.graph import PlanGraph, graph_stats
from beamplan.graph.random_graphs import random_symmetric_graph, symmetric_graph


@pytest.fixture
def triangle():
    return symmetric_graph(
        [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)],
        [1.0, 2.0, 3.0],
        [(0, 1, 1.0), (1, 2, math.sqrt(2)), (0, 2, 1.0)],
    )


def test_add_vertex_returns_dense_ids():
    graph = PlanGraph()
    assert graph.add_vertex((0, 0)) == 0
    assert graph.add_vertex((1, 0), 2.5, yaw=3) == 1
    assert graph.n_vertices == 2
    assert graph.yaw(1) == 3
    assert graph.gain(1) == 2.5


@pytest.mark.parametrize("cost", [0.0, -1.0, float("nan"), float("inf")])
def test_edge_cost_must_be_positive(cost):
    graph = PlanGraph()
    graph.add_vertex((0, 0))
    graph.add_vertex((1, 0))
    with pytest.raises(StructuralError, match=r"\[E002\]"):
        graph.add_edge(0, 1, cost)


def test_simple_graph_rules():
    graph = PlanGraph()
    graph.add_vertex((0, 0))
    graph.add_vertex((1, 0))
    with pytest.raises(StructuralError, match=r"\[E004\] Self-loop"):
        graph.add_edge(0, 0, 1.0)
    graph.add_edge(0, 1, 1.0)
    with pytest.raises(StructuralError, match=r"\[E005\] Duplicate"):
        graph.add_edge(0, 1, 2.0)
    with pytest.raises(StructuralError, match=r"\[E006\]"):
        graph.add_edge(0, 7, 1.0)


def test_negative_gain_rejected():
    graph = PlanGraph()
    with pytest.raises(StructuralError, match=r"\[E003\]"):
        graph.add_vertex((0, 0), -1.0)


def test_successors_sorted_by_target():
    graph = PlanGraph()
    for i in range(4):
        graph.add_vertex((i, 0))
    graph.add_edge(0, 3, 1.0)
    graph.add_edge(0, 1, 2.0)
    graph.add_edge(0, 2, 3.0)
    assert [v for v, _ in graph.successors(0)] == [1, 2, 3]
    arrays = graph.arrays()
    assert arrays.targets.tolist() == [1, 2, 3]
    assert arrays.costs.tolist() == [2.0, 3.0, 1.0]
    assert arrays.indptr.tolist() == [0, 3, 3, 3, 3]


def test_arrays_cache_invalidated_on_mutation(triangle):
    before = triangle.arrays()
    assert before.n_edges == 6
    triangle.remove_edge(0, 1)
    after = triangle.arrays()
    assert after.n_edges == 5
    assert not triangle.has_edge(0, 1)


def test_remove_vertex_keeps_ids(triangle):
    triangle.remove_vertex(1)
    assert triangle.n_vertices == 3
    assert not triangle.is_active(1)
    assert list(triangle.vertices()) == [0, 2]
    assert triangle.n_edges == 2
    assert triangle.predecessors(1) == []


def test_with_gains_shares_topology(triangle):
    derived = triangle.with_gains([0.0, 0.0, 5.0])
    assert derived.gains.tolist() == [0.0, 0.0, 5.0]
    assert triangle.gains.tolist() == [1.0, 2.0, 3.0]
    assert derived.arrays() is triangle.arrays()
    with pytest.raises(StructuralError, match=r"\[E010\]"):
        derived.add_edge(1, 0, 3.0)


def test_restrict_keeps_ids_and_induces_edges(triangle):
    sub = triangle.restrict([True, False, True])
    assert sub.n_vertices == 3
    assert not sub.is_active(1)
    assert sub.gain(1) == 0.0
    assert sorted((u, v) for u, v, _ in sub.edges()) == [(0, 2), (2, 0)]


def test_restrict_all_reproduces_graph():
    rng = numpy.random.default_rng(3)
    graph = random_symmetric_graph(rng, 9, 14)
    full = graph.restrict([True] * graph.n_vertices)
    assert full.to_dict() == graph.to_dict()


def test_json_round_trip_is_lossless():
    rng = numpy.random.default_rng(11)
    graph = random_symmetric_graph(rng, 12, 20, frontier_probability=0.3)
    text = graph.to_json()
    loaded = PlanGraph.from_json(text)
    assert loaded.to_json() == text
    for (u1, v1, c1), (u2, v2, c2) in zip(graph.edges(), loaded.edges()):
        assert (u1, v1) == (u2, v2)
        assert c1 == c2
    assert loaded.gains.tolist() == graph.gains.tolist()
    assert loaded.frontier_flags.tolist() == graph.frontier_flags.tolist()


def test_to_disk_from_disk(tmp_path, triangle):
    path = tmp_path / "graph.json"
    triangle.to_disk(path)
    assert PlanGraph.from_disk(path).to_dict() == triangle.to_dict()


def test_graph_stats(triangle):
    triangle.add_vertex((5.0, 5.0))
    stats = graph_stats(triangle)
    assert stats.n_vertices == 4
    assert stats.n_edges == 6
    assert stats.max_out_degree == 2
    assert stats.n_components == 2


def test_gain_groups_are_dense():
    graph = PlanGraph()
    for i in range(4):
        graph.add_vertex((0, 0))
    graph.set_gain_groups([7, 7, 3, 3])
    assert graph.group_ids().tolist() == [1, 1, 0, 0]
    with pytest.raises(StructuralError, match=r"\[E011\]"):
        graph.set_gain_groups([0, 1])
