import numpy
import pytest

from beamplan.errors import StructuralError
from beamplan.rrag import AnnulusGraph, AnnulusParams, ClearanceField, add_cluster
from beamplan.rrag import advance_root, attach_root, expand, graph_update
from beamplan.rrag import insert_intermediate, remove_intermediate
from beamplan.util import make_rng


def free_field(size=10.0):
    n = int(round(size / 0.1))
    return ClearanceField(numpy.zeros((n, n), dtype=bool), 0.1, 0.2)


def blocked_between():
    blocked = numpy.zeros((100, 100), dtype=bool)
    blocked[:, 57] = True
    return ClearanceField(blocked, 0.1, 0.2)


@pytest.fixture
def pair():
    field = free_field()
    ag = AnnulusGraph(AnnulusParams(n_new=0))
    a = add_cluster(ag, (5.0, 5.0), field)
    b = add_cluster(ag, (6.5, 5.0), field)
    u, v = ag.clusters[a].members[0], ag.clusters[b].members[0]
    assert ag.graph.has_edge(u, v)
    return ag, field, u, v


def tree(method, n_new=60, seed=0):
    field = free_field(20.0)
    ag = AnnulusGraph(AnnulusParams(n_new=n_new), method=method)
    ag.add_root((10.0, 10.0), 0.0)
    expand(ag, field, make_rng(seed))
    return ag, field


def assert_tree(ag):
    active = list(ag.graph.vertices())
    assert ag.graph.n_edges == len(active) - 1
    for v in active:
        expected = [] if v == ag.root else [ag.parent[v]]
        assert ag.graph.predecessors(v) == expected
    total = {ag.root: 0.0}
    for v in active:
        chain = [v]
        while chain[-1] not in total:
            chain.append(ag.parent[chain[-1]])
        for child in reversed(chain[:-1]):
            total[child] = total[ag.parent[child]] + ag.graph.edge_cost(ag.parent[child], child)
        assert ag.cost_to_come[v] == pytest.approx(total[v])


def test_intermediate_splits_edge_cost(pair):
    ag, field, u, v = pair
    w = insert_intermediate(ag, (u, v), (5.75, 5.0), clearance=field)
    total = ag.graph.edge_cost(u, w) + ag.graph.edge_cost(w, v)
    assert total == pytest.approx(ag.graph.edge_cost(u, v))
    assert ag.graph.edge_cost(u, w) == pytest.approx(ag.graph.edge_cost(w, v))
    assert ag.headings[w] == pytest.approx(0.0)
    # One more edge back to the first cluster.
    assert len(ag.intermediates[w]) == 3


def test_intermediate_progress_overrides_geometry(pair):
    ag, field, u, v = pair
    w = insert_intermediate(ag, (u, v), (5.75, 5.0), progress=0.25)
    assert ag.graph.edge_cost(u, w) == pytest.approx(0.25 * ag.graph.edge_cost(u, v))
    assert ag.intermediates[w] == [(u, w), (w, v)]


def test_remove_intermediate_restores_edges(pair):
    ag, field, u, v = pair
    before = sorted(ag.graph.edges())
    w = insert_intermediate(ag, (u, v), (5.75, 5.0), clearance=field)
    remove_intermediate(ag, w)
    assert sorted(ag.graph.edges()) == before
    assert w not in ag.intermediates
    with pytest.raises(StructuralError):
        remove_intermediate(ag, w)


def test_intermediate_needs_an_existing_edge(pair):
    ag, field, u, v = pair
    with pytest.raises(StructuralError):
        insert_intermediate(ag, (v, u), (5.75, 5.0))


def test_intermediate_needs_rrag():
    ag, field = tree("rrat", n_new=5)
    child = ag.children(ag.root)[0]
    with pytest.raises(StructuralError):
        insert_intermediate(ag, (ag.root, child), ag.position(child))


def test_update_on_static_map_keeps_edges(pair):
    ag, field, u, v = pair
    before = sorted(ag.graph.edges())
    assert graph_update(ag, (5.0, 5.0), field, make_rng(0)) == 0
    assert sorted(ag.graph.edges()) == before


def test_update_removes_blocked_edges(pair):
    ag, field, u, v = pair
    n_edges = ag.graph.n_edges
    removed = graph_update(ag, (5.0, 5.0), blocked_between(), make_rng(0))
    assert removed == 2
    assert not ag.graph.has_edge(u, v)
    assert ag.graph.n_edges == n_edges - 2


def test_update_ignores_edges_out_of_reach(pair):
    ag, field, u, v = pair
    removed = graph_update(ag, (0.5, 0.5), blocked_between(), make_rng(0), l_edge=2.0)
    assert removed == 0
    assert ag.graph.has_edge(u, v)


def test_update_refreshes_gains_near_robot():
    field = free_field()
    ag = AnnulusGraph(AnnulusParams(n_new=0), gain_fn=lambda p, yaw: 1.0)
    a = add_cluster(ag, (2.0, 2.0), field)
    b = add_cluster(ag, (8.0, 8.0), field)
    ag.gain_fn = lambda p, yaw: 3.0
    graph_update(ag, (2.0, 2.0), field, make_rng(0), l_gain=1.0)
    assert all(ag.graph.gain(v) == 3.0 for v in ag.clusters[a].members)
    assert all(ag.graph.gain(v) == 1.0 for v in ag.clusters[b].members)


def test_rrat_advance_keeps_one_branch():
    ag, field = tree("rrat")
    old_root = ag.root
    child = ag.children(old_root)[0]
    keep = set(ag.subtree(child))
    advance_root(ag, child)
    assert set(ag.graph.vertices()) == keep
    assert not ag.graph.is_active(old_root)
    assert ag.root == child
    assert ag.cost_to_come[child] == 0.0
    assert_tree(ag)


def test_rrat_attach_root_mid_edge():
    ag, field = tree("rrat")
    root = ag.root
    child = ag.children(root)[0]
    cost = ag.graph.edge_cost(root, child)
    (x1, y1), (x2, y2) = ag.position(root), ag.position(child)
    mid = ((x1 + x2) / 2, (y1 + y2) / 2)
    keep = set(ag.subtree(child))
    r = attach_root(ag, mid, ag.headings[child], (root, child), 0.5)
    advance_root(ag, r)
    assert set(ag.graph.vertices()) == keep | {r}
    assert ag.graph.edge_cost(r, child) == pytest.approx(cost / 2)
    assert_tree(ag)


def test_rrat_star_advance_keeps_every_vertex():
    ag, field = tree("rrat_star")
    n_active = len(list(ag.graph.vertices()))
    child = ag.children(ag.root)[0]
    advance_root(ag, child, field)
    assert len(list(ag.graph.vertices())) == n_active
    assert ag.root == child
    assert_tree(ag)


def test_rrat_star_attach_root_mid_edge():
    ag, field = tree("rrat_star")
    n_active = len(list(ag.graph.vertices()))
    root = ag.root
    child = ag.children(root)[0]
    (x1, y1), (x2, y2) = ag.position(root), ag.position(child)
    position = (x1 + 0.4 * (x2 - x1), y1 + 0.4 * (y2 - y1))
    r = attach_root(ag, position, ag.headings[child], (root, child), 0.4)
    advance_root(ag, r, field)
    assert len(list(ag.graph.vertices())) == n_active + 1
    assert ag.graph.is_active(root)
    assert_tree(ag)


def test_tree_update_moves_root():
    ag, field = tree("rrat_star", n_new=30)
    child = ag.children(ag.root)[0]
    graph_update(ag, ag.position(child), field, make_rng(1), new_root=child)
    assert ag.root == child
    assert_tree(ag)
