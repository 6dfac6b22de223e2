import numpy
import pytest

from beamplan.errors import DomainError
from beamplan.envs import GridGraphSpec, PerceptionState, generate_grid, reveal_radius


@pytest.fixture(scope="module")
def grid():
    return generate_grid(GridGraphSpec(extent=25.0, seed=0))


def test_zero_radius_reveals_only_current_vertex(grid):
    state = PerceptionState(grid, 0.0).observe(40)
    assert numpy.flatnonzero(state.discovered).tolist() == [40]
    assert state.discovered_graph().n_edges == 0
    assert state.frontier_vertices() == frozenset()


def test_full_radius_reveals_whole_graph(grid):
    state = PerceptionState(grid, reveal_radius(grid)).observe(0)
    assert state.discovered.all()
    assert state.discovered_graph().to_json() == grid.to_json()
    assert state.frontier_vertices() == frozenset()


def test_radius_five_disc_count(grid):
    center = 12 * 26 + 12
    state = PerceptionState(grid, 5.0).observe(center)
    assert state.n_discovered == 81
    corner = PerceptionState(grid, 5.0).observe(0)
    assert corner.n_discovered < 81


def test_discovered_graph_is_induced(grid):
    state = PerceptionState(grid, 3.0).observe(0)
    sub = state.discovered_graph()
    for u, v, cost in sub.edges():
        assert state.discovered[u] and state.discovered[v]
        assert grid.edge_cost(u, v) == cost
    for u, v, _ in grid.edges():
        if state.discovered[u] and state.discovered[v]:
            assert sub.has_edge(u, v)
    hidden = numpy.flatnonzero(~state.discovered)
    assert all(sub.gain(v) == 0.0 for v in hidden[:20])


def test_frontier_after_first_observation(grid):
    state = PerceptionState(grid, 5.0).observe(0)
    positions = grid.positions()
    dist = numpy.hypot(positions[:, 0], positions[:, 1])
    expected = numpy.flatnonzero((dist > 4.0) & (dist <= 5.0))
    assert state.frontier_vertices() == frozenset(expected.tolist())


def test_frontier_needs_an_edge_into_unknown_space():
    grid = generate_grid(GridGraphSpec(extent=25.0, seed=0, connectivity=4))
    state = PerceptionState(grid, 5.0).observe(0)
    # (3, 3) is far enough out, but its four neighbours are all in view.
    assert state.discovered[3 * 26 + 3]
    assert 3 * 26 + 3 not in state.frontier_vertices()
    assert 4 * 26 + 3 in state.frontier_vertices()
    positions = grid.positions()
    dist = numpy.hypot(positions[:, 0], positions[:, 1])
    for v in state.frontier_vertices():
        assert dist[v] > 4.0
        assert any(not state.discovered[w] for w, _ in grid.successors(v))


def test_frontier_empty_when_everything_is_close(grid):
    state = PerceptionState(grid, 5.0, frontier_fraction=1.0).observe(0)
    assert state.frontier_vertices() == frozenset()


def test_discovery_is_monotone(grid):
    rng = numpy.random.default_rng(4)
    state = PerceptionState(grid, 3.0)
    previous = state.discovered.copy()
    previous_edges = set()
    for v in rng.integers(0, grid.n_vertices, size=15):
        state.observe(int(v))
        assert (state.discovered >= previous).all()
        edges = {(u, w) for u, w, _ in state.discovered_graph().edges()}
        assert previous_edges <= edges
        previous, previous_edges = state.discovered.copy(), edges


def test_invalid_parameters(grid):
    with pytest.raises(DomainError, match=r"\[E051\]"):
        PerceptionState(grid, -1.0)
    with pytest.raises(DomainError, match=r"\[E052\]"):
        PerceptionState(grid, 1.0, frontier_fraction=1.5)
