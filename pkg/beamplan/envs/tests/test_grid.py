import math

import numpy
import pytest

from beamplan.errors import DomainError
from beamplan.envs import GridGraphSpec, generate_grid
from beamplan.graph import graph_stats
from beamplan.util import registry


def test_small_extent_vertex_count():
    graph = generate_grid(GridGraphSpec(extent=25.0))
    assert graph.n_vertices == 676
    assert graph.position(0) == (0.0, 0.0)
    assert graph.position(675) == (25.0, 25.0)


def test_large_extent_vertex_count():
    spec = GridGraphSpec(extent=50.0, gain_mode="clustered")
    assert spec.radius == 5.0
    assert generate_grid(spec).n_vertices == 51 * 51


def test_edge_costs():
    graph = generate_grid(GridGraphSpec(extent=5.0))
    assert graph.edge_cost(0, 1) == 1.0
    assert graph.edge_cost(0, 6) == 1.0
    assert graph.edge_cost(0, 7) == math.sqrt(2)
    assert graph.edge_cost(7, 0) == math.sqrt(2)
    stats = graph_stats(graph)
    assert stats.max_out_degree == 8
    assert stats.n_components == 1
    # Interior vertices have 8 neighbours, edges 5, corners 3.
    assert stats.n_edges == 2 * (2 * 6 * 5 + 2 * 5 * 5)


def test_four_connectivity():
    graph = generate_grid(GridGraphSpec(extent=5.0, connectivity=4))
    assert not graph.has_edge(0, 7)
    assert graph_stats(graph).max_out_degree == 4


def test_scattered_gains_in_range():
    gains = generate_grid(GridGraphSpec(extent=25.0, seed=3)).gains
    assert gains.min() >= 0.0
    assert gains.max() <= 100.0
    assert (gains > 0).mean() > 0.95


def test_clustered_gains_vanish_outside_discs():
    spec = GridGraphSpec(extent=25.0, gain_mode="clustered", seed=5)
    graph = generate_grid(spec)
    gains = graph.gains
    nonzero = numpy.flatnonzero(gains > 0)
    assert 0 < nonzero.size < graph.n_vertices // 2
    # A disc of radius 2.5 fits in a 6 x 6 block of lattice points.
    assert nonzero.size <= 8 * 36


def test_same_seed_gives_identical_graphs():
    spec = GridGraphSpec(extent=25.0, gain_mode="clustered", seed=11)
    assert generate_grid(spec).to_json() == generate_grid(spec).to_json()
    other = GridGraphSpec(extent=25.0, gain_mode="clustered", seed=12)
    assert generate_grid(spec).to_json() != generate_grid(other).to_json()


@pytest.mark.parametrize(
    "kwargs",
    [
        {"extent": 0.0},
        {"cluster_count": 0},
        {"connectivity": 6},
        {"gain_mode": "ring"},
        {"gain_mode": "clustered", "extent": 4.0},
    ],
)
def test_invalid_spec(kwargs):
    with pytest.raises(DomainError, match=r"\[E050\]"):
        GridGraphSpec(**kwargs)


def test_registered_generator():
    make = registry.graph_generators.get("grid.v1")
    graph = make(extent=10.0, seed=1)
    assert graph.n_vertices == 121
    assert graph.to_json() == generate_grid(GridGraphSpec(extent=10.0, seed=1)).to_json()
