import itertools
import math

import numpy
import pytest
from hypothesis import given, settings
from hypothesis.strategies import integers

from beamplan.errors import StructuralError
from beamplan.graph import Path, Preference, compare_preference, path_cost, path_gain
from beamplan.graph import reduce_to_trail
from beamplan.graph.random_graphs import line_graph, random_symmetric_graph
from beamplan.graph.random_graphs import random_walk, star_graph, symmetric_graph


def test_single_vertex_path():
    graph = line_graph([7.0, 1.0])
    path = Path.start_at(graph, 0)
    assert path_cost(path) == 0.0
    assert path.cost == 0.0
    assert path_gain(path) == 7.0
    assert path.ratio == math.inf


def test_cost_is_additive():
    graph = symmetric_graph(
        [(0, 0), (1, 0), (2, 0)], [0, 0, 0], [(0, 1, 1.5), (1, 2, 2.5)]
    )
    path = Path.from_vertices(graph, [0, 1, 2])
    assert path_cost(path) == 4.0
    assert path.cost == 4.0


def test_repeated_edges_count_twice_in_cost():
    graph = symmetric_graph([(0, 0), (1, 0)], [5.0, 3.0], [(0, 1, 3.0)])
    path = Path.from_vertices(graph, [0, 1, 0])
    assert path.cost == 6.0
    assert path.gain == 8.0


def test_extend_revisit_adds_no_gain():
    graph = symmetric_graph([(0, 0), (1, 0)], [5.0, 3.0], [(0, 1, 1.0)])
    path = Path.start_at(graph, 0) + (0, 1)
    again = path + (1, 0)
    assert again.gain == path.gain
    assert again.cost > path.cost
    assert again.traversed(0, 1) and again.traversed(1, 0)
    assert not path.traversed(1, 0)


def test_extend_mismatch():
    graph = line_graph([0.0, 1.0, 2.0])
    path = Path.start_at(graph, 0)
    with pytest.raises(StructuralError, match=r"\[E007\]"):
        path.extend((1, 2))
    with pytest.raises(StructuralError, match=r"\[E001\]"):
        path.extend((0, 2))
    with pytest.raises(StructuralError, match=r"\[E008\]"):
        Path.from_vertices(graph, [])


def _best_star_walk(graph, budget):
    best = Path.start_at(graph, 0)
    stack = [best]
    while stack:
        path = stack.pop()
        if path.gain > best.gain:
            best = path
        for v, cost in graph.successors(path.last):
            if path.cost + cost <= budget and not path.traversed(path.last, v):
                stack.append(path + (path.last, v))
    return best


def test_star_walk_collects_each_leaf_once():
    graph = star_graph(0.0, [10.0, 10.0, 10.0, 10.0])
    best = _best_star_walk(graph, 6.0)
    # Leaves are reached from the hub, so the walk re-enters vertex 0.
    assert best.vertices.count(0) >= 2
    distinct = set(best.vertices)
    assert best.gain == sum(graph.gain(v) for v in distinct)
    assert best.gain == 30.0


@pytest.mark.parametrize(
    "k1,k2,expected",
    [
        ((10.0, 5.0), (5.0, 5.0), Preference.FIRST),  # ratio 2 vs 1
        ((10.0, 5.0), (8.0, 4.0), Preference.FIRST),  # ratio tie, more gain
        ((8.0, 4.0), (10.0, 5.0), Preference.SECOND),
        ((8.0, 4.0), (8.0, 4.0), Preference.EQUIVALENT),
    ],
)
def test_compare_preference(k1, k2, expected):
    graph = line_graph([0.0, 0.0])

    def fake(gain, cost):
        return Path(graph, (0,), cost, gain, frozenset(), frozenset())

    assert compare_preference(fake(*k1), fake(*k2)) == expected


def test_compare_preference_lower_cost_breaks_tie():
    graph = line_graph([0.0, 0.0])
    # Zero gain on both: equal ratio and gain, lower cost preferred.
    p1 = Path(graph, (0,), 4.0, 0.0, frozenset(), frozenset())
    p2 = Path(graph, (0,), 5.0, 0.0, frozenset(), frozenset())
    assert compare_preference(p1, p2) == Preference.FIRST


def test_compare_preference_is_total_preorder():
    rng = numpy.random.default_rng(0)
    graph = random_symmetric_graph(rng, 8, 14, gain_range=(0.0, 3.0))
    paths = [
        Path.from_vertices(graph, random_walk(graph, rng, 0, int(rng.integers(0, 6))))
        for _ in range(60)
    ]
    order = {Preference.FIRST: 1, Preference.SECOND: -1, Preference.EQUIVALENT: 0}
    n_triples = 0
    for a, b, c in itertools.islice(itertools.permutations(paths, 3), 1000):
        ab = order[compare_preference(a, b)]
        assert ab == -order[compare_preference(b, a)]
        bc = order[compare_preference(b, c)]
        ac = order[compare_preference(a, c)]
        if ab >= 0 and bc >= 0:
            assert ac >= 0
        if ab > 0 and bc >= 0:
            assert ac > 0
        n_triples += 1
    assert n_triples == 1000


@settings(max_examples=50, deadline=None)
@given(seed=integers(0, 2**31 - 1), length=integers(0, 12))
def test_gain_has_set_semantics(seed, length):
    rng = numpy.random.default_rng(seed)
    graph = random_symmetric_graph(rng, 7, 10)
    walk = random_walk(graph, rng, 0, length)
    path = Path.from_vertices(graph, walk)
    assert path_gain(path) == pytest.approx(sum(graph.gain(v) for v in set(walk)))


@settings(max_examples=50, deadline=None)
@given(seed=integers(0, 2**31 - 1))
def test_incremental_equals_batch(seed):
    rng = numpy.random.default_rng(seed)
    graph = random_symmetric_graph(rng, 8, 12)
    walk = random_walk(graph, rng, 0, 20)
    path = Path.start_at(graph, walk[0])
    for u, v in zip(walk[:-1], walk[1:]):
        previous_cost = path.cost
        path = path.extend((u, v))
        assert path.cost > previous_cost
        assert path.cost == path_cost(path)
        assert path.gain == path_gain(path)
    assert path.traversed_edges == set(zip(walk[:-1], walk[1:]))


def test_gain_groups_count_once():
    graph = symmetric_graph([(0, 0), (0, 0), (1, 0)], [4.0, 4.0, 1.0], [(0, 1, 0.5), (1, 2, 1.0)])
    graph.set_gain_groups([0, 0, 1])
    path = Path.from_vertices(graph, [0, 1, 2])
    assert path.gain == 5.0
    assert path_gain(path) == 5.0


@settings(max_examples=50, deadline=None)
@given(seed=integers(0, 2**31 - 1))
def test_reduce_to_trail_keeps_vertex_set_and_end(seed):
    rng = numpy.random.default_rng(seed)
    graph = random_symmetric_graph(rng, 6, 7)
    walk = random_walk(graph, rng, 0, 25)
    trail = reduce_to_trail(graph, walk)
    reduced = Path.from_vertices(graph, trail)
    original = Path.from_vertices(graph, walk)
    assert reduced.is_trail()
    assert set(trail) == set(walk)
    assert trail[-1] == walk[-1]
    assert reduced.gain == pytest.approx(original.gain)
    assert reduced.cost <= original.cost + 1e-9
