import numpy
import pytest

from beamplan.rrag import ClearanceField, SpatialIndex, collision_free_edge
from beamplan.util import make_rng


def free_field(size=10.0, resolution=0.1, robot_radius=0.2):
    n = int(round(size / resolution))
    return ClearanceField(numpy.zeros((n, n), dtype=bool), resolution, robot_radius)


def wall_field():
    blocked = numpy.zeros((100, 100), dtype=bool)
    blocked[:, 50] = True
    return ClearanceField(blocked, 0.1, 0.2)


def test_bounds():
    field = free_field()
    assert field.bounds == ((0.0, 0.0), (10.0, 10.0))
    shifted = ClearanceField(numpy.zeros((20, 30), dtype=bool), 0.5, 0.2, origin=(-1.0, 2.0))
    assert shifted.bounds == ((-1.0, 2.0), (14.0, 12.0))


def test_border_counts_as_obstacle():
    field = free_field()
    assert not field.is_free((0.2, 5.0))
    assert field.is_free((0.5, 5.0))
    # Cell center; the nearest border cell center is straight across at x = 10.05.
    assert field.distance([(5.05, 5.05)])[0] == pytest.approx(5.0)
    assert field.clearance([(5.05, 5.05)])[0] == pytest.approx(5.0 - 0.1 * 0.5 ** 0.5 - 0.2)


def test_distance_is_exact_between_cell_centers():
    blocked = numpy.zeros((100, 100), dtype=bool)
    blocked[50, 50] = True
    field = ClearanceField(blocked, 0.1, 0.2)
    # The blocked cell's center is (5.05, 5.05).
    points = [(5.3, 5.2), (4.71, 5.05), (5.05, 6.33)]
    expected = [numpy.hypot(x - 5.05, y - 5.05) for x, y in points]
    assert field.distance(points) == pytest.approx(expected)


def test_wall_blocks_crossing():
    field = wall_field()
    assert not collision_free_edge((2.0, 5.0), (8.0, 5.0), field)
    assert not collision_free_edge((2.0, 5.0), (8.0, 5.0), field, shortcut=False)
    assert collision_free_edge((2.0, 2.0), (2.0, 8.0), field)
    assert not collision_free_edge((5.05, 1.0), (2.0, 2.0), field)


def test_shortcut_never_accepts_a_colliding_edge():
    rng = make_rng(7)
    blocked = rng.random((100, 100)) < 0.003
    field = ClearanceField(blocked, 0.1, 0.2)
    starts = rng.uniform(0.5, 9.5, size=(1000, 2))
    angles = rng.uniform(0.0, 2 * numpy.pi, size=1000)
    lengths = rng.uniform(0.0, 1.0, size=1000)
    ends = starts + lengths[:, None] * numpy.stack([numpy.cos(angles), numpy.sin(angles)], 1)
    accepted = 0
    for x1, x2 in zip(starts, ends):
        x1, x2 = tuple(x1), tuple(x2)
        if collision_free_edge(x1, x2, field):
            accepted += 1
            assert collision_free_edge(x1, x2, field, shortcut=False)
    assert accepted > 0


def test_polyline_free():
    field = wall_field()
    assert field.polyline_free([(1.0, 1.0), (3.0, 1.0), (3.0, 8.0)])
    assert not field.polyline_free([(1.0, 1.0), (3.0, 1.0), (7.0, 1.0)])


def test_index_empty():
    index = SpatialIndex()
    assert index.nearest((0.0, 0.0)) is None
    assert index.within((0.0, 0.0), 10.0) == []
    assert len(index) == 0


def test_index_ties_take_lowest_key():
    index = SpatialIndex()
    index.add((1.0, 0.0))
    index.add((-1.0, 0.0))
    assert index.nearest((0.0, 0.0)) == (1.0, 0)


def test_index_matches_brute_force():
    rng = make_rng(3)
    points = rng.uniform(0.0, 20.0, size=(300, 2))
    index = SpatialIndex(rebuild_every=16)
    for p in points:
        index.add(tuple(p))
    removed = set(range(0, 300, 7))
    for key in removed:
        index.remove(key)
    alive = numpy.asarray([k for k in range(300) if k not in removed])
    for query in rng.uniform(0.0, 20.0, size=(50, 2)):
        dist = numpy.hypot(*(points[alive] - query).T)
        dist_found, key = index.nearest(tuple(query))
        assert key == alive[numpy.argmin(dist)]
        assert dist_found == pytest.approx(dist.min())
        expected = sorted(alive[dist <= 3.0].tolist())
        assert index.within(tuple(query), 3.0) == expected
    assert len(index) == len(alive)
