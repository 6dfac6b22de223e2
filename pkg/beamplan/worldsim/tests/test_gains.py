import math

import numpy
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamplan.util import registry
from beamplan.worldsim import FrontierHistory, PointCollectionGain
from beamplan.worldsim import SensorModel2D, SurfaceFrontierGain, VolumetricGain, World2D
from beamplan.worldsim import classify_frontier, make_rooms_world, node_gain
from beamplan.worldsim import path_gain_points, points_of, sense


SENSOR = SensorModel2D()


def reveal_all(world):
    world.reveal(numpy.arange(world.truth.size))
    world.observe_points()


def open_world(points=()):
    return World2D(numpy.zeros((50, 50), dtype=bool), 0.1, points, (1.0, 1.0, 0.0))


def test_gain_functions_are_registered():
    assert isinstance(registry.gain_functions.get("point_collection")(), PointCollectionGain)
    volumetric = registry.gain_functions.get("volumetric")(fov_deg=60.0)
    assert isinstance(volumetric, VolumetricGain)
    assert volumetric.sensor.fov == pytest.approx(math.pi / 3)
    surface = registry.gain_functions.get("surface_frontier")()
    assert isinstance(surface, SurfaceFrontierGain)


def test_point_gain_within_collection_radius():
    world = open_world(points_of([(1.5, 1.05)], [10.0]))
    fn = PointCollectionGain(l_col=1.0)
    assert node_gain(world, (1.0, 1.05, 0.0), fn) == 0.0
    sense(world, (1.0, 1.05, 0.0), SENSOR)
    assert node_gain(world, (1.0, 1.05, 0.0), fn) == 10.0
    # Orientation does not matter.
    assert node_gain(world, (1.0, 1.05, 2.5), fn) == 10.0
    assert node_gain(world, (3.0, 1.05, 0.0), fn) == 0.0
    collected = numpy.asarray([True])
    assert node_gain(world, (1.0, 1.05, 0.0), fn, collected) == 0.0


def test_fully_known_world_has_no_view_gain():
    world = open_world()
    reveal_all(world)
    volumetric = VolumetricGain(SENSOR)
    surface = SurfaceFrontierGain(SENSOR)
    for x, y in [(1.0, 1.0), (2.5, 2.5), (4.0, 1.0)]:
        for yaw in numpy.linspace(-math.pi, math.pi, 8, endpoint=False):
            pose = (x, y, float(yaw))
            assert node_gain(world, pose, volumetric) == 0.0
            assert node_gain(world, pose, surface) == 0.0


def test_unknown_world_volumetric_gain_is_the_view():
    world = open_world()
    gain = node_gain(world, (2.5, 2.5, 0.0), VolumetricGain(SENSOR))
    assert gain > 0.0
    assert node_gain(world, (2.5, 2.5, 0.0), SurfaceFrontierGain(SENSOR)) == 0.0


def test_surface_frontier_at_the_end_of_a_known_wall():
    truth = numpy.zeros((50, 50), dtype=bool)
    truth[25, 10:31] = True
    world = World2D(truth, 0.1, (), (1.0, 1.0, 0.0))
    rows, cols = numpy.nonzero(numpy.ones_like(truth))
    known = cols <= 30
    world.reveal(rows[known] * 50 + cols[known])
    surface = SurfaceFrontierGain(SENSOR)
    assert node_gain(world, (3.15, 1.0, math.pi / 2), surface) > 0.0
    assert node_gain(world, (1.0, 1.0, math.pi), surface) == 0.0


def test_surface_gain_never_exceeds_volumetric_gain():
    world = make_rooms_world(n_points=5)(0)
    for yaw in numpy.linspace(0.0, 2 * math.pi, 8, endpoint=False):
        sense(world, (2.0, 2.0, float(yaw)), SENSOR)
    sense(world, (3.5, 3.0, 0.0), SENSOR)
    volumetric = VolumetricGain(SENSOR)
    surface = SurfaceFrontierGain(SENSOR)
    positive = 0
    for x in numpy.arange(0.5, 12.0, 1.0):
        for y in numpy.arange(0.5, 8.0, 1.0):
            for yaw in numpy.linspace(-math.pi, math.pi, 4, endpoint=False):
                pose = (float(x), float(y), float(yaw))
                s = node_gain(world, pose, surface)
                assert s <= node_gain(world, pose, volumetric)
                positive += s > 0
    assert positive > 0


def test_path_point_gain_counts_each_point_once():
    world = open_world(points_of([(2.0, 2.0), (4.0, 2.0)], [4.0, 6.0]))
    reveal_all(world)
    fn = PointCollectionGain(1.0)
    shared = [(2.5, 2.0), (2.0, 2.5)]
    assert path_gain_points(shared, world) == 4.0
    assert sum(node_gain(world, (x, y, 0.0), fn) for x, y in shared) == 8.0
    disjoint = [(2.0, 2.0), (4.0, 2.0)]
    assert path_gain_points(disjoint, world) == 10.0
    assert path_gain_points([], world) == 0.0
    assert path_gain_points(disjoint, world, collected=numpy.asarray([True, False])) == 6.0


@settings(max_examples=50, deadline=None)
@given(
    points=st.lists(
        st.tuples(st.floats(0.1, 4.9), st.floats(0.1, 4.9), st.floats(0.0, 10.0)),
        min_size=1,
        max_size=8,
    ),
    path=st.lists(st.tuples(st.floats(0.0, 5.0), st.floats(0.0, 5.0)), min_size=1, max_size=6),
)
def test_path_point_gain_is_at_most_additive(points, path):
    world = open_world(points_of([(x, y) for x, y, _ in points], [g for _, _, g in points]))
    reveal_all(world)
    fn = PointCollectionGain(1.0)
    union = path_gain_points(path, world)
    additive = sum(node_gain(world, (x, y, 0.0), fn) for x, y in path)
    assert union <= additive + 1e-9
    assert union <= world.total_point_gain + 1e-9


def test_unknown_view_is_a_frontier():
    world = open_world()
    history = FrontierHistory()
    assert classify_frontier(world, (2.5, 2.5, 0.0), history, 0, SENSOR)
    reveal_all(world)
    assert not classify_frontier(world, (2.5, 2.5, 0.0), history, 0, SENSOR)


def test_frontier_needs_most_of_the_best_view():
    truth = numpy.zeros((50, 50), dtype=bool)
    truth[:, 27] = True
    world = World2D(truth, 0.1, (), (1.0, 1.0, 0.0))
    history = FrontierHistory()
    pose = (2.5, 2.5, 0.0)
    assert classify_frontier(world, pose, history, 7, SENSOR)
    best = history.max_visible[7]
    # Knowing the wall shrinks the view below 0.6 of the best.
    world.reveal(numpy.flatnonzero(truth.reshape(-1)))
    assert not classify_frontier(world, pose, history, 7, SENSOR)
    assert history.max_visible[7] == best


def test_frontier_history_keeps_the_maximum():
    history = FrontierHistory()
    assert history.update("a", 10) == 10
    assert history.update("a", 4) == 10
    assert history.update("b", 4) == 4
