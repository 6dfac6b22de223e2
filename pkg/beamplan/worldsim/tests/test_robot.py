import math

import pytest

from beamplan.rrag import MotionModel, wrap_angle
from beamplan.worldsim import Robot2D, edge_schedule, rotate_schedule


MOTION = MotionModel()


def test_straight_meter_takes_ten_steps():
    steps = edge_schedule((0.0, 0.0, 0.0), [(0.0, 0.0), (1.0, 0.0)], 0.0, MOTION)
    assert len(steps) == 10
    assert steps[-1] == (1.0, 0.0, 0.0)
    for (x1, y1, _), (x2, y2, _) in zip([(0.0, 0.0, 0.0)] + steps, steps):
        assert math.hypot(x2 - x1, y2 - y1) <= MOTION.v_max * MOTION.dt + 1e-12


def test_half_turn_takes_ten_steps():
    steps = rotate_schedule((1.0, 2.0, 0.0), math.pi, MOTION)
    assert len(steps) == 10
    assert all(s[:2] == (1.0, 2.0) for s in steps)
    yaws = [0.0] + [s[2] for s in steps]
    for a, b in zip(yaws, yaws[1:]):
        assert abs(wrap_angle(b - a)) <= MOTION.omega_max * MOTION.dt + 1e-12
    assert steps[-1][2] == pytest.approx(wrap_angle(math.pi))


def test_no_turn_no_steps():
    assert rotate_schedule((0.0, 0.0, 0.5), 0.5, MOTION) == []


def test_schedule_matches_the_time_cost():
    route = [(0.0, 0.0), (1.3, 0.4), (1.3, 2.0)]
    steps = edge_schedule((0.0, 0.0, 2.0), route, -1.0, MOTION)
    cost = MOTION.polyline_cost(route, 2.0, -1.0)
    assert len(steps) * MOTION.dt == pytest.approx(cost)
    assert steps[-1][:2] == (1.3, 2.0)
    assert steps[-1][2] == pytest.approx(-1.0)


def test_rotate_translate_rotate_order():
    steps = edge_schedule((0.0, 0.0, 0.0), [(0.0, 0.0), (0.0, 1.0)], math.pi, MOTION)
    # 5 steps to face +y, 10 forward, 5 to face -x.
    assert len(steps) == 20
    assert all(s[:2] == (0.0, 0.0) for s in steps[:5])
    assert steps[4][2] == pytest.approx(math.pi / 2)
    assert all(s[2] == steps[4][2] for s in steps[5:15])
    assert steps[14][:2] == (0.0, 1.0)


def test_robot_pose_accessors():
    robot = Robot2D((1.0, 2.0, 0.5))
    assert robot.position == (1.0, 2.0)
    assert robot.yaw == 0.5
    assert robot.radius == 0.3
