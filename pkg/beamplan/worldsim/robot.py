from typing import List, Sequence
from dataclasses import dataclass, field
import math

from ..rrag import MotionModel, wrap_angle
from .world import Point, Pose


@dataclass
class Robot2D:
    """A disc robot that walks forward only: it turns in place to face the
    next waypoint, drives straight, and turns to the final heading.
    """

    pose: Pose
    radius: float = 0.3
    motion: MotionModel = field(default_factory=MotionModel)

    @property
    def position(self) -> Point:
        return self.pose[0], self.pose[1]

    @property
    def yaw(self) -> float:
        return self.pose[2]


def rotate_schedule(pose: Pose, target: float, motion: MotionModel) -> List[Pose]:
    x, y, yaw = pose
    delta = wrap_angle(target - yaw)
    n = motion.rotate_steps(delta)
    steps = [(x, y, wrap_angle(yaw + delta * k / n)) for k in range(1, n)]
    if n:
        steps.append((x, y, wrap_angle(target)))
    return steps


def edge_schedule(
    pose: Pose, waypoints: Sequence[Point], final_yaw: float, motion: MotionModel
) -> List[Pose]:
    """The pose after every control step of following `waypoints` from
    `pose` and turning to `final_yaw`. Each step rotates by at most
    omega_max * dt or moves at most v_max * dt, so the schedule has exactly
    as many steps as the time cost of the same motion.
    """
    steps: List[Pose] = []
    x, y, yaw = pose
    for (ax, ay), (bx, by) in zip(waypoints[:-1], waypoints[1:]):
        length = math.hypot(bx - ax, by - ay)
        if length <= 1e-12:
            continue
        direction = math.atan2(by - ay, bx - ax)
        turn = rotate_schedule((x, y, yaw), direction, motion)
        steps.extend(turn)
        if turn:
            yaw = turn[-1][2]
        n = motion.translate_steps(length)
        if n == 0:
            x, y = bx, by
            continue
        for k in range(1, n + 1):
            if k == n:
                steps.append((bx, by, yaw))
            else:
                steps.append((ax + (bx - ax) * k / n, ay + (by - ay) * k / n, yaw))
        x, y = bx, by
    steps.extend(rotate_schedule((x, y, yaw), final_yaw, motion))
    return steps
