from typing import Tuple
from dataclasses import dataclass
import math

import numpy

from .world import CellState, Pose, World2D


@dataclass(frozen=True)
class SensorModel2D:
    """Planar range sensor: `n_rays` rays spread evenly over the horizontal
    field of view, each truncated at `range` meters.
    """

    fov: float = math.pi / 2
    range: float = 3.0
    n_rays: int = 181

    def ray_angles(self, yaw: float) -> numpy.ndarray:
        return yaw + numpy.linspace(-self.fov / 2, self.fov / 2, self.n_rays)


@dataclass(frozen=True)
class SenseResult:
    n_new_cells: int
    n_new_occupied: int
    new_points: Tuple[int, ...]


def cast_rays(
    blocking: numpy.ndarray, world: World2D, pose: Pose, sensor: SensorModel2D
) -> numpy.ndarray:
    """Flat indices of the cells seen from `pose`. Each ray is sampled at
    half the grid resolution and stops at the first blocking cell, which is
    itself seen. Leaving the grid ends a ray.

    blocking (numpy.ndarray): Boolean grid of the cells that stop rays.
    world (World2D): Supplies the grid geometry.
    pose (Pose): Sensor pose (x, y, yaw).
    sensor (SensorModel2D): The sensor.
    RETURNS (numpy.ndarray): Sorted unique flat cell indices.
    """
    x, y, yaw = pose
    ts = numpy.arange(0.0, sensor.range + 1e-9, world.resolution / 2.0)
    angles = sensor.ray_angles(yaw)
    xs = x + numpy.cos(angles)[:, None] * ts[None, :]
    ys = y + numpy.sin(angles)[:, None] * ts[None, :]
    rows, cols, inside = world.cells_of(numpy.stack([xs.ravel(), ys.ravel()], axis=1))
    rows = rows.reshape(xs.shape)
    cols = cols.reshape(xs.shape)
    inside = inside.reshape(xs.shape)
    stops = ~inside | blocking[rows, cols]
    first = numpy.where(stops.any(axis=1), stops.argmax(axis=1), ts.size)
    seen = (numpy.arange(ts.size)[None, :] <= first[:, None]) & inside
    return numpy.unique(rows[seen] * world.shape[1] + cols[seen])


def sense(world: World2D, pose: Pose, sensor: SensorModel2D) -> SenseResult:
    """Ray-cast against the ground truth and copy what is seen into the
    estimate. Points in cells that become known free are observed.
    """
    cells = cast_rays(world.truth, world, pose, sensor)
    n_new, n_occupied = world.reveal(cells)
    new_points = world.observe_points()
    return SenseResult(n_new, n_occupied, tuple(int(i) for i in new_points))


def visible_cells(world: World2D, pose: Pose, sensor: SensorModel2D) -> numpy.ndarray:
    """Flat indices of the cells a sensor at `pose` would see in the current
    estimate, where only known obstacles block rays.
    """
    return cast_rays(world.estimate == CellState.OCCUPIED, world, pose, sensor)
