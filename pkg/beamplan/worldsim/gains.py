from typing import Dict, Hashable, Optional, Sequence
from dataclasses import dataclass
import math

import numpy

from ..util import registry
from .sensor import SensorModel2D, visible_cells
from .world import CellState, Point, Pose, World2D


@dataclass(frozen=True)
class FovStats:
    """Cell counts over the unoccluded field of view of one pose."""

    n_visible: int
    n_unknown: int
    n_surface: int


def fov_stats(world: World2D, pose: Pose, sensor: SensorModel2D) -> FovStats:
    """Count the visible, unknown and surface-frontier cells seen from
    `pose`. Results are cached on the world until its estimate changes.
    """
    key = (sensor, pose)
    if key not in world.fov_cache:
        cells = visible_cells(world, pose, sensor)
        unknown = world.estimate.reshape(-1)[cells] == CellState.UNKNOWN
        surface = unknown & world.occupied_adjacency().reshape(-1)[cells]
        world.fov_cache[key] = FovStats(int(cells.size), int(unknown.sum()), int(surface.sum()))
    return world.fov_cache[key]


class PointCollectionGain:
    """Sum of the gains of observed, uncollected points within l_col of the
    position. Orientation-independent.
    """

    orientation_independent = True

    def __init__(self, l_col: float = 1.0):
        self.l_col = l_col

    def __call__(
        self, world: World2D, pose: Pose, collected: Optional[numpy.ndarray] = None
    ) -> float:
        if not len(world.points):
            return 0.0
        collected = world.collected if collected is None else collected
        dist = numpy.hypot(*(world.point_xy - numpy.asarray(pose[:2])).T)
        take = (dist <= self.l_col) & world.observed & ~collected
        return float(world.point_gain[take].sum())


class VolumetricGain:
    """Number of unknown cells in the unoccluded field of view."""

    orientation_independent = False

    def __init__(self, sensor: SensorModel2D):
        self.sensor = sensor

    def __call__(self, world: World2D, pose: Pose, collected=None) -> float:
        return float(fov_stats(world, pose, self.sensor).n_unknown)


class SurfaceFrontierGain(VolumetricGain):
    """Number of unknown cells in the unoccluded field of view that are
    8-adjacent to a known occupied cell.
    """

    def __call__(self, world: World2D, pose: Pose, collected=None) -> float:
        return float(fov_stats(world, pose, self.sensor).n_surface)


@registry.gain_functions("point_collection")
def make_point_collection_gain(l_col: float = 1.0) -> PointCollectionGain:
    return PointCollectionGain(l_col)


@registry.gain_functions("volumetric")
def make_volumetric_gain(
    fov_deg: float = 90.0, sensor_range: float = 3.0, n_rays: int = 181
) -> VolumetricGain:
    return VolumetricGain(SensorModel2D(math.radians(fov_deg), sensor_range, n_rays))


@registry.gain_functions("surface_frontier")
def make_surface_frontier_gain(
    fov_deg: float = 90.0, sensor_range: float = 3.0, n_rays: int = 181
) -> SurfaceFrontierGain:
    return SurfaceFrontierGain(SensorModel2D(math.radians(fov_deg), sensor_range, n_rays))


def node_gain(
    world: World2D, pose: Pose, fn, collected: Optional[numpy.ndarray] = None
) -> float:
    """Gain of a pose under a task gain function, never negative."""
    return max(float(fn(world, pose, collected)), 0.0)


def path_gain_points(
    positions: Sequence[Point],
    world: World2D,
    collected: Optional[numpy.ndarray] = None,
    l_col: float = 1.0,
) -> float:
    """Point gain of a path with each point counted once, however many
    path positions it is close to.
    """
    if not len(world.points) or not len(positions):
        return 0.0
    collected = world.collected if collected is None else collected
    positions = numpy.asarray(positions, dtype="float64").reshape(-1, 2)
    diff = world.point_xy[:, None, :] - positions[None, :, :]
    near = (numpy.hypot(diff[..., 0], diff[..., 1]) <= l_col).any(axis=1)
    take = near & world.observed & ~collected
    return float(world.point_gain[take].sum())


class FrontierHistory:
    """Largest visible-cell count seen so far per node."""

    def __init__(self):
        self.max_visible: Dict[Hashable, int] = {}

    def update(self, key: Hashable, n_visible: int) -> int:
        best = max(self.max_visible.get(key, 0), n_visible)
        self.max_visible[key] = best
        return best


def classify_frontier(
    world: World2D,
    pose: Pose,
    history: FrontierHistory,
    key: Hashable,
    sensor: SensorModel2D,
    *,
    min_unknown: float = 0.8,
    min_visible: float = 0.6,
) -> bool:
    """A node is a frontier when most of its field of view is unknown and
    it still sees a good share of what it could see at best.
    """
    stats = fov_stats(world, pose, sensor)
    best = history.update(key, stats.n_visible)
    if stats.n_visible == 0:
        return False
    return (
        stats.n_unknown / stats.n_visible >= min_unknown
        and stats.n_visible / best >= min_visible
    )
