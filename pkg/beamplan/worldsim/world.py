from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple
from dataclasses import dataclass
from enum import IntEnum

import numpy
from scipy import ndimage

from ..errors import Errors, DomainError
from ..rrag import ClearanceField


Point = Tuple[float, float]
Pose = Tuple[float, float, float]
Bounds = Tuple[Point, Point]


class CellState(IntEnum):
    UNKNOWN = -1
    FREE = 0
    OCCUPIED = 1


# Grey levels of the map_server convention.
PGM_VALUES = {CellState.UNKNOWN: 205, CellState.FREE: 254, CellState.OCCUPIED: 0}


@dataclass(frozen=True)
class CollectPoint:
    position: Point
    gain: float


class World2D:
    """A hidden ground-truth occupancy grid, the robot's estimate of it and
    the collectible points. Grids are indexed [row, column] = [y, x] with
    row 0 at the world's lower edge.

    truth (numpy.ndarray): Boolean grid, True where occupied.
    resolution (float): Cell side in meters.
    points (Iterable[CollectPoint]): Collectible points in free cells.
    start (Pose): The robot's start pose.
    origin (Point): World coordinates of the grid's lower-left corner.
    """

    def __init__(
        self,
        truth: numpy.ndarray,
        resolution: float = 0.1,
        points: Iterable[CollectPoint] = (),
        start: Pose = (0.0, 0.0, 0.0),
        origin: Point = (0.0, 0.0),
    ):
        self.truth = numpy.asarray(truth, dtype=bool)
        self.resolution = float(resolution)
        self.origin = (float(origin[0]), float(origin[1]))
        self.start = (float(start[0]), float(start[1]), float(start[2]))
        self.points = list(points)
        self.point_xy = numpy.asarray([p.position for p in self.points], dtype="float64")
        self.point_xy = self.point_xy.reshape(-1, 2)
        self.point_gain = numpy.asarray([p.gain for p in self.points], dtype="float64")
        if not self.in_bounds(self.start[:2]):
            raise DomainError(Errors.E071.format(x=self.start[0], y=self.start[1]))
        rows, cols, inside = self.cells_of(self.point_xy)
        if not inside.all() or self.truth[rows[inside], cols[inside]].any():
            raise DomainError(Errors.E075.format(problem="a point lies outside the free space"))
        if ((self.point_gain < 0.0) | (self.point_gain > 10.0)).any():
            raise DomainError(Errors.E075.format(problem="point gains must lie in [0, 10]"))
        self._point_flat = rows * self.shape[1] + cols
        self.estimate = numpy.full(self.truth.shape, CellState.UNKNOWN, dtype="int8")
        self.observed = numpy.zeros(len(self.points), dtype=bool)
        self.collected = numpy.zeros(len(self.points), dtype=bool)
        self.version = 0
        self.fov_cache: Dict[Any, Any] = {}
        self._adjacency: Optional[numpy.ndarray] = None
        self._truth_field: Dict[float, ClearanceField] = {}

    def __repr__(self) -> str:
        return (
            f"World2D(shape={self.shape}, resolution={self.resolution}, "
            f"n_points={len(self.points)})"
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.truth.shape

    @property
    def bounds(self) -> Bounds:
        ny, nx = self.shape
        low = self.origin
        high = (self.origin[0] + nx * self.resolution, self.origin[1] + ny * self.resolution)
        return low, high

    def in_bounds(self, point: Point) -> bool:
        (x0, y0), (x1, y1) = self.bounds
        return x0 <= point[0] < x1 and y0 <= point[1] < y1

    def cells_of(
        self, points: Sequence[Point]
    ) -> Tuple[numpy.ndarray, numpy.ndarray, numpy.ndarray]:
        """Row and column of the cell holding each point, and whether the
        point lies on the grid. Off-grid indices are clipped.
        """
        points = numpy.asarray(points, dtype="float64").reshape(-1, 2)
        cols = numpy.floor((points[:, 0] - self.origin[0]) / self.resolution).astype("int64")
        rows = numpy.floor((points[:, 1] - self.origin[1]) / self.resolution).astype("int64")
        ny, nx = self.shape
        inside = (rows >= 0) & (rows < ny) & (cols >= 0) & (cols < nx)
        return numpy.clip(rows, 0, ny - 1), numpy.clip(cols, 0, nx - 1), inside

    # Estimate

    @property
    def n_unknown(self) -> int:
        return int((self.estimate == CellState.UNKNOWN).sum())

    @property
    def n_occupied_known(self) -> int:
        return int((self.estimate == CellState.OCCUPIED).sum())

    def reveal(self, flat_cells: numpy.ndarray) -> Tuple[int, int]:
        """Copy the ground truth of the given cells into the estimate.

        RETURNS (Tuple[int, int]): Newly known cells, and how many of them
            are occupied.
        """
        flat_cells = numpy.asarray(flat_cells, dtype="int64")
        estimate = self.estimate.reshape(-1)
        new = flat_cells[estimate[flat_cells] == CellState.UNKNOWN]
        if new.size == 0:
            return 0, 0
        occupied = self.truth.reshape(-1)[new]
        estimate[new] = numpy.where(occupied, CellState.OCCUPIED, CellState.FREE)
        self._changed()
        return int(new.size), int(occupied.sum())

    def observe_points(self) -> numpy.ndarray:
        """Mark the points lying in known-free cells as observed.

        RETURNS (numpy.ndarray): Indices of the newly observed points.
        """
        free = self.estimate.reshape(-1)[self._point_flat] == CellState.FREE
        new = numpy.flatnonzero(free & ~self.observed)
        self.observed[new] = True
        return new

    def collect_near(self, position: Point, l_col: float) -> float:
        """Collect every observed, uncollected point within l_col.

        RETURNS (float): The gain collected.
        """
        if not len(self.points):
            return 0.0
        dist = numpy.hypot(*(self.point_xy - numpy.asarray(position[:2])).T)
        take = (dist <= l_col) & self.observed & ~self.collected
        self.collected[take] = True
        if take.any():
            self._changed()
        return float(self.point_gain[take].sum())

    @property
    def total_point_gain(self) -> float:
        return float(self.point_gain.sum())

    @property
    def collected_gain(self) -> float:
        return float(self.point_gain[self.collected].sum())

    def occupied_adjacency(self) -> numpy.ndarray:
        """Cells 8-adjacent to a known occupied cell."""
        if self._adjacency is None:
            occupied = self.estimate == CellState.OCCUPIED
            self._adjacency = ndimage.binary_dilation(
                occupied, structure=numpy.ones((3, 3), dtype=bool)
            ) & ~occupied
        return self._adjacency

    def _changed(self) -> None:
        self.version += 1
        self.fov_cache.clear()
        self._adjacency = None

    # Planning and collision checking

    def planning_clearance(self, robot_radius: float) -> ClearanceField:
        """Clearance over the estimate, with everything not known to be free
        counted as an obstacle.
        """
        return ClearanceField(
            self.estimate != CellState.FREE, self.resolution, robot_radius, self.origin
        )

    def truth_clearance(self, robot_radius: float) -> ClearanceField:
        if robot_radius not in self._truth_field:
            self._truth_field[robot_radius] = ClearanceField(
                self.truth, self.resolution, robot_radius, self.origin
            )
        return self._truth_field[robot_radius]

    def known_free_bounds(self, margin: float = 0.0) -> Optional[Bounds]:
        """Bounding box of the known free cells, grown by `margin` and
        clipped to the world.
        """
        rows, cols = numpy.nonzero(self.estimate == CellState.FREE)
        if rows.size == 0:
            return None
        (x0, y0), (x1, y1) = self.bounds
        res = self.resolution
        low = (
            max(self.origin[0] + cols.min() * res - margin, x0),
            max(self.origin[1] + rows.min() * res - margin, y0),
        )
        high = (
            min(self.origin[0] + (cols.max() + 1) * res + margin, x1),
            min(self.origin[1] + (rows.max() + 1) * res + margin, y1),
        )
        return low, high

    # Copies and serialization

    def fresh(self) -> "World2D":
        """The same world with nothing observed or collected."""
        return World2D(self.truth, self.resolution, self.points, self.start, self.origin)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "resolution": self.resolution,
            "origin": list(self.origin),
            "start": list(self.start),
            "truth": ["".join("#" if c else "." for c in row) for row in self.truth],
            "points": [
                {"x": p.position[0], "y": p.position[1], "gain": p.gain} for p in self.points
            ],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "World2D":
        rows = data["truth"]
        if not rows or len({len(row) for row in rows}) != 1:
            raise DomainError(Errors.E075.format(problem="truth rows must be non-empty and equal"))
        truth = numpy.asarray([[c == "#" for c in row] for row in rows], dtype=bool)
        points = [CollectPoint((p["x"], p["y"]), p["gain"]) for p in data.get("points", [])]
        return cls(
            truth,
            data.get("resolution", 0.1),
            points,
            tuple(data.get("start", (0.0, 0.0, 0.0))),
            tuple(data.get("origin", (0.0, 0.0))),
        )


def free_cells_with_clearance(
    truth: numpy.ndarray, resolution: float, clearance: float
) -> numpy.ndarray:
    """Row and column of the free cells at least `clearance` meters from
    any occupied cell or the grid border, as an (n, 2) array.
    """
    padded = numpy.pad(~truth, 1, constant_values=False)
    dist = ndimage.distance_transform_edt(padded)[1:-1, 1:-1] * resolution
    return numpy.argwhere(dist >= clearance)


def points_of(positions: Sequence[Point], gains: Sequence[float]) -> List[CollectPoint]:
    return [CollectPoint((float(x), float(y)), float(g)) for (x, y), g in zip(positions, gains)]
