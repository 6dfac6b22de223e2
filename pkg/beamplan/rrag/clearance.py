from typing import Optional, Sequence, Tuple
import math

import numpy
from scipy.spatial import cKDTree

from .params import Point


class ClearanceField:
    """Clearance of a disc robot over an occupancy grid. Blocked cells
    (occupied, and unknown when planning on an estimate) and everything
    outside the grid count as obstacles. Distances are nearest-neighbour
    queries against a KD-tree of blocked cell centers, so they are exact at
    any continuous point, then inflated by half a cell diagonal and the
    robot radius.

    blocked (numpy.ndarray): Boolean grid indexed [row, column] = [y, x].
    resolution (float): Cell side in meters.
    robot_radius (float): Radius of the robot disc.
    origin (Point): World coordinates of the grid's lower-left corner.
    """

    def __init__(
        self,
        blocked: numpy.ndarray,
        resolution: float,
        robot_radius: float,
        origin: Point = (0.0, 0.0),
    ):
        self.blocked = numpy.asarray(blocked, dtype=bool)
        self.resolution = float(resolution)
        self.robot_radius = float(robot_radius)
        self.origin = (float(origin[0]), float(origin[1]))
        padded = numpy.pad(self.blocked, 1, constant_values=True)
        rows, cols = numpy.nonzero(padded)
        centers = numpy.stack(
            [
                self.origin[0] + (cols - 0.5) * self.resolution,
                self.origin[1] + (rows - 0.5) * self.resolution,
            ],
            axis=1,
        )
        self._tree = cKDTree(centers)
        # A cell reaches at most half its diagonal from its center.
        self._inflation = self.resolution * math.sqrt(0.5) + self.robot_radius

    @property
    def bounds(self) -> Tuple[Point, Point]:
        ny, nx = self.blocked.shape
        low = self.origin
        high = (self.origin[0] + nx * self.resolution, self.origin[1] + ny * self.resolution)
        return low, high

    def distance(self, points: Sequence[Point]) -> numpy.ndarray:
        """Distance from each point to the nearest blocked cell center."""
        points = numpy.asarray(points, dtype="float64").reshape(-1, 2)
        dist, _ = self._tree.query(points, k=1)
        return dist

    def clearance(self, points: Sequence[Point]) -> numpy.ndarray:
        """Signed clearance per point; positive means collision-free."""
        return self.distance(points) - self._inflation

    def is_free(self, point: Point) -> bool:
        return bool(self.clearance([point])[0] > 0.0)

    def segment_free(self, x1: Point, x2: Point, step: Optional[float] = None) -> bool:
        """Dense check of the straight segment at spacing `step`, half the
        grid resolution by default.
        """
        step = self.resolution / 2.0 if step is None else step
        length = math.hypot(x2[0] - x1[0], x2[1] - x1[1])
        n = max(int(math.ceil(length / step)), 1) + 1
        ts = numpy.linspace(0.0, 1.0, n)[:, None]
        points = (1.0 - ts) * numpy.asarray(x1) + ts * numpy.asarray(x2)
        return bool((self.clearance(points) > 0.0).all())

    def polyline_free(self, waypoints: Sequence[Point]) -> bool:
        return all(self.segment_free(a, b) for a, b in zip(waypoints[:-1], waypoints[1:]))


def collision_free_edge(
    x1: Point, x2: Point, clearance: ClearanceField, *, eta: float = 1.0, shortcut: bool = True
) -> bool:
    """Whether the straight motion from x1 to x2 is collision-free. The
    segment is accepted without interpolation when eta * |x1 - x2| is below
    the larger endpoint clearance; otherwise it is sampled densely.

    x1 (Point): Start position.
    x2 (Point): End position.
    clearance (ClearanceField): The clearance of the current map.
    eta (float): Ratio between workspace and configuration-space motion.
    shortcut (bool): Whether to try the clearance test first.
    RETURNS (bool): True if the motion is collision-free.
    """
    xi = clearance.clearance([x1, x2])
    if (xi <= 0.0).any():
        return False
    if shortcut and eta * math.hypot(x2[0] - x1[0], x2[1] - x1[1]) < xi.max():
        return True
    return clearance.segment_free(x1, x2)
