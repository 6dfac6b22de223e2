from typing import Optional, Sequence, Tuple
from dataclasses import dataclass
from enum import Enum
import math
import warnings

import numpy

from ..errors import Errors, Warnings, DomainError


Point = Tuple[float, float]


class CostMetric(str, Enum):
    DISTANCE = "distance"
    TIME = "time"


@dataclass(frozen=True)
class AnnulusParams:
    """Parameters of the incremental annulus-graph builders.

    l_min (float): Minimum distance between node positions.
    l_max (float): Maximum straight-line length of an inter-cluster edge.
    n_sample (int): Draw attempts per new node.
    n_new (int): New-node attempts per expansion round.
    yaw_count (int): Number of discrete orientations K per position.
    fls_samples (int): Sample cap of the fallback local planner; 0 disables it.
    fls_time_budget (Optional[float]): Optional wall-clock cap in seconds,
        e.g. 0.002. Runs are only reproducible while the sample cap binds.
    """

    l_min: float = 1.0
    l_max: float = 2.0
    n_sample: int = 20
    n_new: int = 50
    yaw_count: int = 8
    fls_samples: int = 300
    fls_time_budget: Optional[float] = None

    def __post_init__(self):
        if not (0.0 < self.l_min <= self.l_max):
            raise DomainError(Errors.E060.format(l_min=self.l_min, l_max=self.l_max))
        if self.yaw_count < 1:
            raise DomainError(Errors.E061.format(yaw_count=self.yaw_count))
        if self.l_max < 2 * self.l_min:
            warnings.warn(Warnings.W005.format(l_max=self.l_max, l_min=self.l_min))

    @property
    def degree_bound(self) -> float:
        """Packing bound on the number of clusters one cluster can reach."""
        return 4.0 * (self.l_max / self.l_min) ** 2

    def yaw_angle(self, index: int) -> float:
        return 2.0 * math.pi * index / self.yaw_count


def wrap_angle(angle: float) -> float:
    """Map an angle to [-pi, pi)."""
    return (angle + math.pi) % (2.0 * math.pi) - math.pi


def nearest_yaw(angle: float, yaw_count: int) -> int:
    """Index of the discrete yaw closest to `angle`, the lower index on ties."""
    diffs = [abs(wrap_angle(angle - 2.0 * math.pi * i / yaw_count)) for i in range(yaw_count)]
    return int(numpy.argmin(numpy.round(diffs, 12)))


@dataclass(frozen=True)
class MotionModel:
    """Rotate, translate, rotate motion of a disc robot, either charged by
    distance or by execution time in whole control steps.
    """

    v_max: float = 0.5
    omega_max: float = 1.6
    dt: float = 0.2
    metric: str = CostMetric.TIME.value

    def translate_steps(self, distance: float) -> int:
        return int(math.ceil(distance / (self.v_max * self.dt) - 1e-9))

    def rotate_steps(self, angle: float) -> int:
        return int(math.ceil(abs(angle) / (self.omega_max * self.dt) - 1e-9))

    def turn_cost(self, angle: float) -> float:
        if self.metric == CostMetric.DISTANCE:
            return abs(angle) / self.omega_max * self.v_max
        return self.rotate_steps(angle) * self.dt

    def polyline_cost(self, waypoints: Sequence[Point], yaw1: float, yaw2: float) -> float:
        """Cost of following the waypoints, starting with heading yaw1 and
        ending with heading yaw2.
        """
        points = numpy.asarray(waypoints, dtype="float64")
        seg = numpy.diff(points, axis=0)
        lengths = numpy.hypot(seg[:, 0], seg[:, 1])
        keep = lengths > 1e-12
        seg, lengths = seg[keep], lengths[keep]
        if self.metric == CostMetric.DISTANCE:
            if lengths.size == 0:
                return self.turn_cost(wrap_angle(yaw2 - yaw1))
            return float(lengths.sum())
        steps = 0
        heading = yaw1
        for (dx, dy), length in zip(seg, lengths):
            direction = math.atan2(dy, dx)
            steps += self.rotate_steps(wrap_angle(direction - heading))
            steps += self.translate_steps(length)
            heading = direction
        steps += self.rotate_steps(wrap_angle(yaw2 - heading))
        return steps * self.dt

    def edge_cost(self, p1: Point, yaw1: float, p2: Point, yaw2: float) -> float:
        return self.polyline_cost([p1, p2], yaw1, yaw2)
