from typing import Optional, Tuple
from dataclasses import dataclass
from enum import Enum
import math

import numpy

from ..errors import Errors, DomainError
from ..graph import PlanGraph
from ..util import make_rng, registry


class GainMode(str, Enum):
    SCATTERED = "scattered"
    CLUSTERED = "clustered"


@dataclass(frozen=True)
class GridGraphSpec:
    """Parameters of a synthetic benchmark lattice.

    extent (float): Side length of the square area in meters.
    gain_mode (str): "scattered" (every vertex draws a gain) or "clustered"
        (only vertices inside the gain discs do).
    gain_range (Tuple[float, float]): Range of the uniform gain draws.
    cluster_count (int): Number of gain discs in clustered mode.
    seed (int): Seed of the generator stream.
    spacing (float): Lattice spacing in meters.
    connectivity (int): 4 or 8.
    cluster_radius (Optional[float]): Disc radius. Defaults to 2.5 m, or 5 m
        when the extent exceeds 25 m.
    """

    extent: float = 25.0
    gain_mode: str = GainMode.SCATTERED.value
    gain_range: Tuple[float, float] = (0.0, 100.0)
    cluster_count: int = 8
    seed: int = 0
    spacing: float = 1.0
    connectivity: int = 8
    cluster_radius: Optional[float] = None

    def __post_init__(self):
        problem = None
        if not (self.extent > 0.0):
            problem = f"extent must be positive, got {self.extent}"
        elif not (self.spacing > 0.0):
            problem = f"spacing must be positive, got {self.spacing}"
        elif self.connectivity not in (4, 8):
            problem = f"connectivity must be 4 or 8, got {self.connectivity}"
        elif self.gain_mode not in {mode.value for mode in GainMode}:
            problem = f"unknown gain_mode '{self.gain_mode}'"
        elif self.cluster_count < 1:
            problem = f"cluster_count must be >= 1, got {self.cluster_count}"
        elif not (0.0 <= self.gain_range[0] <= self.gain_range[1]):
            problem = f"gain_range must be 0 <= low <= high, got {self.gain_range}"
        elif self.gain_mode == GainMode.CLUSTERED and 2 * self.radius > self.extent:
            problem = f"cluster radius {self.radius} does not fit the extent"
        if problem is not None:
            raise DomainError(Errors.E050.format(problem=problem))

    @property
    def radius(self) -> float:
        if self.cluster_radius is not None:
            return float(self.cluster_radius)
        return 5.0 if self.extent > 25.0 else 2.5

    @property
    def side(self) -> int:
        """Number of lattice vertices per side."""
        return int(math.floor(self.extent / self.spacing + 1e-9)) + 1


def generate_grid(spec: GridGraphSpec) -> PlanGraph:
    """Build the lattice benchmark graph. Vertex ids are row-major with the
    start vertex 0 at (0, 0); every lattice edge exists in both directions
    with its Euclidean length as cost.

    spec (GridGraphSpec): The lattice parameters.
    RETURNS (PlanGraph): The generated graph.
    """
    n = spec.side
    xs, ys = numpy.meshgrid(numpy.arange(n), numpy.arange(n))
    positions = numpy.stack([xs.ravel(), ys.ravel()], axis=1) * spec.spacing
    gains = _draw_gains(spec, positions)
    graph = PlanGraph()
    for (x, y), gain in zip(positions.tolist(), gains.tolist()):
        graph.add_vertex((x, y), gain)
    if spec.connectivity == 8:
        offsets = [(di, dj) for di in (-1, 0, 1) for dj in (-1, 0, 1) if (di, dj) != (0, 0)]
    else:
        offsets = [(-1, 0), (0, -1), (0, 1), (1, 0)]
    for j in range(n):
        for i in range(n):
            for di, dj in offsets:
                a, b = i + di, j + dj
                if 0 <= a < n and 0 <= b < n:
                    graph.add_edge(j * n + i, b * n + a, math.hypot(di, dj) * spec.spacing)
    return graph


def _draw_gains(spec: GridGraphSpec, positions: numpy.ndarray) -> numpy.ndarray:
    rng = make_rng(spec.seed)
    low, high = spec.gain_range
    if spec.gain_mode == GainMode.SCATTERED:
        return rng.uniform(low, high, size=len(positions))
    r = spec.radius
    centers = rng.uniform(r, spec.extent - r, size=(spec.cluster_count, 2))
    gains = rng.uniform(low, high, size=len(positions))
    offsets = positions[:, None, :] - centers[None, :, :]
    inside = (numpy.hypot(offsets[..., 0], offsets[..., 1]) <= r).any(axis=1)
    return numpy.where(inside, gains, 0.0)


@registry.graph_generators("grid.v1")
def make_grid_graph(
    extent: float = 25.0,
    gain_mode: str = "scattered",
    gain_range: Tuple[float, float] = (0.0, 100.0),
    cluster_count: int = 8,
    seed: int = 0,
    spacing: float = 1.0,
    connectivity: int = 8,
    cluster_radius: Optional[float] = None,
) -> PlanGraph:
    spec = GridGraphSpec(
        extent=extent,
        gain_mode=gain_mode,
        gain_range=tuple(gain_range),
        cluster_count=cluster_count,
        seed=seed,
        spacing=spacing,
        connectivity=connectivity,
        cluster_radius=cluster_radius,
    )
    return generate_grid(spec)
