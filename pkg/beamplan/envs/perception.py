from typing import FrozenSet, List, Optional
import math

import numpy
from scipy.spatial import cKDTree

from ..errors import Errors, DomainError
from ..graph import PlanGraph
from ..util import logger


class PerceptionState:
    """Radius-limited view of a hidden graph. Each visited vertex reveals
    every vertex within `radius` of it; the discovered graph is the subgraph
    induced by the revealed vertices.

    true_graph (PlanGraph): The hidden graph.
    radius (float): Perception radius rho in meters.
    frontier_fraction (float): A discovered vertex farther than
        frontier_fraction * radius from every visited vertex may be a
        frontier.
    """

    def __init__(
        self, true_graph: PlanGraph, radius: float, *, frontier_fraction: float = 0.8
    ):
        if not (radius >= 0.0):
            raise DomainError(Errors.E051.format(radius=radius))
        if not (0.0 <= frontier_fraction <= 1.0):
            raise DomainError(Errors.E052.format(fraction=frontier_fraction))
        self.true_graph = true_graph
        self.radius = float(radius)
        self.frontier_fraction = float(frontier_fraction)
        self._positions = true_graph.positions()
        self._tree = cKDTree(self._positions)
        self.discovered = numpy.zeros(true_graph.n_vertices, dtype=bool)
        self.visited: List[int] = []

    @property
    def n_discovered(self) -> int:
        return int(self.discovered.sum())

    def observe(self, at: int) -> "PerceptionState":
        """Reveal the radius-neighbourhood of `at` and record the visit."""
        found = self._tree.query_ball_point(self._positions[at], r=self.radius)
        before = self.n_discovered
        self.discovered[found] = True
        self.discovered[at] = True
        self.visited.append(at)
        logger.debug("observe %d: %d new vertices", at, self.n_discovered - before)
        return self

    def discovered_graph(self) -> PlanGraph:
        return self.true_graph.restrict(self.discovered)

    def frontier_vertices(self) -> FrozenSet[int]:
        """Discovered vertices that are farther than frontier_fraction *
        radius from every visited vertex and still have an edge to an
        undiscovered vertex.
        """
        if not self.visited:
            return frozenset()
        candidates = numpy.flatnonzero(self.discovered)
        visited_tree = cKDTree(self._positions[sorted(set(self.visited))])
        dist, _ = visited_tree.query(self._positions[candidates], k=1)
        far = candidates[dist > self.frontier_fraction * self.radius]
        arrays = self.true_graph.arrays()
        undiscovered = ~self.discovered
        frontier = []
        for v in far.tolist():
            succ = arrays.targets[arrays.indptr[v] : arrays.indptr[v + 1]]
            if undiscovered[succ].any() or any(
                undiscovered[u] for u in self.true_graph.predecessors(v)
            ):
                frontier.append(v)
        return frozenset(frontier)


def frontier_vertices(state: PerceptionState) -> FrozenSet[int]:
    return state.frontier_vertices()


def observe(state: PerceptionState, at: int) -> PerceptionState:
    return state.observe(at)


class OnlinePerceptionEnvironment:
    """Executor environment that hides the graph behind a PerceptionState.
    The planner sees only the discovered subgraph and its frontier set.
    """

    online = True

    def __init__(
        self, true_graph: PlanGraph, radius: float, *, frontier_fraction: float = 0.8
    ):
        self.true_graph = true_graph
        self.radius = radius
        self.frontier_fraction = frontier_fraction
        self.state: Optional[PerceptionState] = None

    def reset(self, start: int) -> None:
        self.state = PerceptionState(
            self.true_graph, self.radius, frontier_fraction=self.frontier_fraction
        )
        self.state.observe(start)

    def visible_graph(self) -> PlanGraph:
        return self.state.discovered_graph()

    def frontier(self) -> Optional[FrozenSet[int]]:
        return self.state.frontier_vertices()

    def arrive(self, v: int) -> None:
        self.state.observe(v)


def reveal_radius(graph: PlanGraph) -> float:
    """A radius at which the first observation reveals the whole graph."""
    positions = graph.positions()
    if len(positions) == 0:
        return 0.0
    span = positions.max(axis=0) - positions.min(axis=0)
    return math.hypot(float(span[0]), float(span[1])) + 1.0
