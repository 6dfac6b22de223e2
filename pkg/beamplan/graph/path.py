from typing import FrozenSet, Iterator, List, Sequence, Tuple
from enum import Enum
import math

from ..errors import Errors, StructuralError
from .plan_graph import PlanGraph, Edge


class Preference(Enum):
    FIRST = "first"
    SECOND = "second"
    EQUIVALENT = "equivalent"


class Path:
    """A vertex sequence over a PlanGraph with cached cost, set-based gain and
    the set of traversed directed edges. Paths are immutable; `extend`
    returns a new path.
    """

    __slots__ = ("graph", "vertices", "cost", "gain", "traversed_edges", "_seen")

    def __init__(
        self,
        graph: PlanGraph,
        vertices: Tuple[int, ...],
        cost: float,
        gain: float,
        traversed_edges: FrozenSet[Edge],
        seen_groups: FrozenSet[int],
    ):
        self.graph = graph
        self.vertices = vertices
        self.cost = cost
        self.gain = gain
        self.traversed_edges = traversed_edges
        self._seen = seen_groups

    @classmethod
    def start_at(cls, graph: PlanGraph, v: int) -> "Path":
        return cls(
            graph, (v,), 0.0, graph.gain(v), frozenset(), frozenset((graph.group(v),))
        )

    @classmethod
    def from_vertices(cls, graph: PlanGraph, vertices: Sequence[int]) -> "Path":
        """Build a path from scratch, validating every edge.

        graph (PlanGraph): The graph the path lives on.
        vertices (Sequence[int]): The vertex sequence, at least one vertex.
        RETURNS (Path): The path with cost, gain and traversed edges computed.
        """
        if len(vertices) == 0:
            raise StructuralError(Errors.E008)
        path = cls.start_at(graph, int(vertices[0]))
        for v in vertices[1:]:
            path = path.extend((path.last, int(v)))
        return path

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def last(self) -> int:
        return self.vertices[-1]

    @property
    def n_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def ratio(self) -> float:
        return path_ratio(self.gain, self.cost)

    def extend(self, edge: Edge) -> "Path":
        u, v = edge
        if u != self.last:
            raise StructuralError(Errors.E007.format(last=self.last, u=u, v=v))
        cost = self.graph.edge_cost(u, v)
        group = self.graph.group(v)
        if group in self._seen:
            gain = self.gain
            seen = self._seen
        else:
            gain = self.gain + self.graph.gain(v)
            seen = self._seen | {group}
        return Path(
            self.graph,
            self.vertices + (v,),
            self.cost + cost,
            gain,
            self.traversed_edges | {(u, v)},
            seen,
        )

    def __add__(self, edge: Edge) -> "Path":
        return self.extend(edge)

    def traversed(self, u: int, v: int) -> bool:
        return (u, v) in self.traversed_edges

    def visits(self, v: int) -> bool:
        return v in self.vertices

    def edges(self) -> Iterator[Edge]:
        return zip(self.vertices[:-1], self.vertices[1:])

    def is_trail(self) -> bool:
        return len(self.traversed_edges) == self.n_edges

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.vertices)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Path):
            return NotImplemented
        return self.graph is other.graph and self.vertices == other.vertices

    def __hash__(self) -> int:
        return hash(self.vertices)

    def __repr__(self) -> str:
        return f"Path({list(self.vertices)}, cost={self.cost:g}, gain={self.gain:g})"


def path_ratio(gain: float, cost: float) -> float:
    """Gain-to-cost ratio. A zero-cost path has ratio +inf if it has any
    gain and 0 otherwise.
    """
    if cost > 0.0:
        return gain / cost
    return math.inf if gain > 0.0 else 0.0


def path_cost(path: Path) -> float:
    """Sum of the edge costs along the path, counting repeats. Recomputed
    from the graph rather than read from the cache.
    """
    total = 0.0
    for u, v in path.edges():
        total += path.graph.edge_cost(u, v)
    return total


def path_gain(path: Path) -> float:
    """Sum of vertex gains over the set of visited vertices (one gain per
    gain group), recomputed from the graph.
    """
    graph = path.graph
    for u, v in path.edges():
        if not graph.has_edge(u, v):
            raise StructuralError(Errors.E001.format(u=u, v=v))
    seen = set()
    total = 0.0
    for v in path.vertices:
        group = graph.group(v)
        if group not in seen:
            seen.add(group)
            total += graph.gain(v)
    return total


def preference_key(path: Path) -> Tuple[float, float, float]:
    return (path.ratio, path.gain, -path.cost)


def compare_preference(p1: Path, p2: Path) -> Preference:
    """Lexicographic preference: higher ratio, then higher gain, then lower
    cost.
    """
    if p1.graph is not p2.graph:
        raise StructuralError(Errors.E009)
    k1 = preference_key(p1)
    k2 = preference_key(p2)
    if k1 > k2:
        return Preference.FIRST
    elif k2 > k1:
        return Preference.SECOND
    return Preference.EQUIVALENT


def reduce_to_trail(graph: PlanGraph, vertices: Sequence[int]) -> List[int]:
    """Remove repeated directed edges from a walk. A walk pa + e + pb + e + pc
    becomes pa + reversed(pb) + pc, which visits the same vertex set, ends
    at the same vertex and is cheaper on a symmetric graph.

    graph (PlanGraph): The graph. Reverse edges of every rewritten segment
        must exist.
    vertices (Sequence[int]): The walk.
    RETURNS (List[int]): A walk in which no directed edge repeats.
    """
    walk = [int(v) for v in vertices]
    while True:
        first_seen = {}
        repeat = None
        for j in range(len(walk) - 1):
            edge = (walk[j], walk[j + 1])
            if edge in first_seen:
                repeat = (first_seen[edge], j)
                break
            first_seen[edge] = j
        if repeat is None:
            return walk
        i, j = repeat
        segment = walk[i + 1 : j]
        for a, b in zip(segment[:-1], segment[1:]):
            if not graph.has_edge(b, a):
                raise StructuralError(Errors.E012.format(u=b, v=a))
        if not graph.has_edge(walk[i], segment[-1]):
            raise StructuralError(Errors.E012.format(u=walk[i], v=segment[-1]))
        walk = walk[: i + 1] + segment[::-1] + walk[j + 2 :]
