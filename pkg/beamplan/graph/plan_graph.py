from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union
from dataclasses import dataclass
import json
import math
from pathlib import Path as FilePath

import numpy
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ..errors import Errors, StructuralError


Point = Tuple[float, float]
Edge = Tuple[int, int]


@dataclass(frozen=True)
class GraphArrays:
    """Compressed sparse row view of the adjacency, with edges sorted by
    (source, target). Edge ids used by the planners index into these arrays.
    """

    indptr: numpy.ndarray
    targets: numpy.ndarray
    costs: numpy.ndarray
    sources: numpy.ndarray

    @property
    def n_edges(self) -> int:
        return int(self.targets.shape[0])


@dataclass(frozen=True)
class GraphStats:
    n_vertices: int
    n_edges: int
    max_out_degree: int
    n_components: int


class _Topology:
    # Adjacency and the cached CSR view, shared by derived graphs.
    __slots__ = ("adj", "arrays")

    def __init__(self):
        self.adj: List[Dict[int, float]] = []
        self.arrays: Optional[GraphArrays] = None


class PlanGraph:
    """Directed simple graph with per-vertex gain, per-edge positive cost and
    2D vertex positions.

    Vertex ids are dense and stable: removing a vertex drops its edges and
    marks it inactive, but never renumbers the others.
    """

    def __init__(self):
        self._positions: List[Point] = []
        self._gains: List[float] = []
        self._yaws: List[Optional[int]] = []
        self._frontier: List[bool] = []
        self._active: List[bool] = []
        self._groups: Optional[List[int]] = None
        self._topology = _Topology()
        self._derived = False

    def __len__(self) -> int:
        return len(self._positions)

    def __repr__(self) -> str:
        return f"PlanGraph(n_vertices={self.n_vertices}, n_edges={self.n_edges})"

    @property
    def n_vertices(self) -> int:
        return len(self._positions)

    @property
    def n_edges(self) -> int:
        return sum(len(succ) for succ in self._topology.adj)

    @property
    def is_derived(self) -> bool:
        return self._derived

    # Vertices

    def add_vertex(
        self,
        position: Sequence[float],
        gain: float = 0.0,
        *,
        yaw: Optional[int] = None,
        frontier: bool = False,
    ) -> int:
        self._check_mutable()
        v = len(self._positions)
        _check_gain(v, gain)
        self._positions.append((float(position[0]), float(position[1])))
        self._gains.append(float(gain))
        self._yaws.append(None if yaw is None else int(yaw))
        self._frontier.append(bool(frontier))
        self._active.append(True)
        if self._groups is not None:
            self._groups.append(max(self._groups, default=-1) + 1)
        self._topology.adj.append({})
        self._invalidate()
        return v

    def remove_vertex(self, v: int) -> None:
        """Remove all edges incident to v and mark it inactive."""
        self._check_mutable()
        self._check_vertex(v)
        self._topology.adj[v].clear()
        for succ in self._topology.adj:
            succ.pop(v, None)
        self._active[v] = False
        self._gains[v] = 0.0
        self._frontier[v] = False
        self._invalidate()

    def is_active(self, v: int) -> bool:
        return self._active[v]

    def vertices(self) -> Iterator[int]:
        return (v for v in range(len(self._positions)) if self._active[v])

    def position(self, v: int) -> Point:
        self._check_vertex(v)
        return self._positions[v]

    def positions(self) -> numpy.ndarray:
        return numpy.asarray(self._positions, dtype="float64").reshape(-1, 2)

    def gain(self, v: int) -> float:
        self._check_vertex(v)
        return self._gains[v]

    def set_gain(self, v: int, gain: float) -> None:
        self._check_vertex(v)
        _check_gain(v, gain)
        self._gains[v] = float(gain)

    @property
    def gains(self) -> numpy.ndarray:
        return numpy.asarray(self._gains, dtype="float64")

    def yaw(self, v: int) -> Optional[int]:
        return self._yaws[v]

    def is_frontier(self, v: int) -> bool:
        return self._frontier[v]

    def set_frontier(self, v: int, flag: bool) -> None:
        self._check_vertex(v)
        self._frontier[v] = bool(flag)

    @property
    def frontier_flags(self) -> numpy.ndarray:
        return numpy.asarray(self._frontier, dtype=bool)

    # Shared-gain groups

    def set_gain_groups(self, groups: Optional[Sequence[int]]) -> None:
        """Assign vertices to gain groups. A path collects a group's gain
        once, from the first member it visits. None restores the default of
        one group per vertex.
        """
        if groups is None:
            self._groups = None
            return
        if len(groups) != self.n_vertices:
            raise StructuralError(
                Errors.E011.format(n_gains=len(groups), n_vertices=self.n_vertices)
            )
        self._groups = [int(g) for g in groups]

    @property
    def has_gain_groups(self) -> bool:
        return self._groups is not None

    def group(self, v: int) -> int:
        return v if self._groups is None else self._groups[v]

    def group_ids(self) -> numpy.ndarray:
        """Dense group index per vertex, in [0, n_groups)."""
        if self._groups is None:
            return numpy.arange(self.n_vertices, dtype="int64")
        _, inverse = numpy.unique(numpy.asarray(self._groups), return_inverse=True)
        return inverse.astype("int64")

    # Edges

    def add_edge(self, u: int, v: int, cost: float) -> None:
        self._check_mutable()
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise StructuralError(Errors.E004.format(v=v))
        if not (cost > 0.0) or not math.isfinite(cost):
            raise StructuralError(Errors.E002.format(cost=cost, u=u, v=v))
        if v in self._topology.adj[u]:
            raise StructuralError(Errors.E005.format(u=u, v=v))
        self._topology.adj[u][v] = float(cost)
        self._invalidate()

    def remove_edge(self, u: int, v: int) -> float:
        self._check_mutable()
        if not self.has_edge(u, v):
            raise StructuralError(Errors.E001.format(u=u, v=v))
        cost = self._topology.adj[u].pop(v)
        self._invalidate()
        return cost

    def has_edge(self, u: int, v: int) -> bool:
        if not (0 <= u < len(self._positions)):
            return False
        return v in self._topology.adj[u]

    def edge_cost(self, u: int, v: int) -> float:
        try:
            return self._topology.adj[u][v]
        except (KeyError, IndexError):
            raise StructuralError(Errors.E001.format(u=u, v=v)) from None

    def successors(self, v: int) -> List[Tuple[int, float]]:
        """Outgoing (target, cost) pairs of v, sorted by target."""
        self._check_vertex(v)
        return sorted(self._topology.adj[v].items())

    def predecessors(self, v: int) -> List[int]:
        return [u for u, succ in enumerate(self._topology.adj) if v in succ]

    def out_degree(self, v: int) -> int:
        return len(self._topology.adj[v])

    def edges(self) -> Iterator[Tuple[int, int, float]]:
        for u, succ in enumerate(self._topology.adj):
            for v in sorted(succ):
                yield u, v, succ[v]

    def arrays(self) -> GraphArrays:
        """The cached CSR view of the adjacency."""
        if self._topology.arrays is None:
            n = self.n_vertices
            indptr = numpy.zeros(n + 1, dtype="int64")
            targets: List[int] = []
            costs: List[float] = []
            for u, succ in enumerate(self._topology.adj):
                for v in sorted(succ):
                    targets.append(v)
                    costs.append(succ[v])
                indptr[u + 1] = len(targets)
            targets_arr = numpy.asarray(targets, dtype="int64")
            sources = numpy.repeat(numpy.arange(n, dtype="int64"), numpy.diff(indptr))
            self._topology.arrays = GraphArrays(
                indptr=indptr,
                targets=targets_arr,
                costs=numpy.asarray(costs, dtype="float64"),
                sources=sources,
            )
        return self._topology.arrays

    # Derived graphs

    def with_gains(self, gains: Sequence[float]) -> "PlanGraph":
        """A graph sharing this graph's topology, with new vertex gains.
        The derived graph's topology cannot be mutated.
        """
        if len(gains) != self.n_vertices:
            raise StructuralError(
                Errors.E011.format(n_gains=len(gains), n_vertices=self.n_vertices)
            )
        derived = self._derive()
        derived._gains = [float(g) for g in gains]
        for v, g in enumerate(derived._gains):
            _check_gain(v, g)
        return derived

    def with_frontier(self, flags: Sequence[bool]) -> "PlanGraph":
        derived = self._derive()
        derived._frontier = [bool(f) for f in flags]
        return derived

    def restrict(self, mask: Sequence[bool]) -> "PlanGraph":
        """Induced subgraph over the vertices where mask is true. Vertex ids
        are kept; excluded vertices are inactive, isolated and gain-free.
        """
        mask = [bool(m) for m in mask]
        sub = PlanGraph()
        sub._positions = list(self._positions)
        sub._yaws = list(self._yaws)
        sub._active = [a and m for a, m in zip(self._active, mask)]
        sub._gains = [g if m else 0.0 for g, m in zip(self._gains, sub._active)]
        sub._frontier = [f and m for f, m in zip(self._frontier, sub._active)]
        sub._groups = None if self._groups is None else list(self._groups)
        sub._topology.adj = [
            {v: c for v, c in succ.items() if mask[v]} if mask[u] else {}
            for u, succ in enumerate(self._topology.adj)
        ]
        return sub

    def copy(self) -> "PlanGraph":
        return self.restrict([True] * self.n_vertices)

    def _derive(self) -> "PlanGraph":
        derived = PlanGraph()
        derived._positions = self._positions
        derived._yaws = self._yaws
        derived._active = self._active
        derived._gains = list(self._gains)
        derived._frontier = list(self._frontier)
        derived._groups = self._groups
        derived._topology = self._topology
        derived._derived = True
        return derived

    # Serialization

    def to_dict(self) -> Dict:
        vertices = []
        for v in range(self.n_vertices):
            x, y = self._positions[v]
            vertices.append(
                {
                    "id": v,
                    "x": x,
                    "y": y,
                    "yaw": self._yaws[v],
                    "gain": self._gains[v],
                    "frontier": self._frontier[v],
                    "active": self._active[v],
                }
            )
        edges = [{"from": u, "to": v, "cost": c} for u, v, c in self.edges()]
        data = {"vertices": vertices, "edges": edges}
        if self._groups is not None:
            data["groups"] = list(self._groups)
        return data

    @classmethod
    def from_dict(cls, data: Dict) -> "PlanGraph":
        graph = cls()
        for i, vertex in enumerate(sorted(data["vertices"], key=lambda v: v["id"])):
            if vertex["id"] != i:
                raise StructuralError(Errors.E006.format(v=vertex["id"], n=i))
            graph.add_vertex(
                (vertex["x"], vertex["y"]),
                vertex["gain"],
                yaw=vertex.get("yaw"),
                frontier=vertex.get("frontier", False),
            )
        for edge in data["edges"]:
            graph.add_edge(edge["from"], edge["to"], edge["cost"])
        for vertex in data["vertices"]:
            if not vertex.get("active", True):
                graph._active[vertex["id"]] = False
        if "groups" in data:
            graph.set_gain_groups(data["groups"])
        return graph

    def to_json(self) -> str:
        # The standard encoder writes floats with repr(), which round-trips
        # exactly.
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "PlanGraph":
        return cls.from_dict(json.loads(text))

    def to_disk(self, path: Union[str, FilePath]) -> None:
        FilePath(path).write_text(self.to_json() + "\n", encoding="utf8")

    @classmethod
    def from_disk(cls, path: Union[str, FilePath]) -> "PlanGraph":
        return cls.from_json(FilePath(path).read_text(encoding="utf8"))

    # Internals

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < len(self._positions)):
            raise StructuralError(Errors.E006.format(v=v, n=len(self._positions)))

    def _check_mutable(self) -> None:
        if self._derived:
            raise StructuralError(Errors.E010)

    def _invalidate(self) -> None:
        self._topology.arrays = None


def _check_gain(v: int, gain: float) -> None:
    if not (gain >= 0.0) or not math.isfinite(gain):
        raise StructuralError(Errors.E003.format(gain=gain, v=v))


def graph_stats(graph: PlanGraph) -> GraphStats:
    """Vertex and edge counts, the maximum out-degree, and the number of
    weakly connected components over the active vertices.
    """
    active = numpy.asarray([graph.is_active(v) for v in range(graph.n_vertices)])
    n_active = int(active.sum())
    arrays = graph.arrays()
    if n_active == 0:
        return GraphStats(0, 0, 0, 0)
    matrix = csr_matrix(
        (numpy.ones(arrays.n_edges), arrays.targets, arrays.indptr),
        shape=(graph.n_vertices, graph.n_vertices),
    )
    _, labels = connected_components(matrix, directed=True, connection="weak")
    degrees = numpy.diff(arrays.indptr)
    return GraphStats(
        n_vertices=n_active,
        n_edges=arrays.n_edges,
        max_out_degree=int(degrees.max()) if degrees.size else 0,
        n_components=int(numpy.unique(labels[active]).size),
    )


def component_labels(graph: PlanGraph) -> numpy.ndarray:
    """Weakly connected component label per vertex (inactive vertices get
    their own singleton labels).
    """
    arrays = graph.arrays()
    matrix = csr_matrix(
        (numpy.ones(arrays.n_edges), arrays.targets, arrays.indptr),
        shape=(graph.n_vertices, graph.n_vertices),
    )
    _, labels = connected_components(matrix, directed=True, connection="weak")
    return labels
