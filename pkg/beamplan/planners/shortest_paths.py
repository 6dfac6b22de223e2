from typing import List, Optional, Sequence, Tuple
from dataclasses import dataclass

import numpy
from scipy.sparse import csgraph, csr_matrix

from ..graph import PlanGraph


def bellman_ford(graph: PlanGraph, start: int) -> Tuple[numpy.ndarray, numpy.ndarray]:
    """Single-source shortest paths by synchronous Bellman-Ford relaxation.
    Among equally short parents the lowest vertex id wins.

    graph (PlanGraph): The graph.
    start (int): The source vertex.
    RETURNS (Tuple[numpy.ndarray, numpy.ndarray]): Distance per vertex (inf
        if unreachable) and predecessor per vertex (-1 for the source and
        for unreachable vertices).
    """
    graph.position(start)
    arrays = graph.arrays()
    n = graph.n_vertices
    dist = numpy.full(n, numpy.inf)
    dist[start] = 0.0
    pred = numpy.full(n, -1, dtype="int64")
    sources, targets, costs = arrays.sources, arrays.targets, arrays.costs
    for _ in range(max(n - 1, 0)):
        candidate = dist[sources] + costs
        order = numpy.lexsort((sources, candidate, targets))
        sorted_targets = targets[order]
        first = numpy.ones(order.size, dtype=bool)
        first[1:] = sorted_targets[1:] != sorted_targets[:-1]
        best = order[first]
        improve = candidate[best] < dist[targets[best]]
        if not improve.any():
            break
        best = best[improve]
        dist[targets[best]] = candidate[best]
        pred[targets[best]] = sources[best]
    return dist, pred


def tree_path(pred: numpy.ndarray, v: int) -> List[int]:
    """Vertex sequence from the tree root to v."""
    path = [int(v)]
    while pred[path[-1]] >= 0:
        path.append(int(pred[path[-1]]))
    path.reverse()
    return path


@dataclass
class AllPairs:
    """All-pairs shortest paths over a vertex subset. `dist` and
    `predecessors` are indexed by position in `vertices`; predecessors[i, j]
    is the position before j on the shortest path from i, negative if none.
    """

    vertices: numpy.ndarray
    dist: numpy.ndarray
    predecessors: numpy.ndarray

    def __post_init__(self):
        self._index = {int(v): i for i, v in enumerate(self.vertices)}

    def index(self, v: int) -> int:
        return self._index[int(v)]

    def cost(self, u: int, v: int) -> float:
        return float(self.dist[self._index[u], self._index[v]])

    def path(self, u: int, v: int) -> List[int]:
        i, j = self._index[int(u)], self._index[int(v)]
        if not numpy.isfinite(self.dist[i, j]):
            return []
        hops = [j]
        while hops[-1] != i:
            hops.append(int(self.predecessors[i, hops[-1]]))
        hops.reverse()
        return [int(self.vertices[h]) for h in hops]


def floyd_warshall(graph: PlanGraph, vertices: Optional[Sequence[int]] = None) -> AllPairs:
    """All-pairs shortest paths on the subgraph induced by `vertices` (all
    active vertices if None).
    """
    if vertices is None:
        vertices = list(graph.vertices())
    idx = numpy.asarray(sorted(int(v) for v in vertices), dtype="int64")
    arrays = graph.arrays()
    n = graph.n_vertices
    matrix = csr_matrix((arrays.costs, arrays.targets, arrays.indptr), shape=(n, n))
    dist, predecessors = csgraph.floyd_warshall(
        matrix[idx][:, idx], directed=True, return_predecessors=True
    )
    return AllPairs(idx, dist, predecessors)
