from typing import Dict, List, Optional, Sequence, Tuple
import time

import numpy

from ..errors import StructuralError
from ..graph import GraphArrays, Path, PlanGraph, reduce_to_trail
from ..util import logger
from .params import PlanResult, TspParams
from .shortest_paths import AllPairs, bellman_ford, floyd_warshall
from .spt import gain_threshold


def tsp_plan(
    graph: PlanGraph,
    start: int,
    budget: float,
    params: TspParams,
    *,
    frontier: Optional[numpy.ndarray] = None,
) -> PlanResult:
    """Visit the frontier vertices and the vertices whose gain exceeds the
    threshold along a heuristic open tour from start, then keep the prefix of
    the expanded tour that fits the budget.

    graph (PlanGraph): The graph to plan on.
    start (int): The start vertex.
    budget (float): The cost budget C.
    params (TspParams): Threshold parameter alpha.
    frontier (Optional[numpy.ndarray]): Frontier mask; defaults to the
        graph's frontier flags.
    RETURNS (PlanResult): The truncated tour as a path.
    """
    t0 = time.perf_counter()
    if frontier is None:
        frontier = graph.frontier_flags
    dist, _ = bellman_ford(graph, start)
    gains = graph.gains
    active = numpy.asarray([graph.is_active(v) for v in range(graph.n_vertices)])
    threshold = gain_threshold(gains[active], params.alpha)
    ball = numpy.flatnonzero(active & (dist <= budget))
    selected = [
        int(v) for v in ball if v != start and (gains[v] > threshold or frontier[v])
    ]
    if not selected:
        best = Path.start_at(graph, start)
        return PlanResult(best, 0, time.perf_counter() - t0, best.gain, "tsp")

    all_pairs = shared_all_pairs(graph)
    stops = [all_pairs.index(start)] + [all_pairs.index(v) for v in selected]
    tour = nearest_neighbor_tour(all_pairs.dist, stops)
    tour = two_opt(all_pairs.dist, tour, max_swaps=10 * len(selected) ** 2)
    walk = [start]
    for a, b in zip(tour[:-1], tour[1:]):
        leg = all_pairs.path(int(all_pairs.vertices[a]), int(all_pairs.vertices[b]))
        walk.extend(leg[1:])
    try:
        walk = reduce_to_trail(graph, walk)
    except StructuralError:
        pass
    best = Path.from_vertices(graph, _budget_prefix(graph, walk, budget))
    wall_time = time.perf_counter() - t0
    logger.debug("tsp: %d stops, %d-vertex walk, best %s", len(tour), len(walk), best)
    return PlanResult(best, len(tour) - 1, wall_time, best.gain, "tsp")


_all_pairs_cache: Dict[str, Tuple[GraphArrays, AllPairs]] = {}


def shared_all_pairs(graph: PlanGraph) -> AllPairs:
    """All-pairs shortest paths over the active vertices, reused while the
    graph's topology is unchanged. Graphs derived with new gains share the
    topology of their source, so replanning on them hits the cache.
    """
    arrays = graph.arrays()
    cached = _all_pairs_cache.get("last")
    if cached is not None and cached[0] is arrays:
        return cached[1]
    all_pairs = floyd_warshall(graph)
    _all_pairs_cache["last"] = (arrays, all_pairs)
    logger.debug("tsp: all pairs over %d vertices", all_pairs.vertices.size)
    return all_pairs


def nearest_neighbor_tour(dist: numpy.ndarray, stops: Sequence[int]) -> List[int]:
    """Open tour over `stops` starting at stops[0], always moving to the
    closest unvisited stop. Unreachable stops are left out.
    """
    tour = [stops[0]]
    remaining = list(stops[1:])
    while remaining:
        row = dist[tour[-1], remaining]
        i = int(numpy.argmin(row))
        if not numpy.isfinite(row[i]):
            break
        tour.append(remaining.pop(i))
    return tour


def tour_cost(dist: numpy.ndarray, tour: Sequence[int]) -> float:
    return float(sum(dist[a, b] for a, b in zip(tour[:-1], tour[1:])))


def two_opt(dist: numpy.ndarray, tour: Sequence[int], max_swaps: int) -> List[int]:
    """Improve an open tour with a fixed first stop by segment reversals,
    taking the first improving move, for at most `max_swaps` moves.
    """
    tour = list(tour)
    n = len(tour)
    symmetric = bool(numpy.allclose(dist, dist.T, rtol=1e-12, atol=0.0))
    swaps = 0
    improved = True
    while improved and swaps < max_swaps:
        improved = False
        for i in range(1, n - 1):
            for j in range(i + 1, n):
                if _reversal_delta(dist, tour, i, j, symmetric) < -1e-12:
                    tour[i : j + 1] = tour[i : j + 1][::-1]
                    swaps += 1
                    improved = True
                    if swaps >= max_swaps:
                        return tour
    return tour


def _reversal_delta(
    dist: numpy.ndarray, tour: List[int], i: int, j: int, symmetric: bool
) -> float:
    a, b, c = tour[i - 1], tour[i], tour[j]
    delta = dist[a, c] - dist[a, b]
    if j + 1 < len(tour):
        d = tour[j + 1]
        delta += dist[b, d] - dist[c, d]
    if not symmetric:
        for k in range(i, j):
            delta += dist[tour[k + 1], tour[k]] - dist[tour[k], tour[k + 1]]
    return float(delta)


def _budget_prefix(graph: PlanGraph, walk: List[int], budget: float) -> List[int]:
    prefix = [walk[0]]
    cost = 0.0
    used = set()
    for u, v in zip(walk[:-1], walk[1:]):
        cost += graph.edge_cost(u, v)
        if cost > budget or (u, v) in used:
            break
        used.add((u, v))
        prefix.append(v)
    return prefix
