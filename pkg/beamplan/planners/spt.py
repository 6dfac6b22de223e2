import time

import numpy

from ..criteria import CriterionContext
from ..errors import Errors, DomainError
from ..graph import Path, PlanGraph
from ..util import logger
from .params import PlanResult
from .shortest_paths import bellman_ford, tree_path


def gain_threshold(gains: numpy.ndarray, alpha: float) -> float:
    """Mid-range threshold g_max - alpha·(g_max - g_min)."""
    if gains.size == 0:
        return 0.0
    g_min = float(gains.min())
    g_max = float(gains.max())
    return g_max - alpha * (g_max - g_min)


def spt_plan(
    graph: PlanGraph,
    start: int,
    budget: float,
    alpha: float,
    ctx: CriterionContext,
) -> PlanResult:
    """Plan over the shortest-path tree rooted at start: every root-to-vertex
    tree path within budget whose vertex passes the gain threshold (or is a
    frontier) is a candidate. The threshold is inclusive, so alpha = 1 keeps
    every reachable vertex.

    graph (PlanGraph): The graph to plan on.
    start (int): The root vertex.
    budget (float): The cost budget C.
    alpha (float): Threshold parameter in [0, 1].
    ctx (CriterionContext): The selection criterion.
    RETURNS (PlanResult): The best tree path.
    """
    if not (0.0 <= alpha <= 1.0):
        raise DomainError(Errors.E031.format(alpha=alpha))
    t0 = time.perf_counter()
    dist, pred = bellman_ford(graph, start)
    gains = graph.gains
    frontier = ctx.frontier_mask(graph)
    active = numpy.asarray([graph.is_active(v) for v in range(graph.n_vertices)])
    reachable = numpy.isfinite(dist)
    threshold = gain_threshold(gains[active], alpha)

    path_gain = numpy.zeros(graph.n_vertices)
    path_gain[start] = gains[start]
    order = [int(v) for v in numpy.argsort(dist, kind="stable") if reachable[v]]
    if graph.has_gain_groups:
        for v in order[1:]:
            path_gain[v] = Path.from_vertices(graph, tree_path(pred, v)).gain
    else:
        for v in order[1:]:
            path_gain[v] = path_gain[pred[v]] + gains[v]

    candidates = reachable & (dist <= budget) & ((gains >= threshold) | frontier)
    candidates[start] = False
    best = Path.start_at(graph, start)
    best_quality = float(ctx.evaluate(best.gain, 0.0, frontier[start]))
    vertices = numpy.flatnonzero(candidates)
    if vertices.size:
        q = ctx.evaluate(path_gain[vertices], dist[vertices], frontier[vertices])
        i = int(numpy.argmax(q))
        if q[i] > best_quality:
            best_quality = float(q[i])
            best = Path.from_vertices(graph, tree_path(pred, int(vertices[i])))
    wall_time = time.perf_counter() - t0
    logger.debug("spt: %d tree paths, best %s", len(order), best)
    return PlanResult(best, len(order), wall_time, best_quality, "spt")
