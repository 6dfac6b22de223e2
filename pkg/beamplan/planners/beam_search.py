from typing import List
import time

import numpy

from ..criteria import CriterionContext
from ..errors import Errors, DomainError
from ..graph import Path, PlanGraph
from ..util import logger
from .params import BeamParams, PlanResult


_ONE = numpy.uint64(1)


def dbs(
    graph: PlanGraph,
    start: int,
    budget: float,
    params: BeamParams,
    ctx: CriterionContext,
) -> PlanResult:
    """Depth-wise beam search. At every depth the B most preferred extended
    paths are kept, whatever vertex they end at.

    graph (PlanGraph): The graph to plan on.
    start (int): The start vertex.
    budget (float): The cost budget C.
    params (BeamParams): Beam width B and search depth D.
    ctx (CriterionContext): The selection criterion.
    RETURNS (PlanResult): The best path found under the criterion.
    """
    return _beam_search(graph, start, budget, params, ctx, node_wise=False)


def nbs(
    graph: PlanGraph,
    start: int,
    budget: float,
    params: BeamParams,
    ctx: CriterionContext,
) -> PlanResult:
    """Node-wise beam search. At every depth the B most preferred extended
    paths are kept per terminal vertex.

    graph (PlanGraph): The graph to plan on.
    start (int): The start vertex.
    budget (float): The cost budget C.
    params (BeamParams): Beam width B and search depth D.
    ctx (CriterionContext): The selection criterion.
    RETURNS (PlanResult): The best path found under the criterion.
    """
    return _beam_search(graph, start, budget, params, ctx, node_wise=True)


def expansion_count_audit(result: PlanResult, graph: PlanGraph, params: BeamParams) -> bool:
    """Check the path count of a beam search run against its bound:
    |V|·D·B for depth-wise and |E|·D·B for node-wise search.
    """
    if result.planner == "dbs":
        bound = graph.n_vertices * params.search_depth * params.beam_width
    elif result.planner == "nbs":
        bound = graph.n_edges * params.search_depth * params.beam_width
    else:
        raise DomainError(Errors.E034.format(planner=result.planner))
    return result.paths_expanded <= bound


def _beam_search(
    graph: PlanGraph,
    start: int,
    budget: float,
    params: BeamParams,
    ctx: CriterionContext,
    *,
    node_wise: bool,
) -> PlanResult:
    # Live paths are held column-wise: terminal vertex, cost, gain, bitsets of
    # visited gain groups and traversed edge ids, and a node id into the
    # parent/edge history used to rebuild the winner.
    t0 = time.perf_counter()
    name = "nbs" if node_wise else "dbs"
    graph.position(start)
    arrays = graph.arrays()
    vertex_gains = graph.gains
    groups = graph.group_ids()
    frontier = ctx.frontier_mask(graph)
    n_groups = int(groups.max()) + 1 if groups.size else 1
    group_words = max(1, (n_groups + 63) // 64)
    edge_words = max(1, (arrays.n_edges + 63) // 64)
    beam_width = params.beam_width

    last = numpy.asarray([start], dtype="int64")
    cost = numpy.zeros(1, dtype="float64")
    gain = vertex_gains[last].copy()
    visited = numpy.zeros((1, group_words), dtype=numpy.uint64)
    _set_bits(visited, numpy.zeros(1, dtype="int64"), groups[last])
    traversed = numpy.zeros((1, edge_words), dtype=numpy.uint64)
    node = numpy.zeros(1, dtype="int64")
    history_parent: List[numpy.ndarray] = [numpy.asarray([-1], dtype="int64")]
    history_edge: List[numpy.ndarray] = [numpy.asarray([-1], dtype="int64")]
    n_nodes = 1

    best_quality = float(ctx.evaluate(gain[0], 0.0, frontier[start]))
    best_parent = -1
    best_edge = -1
    expanded = 0

    for _ in range(params.search_depth):
        begin = arrays.indptr[last]
        degree = arrays.indptr[last + 1] - begin
        total = int(degree.sum())
        if total == 0:
            break
        src = numpy.repeat(numpy.arange(last.size), degree)
        offsets = numpy.arange(total) - numpy.repeat(numpy.cumsum(degree) - degree, degree)
        edge = begin[src] + offsets
        fresh = ~_test_bits(traversed, src, edge)
        expanded += int(fresh.sum())
        new_cost = cost[src] + arrays.costs[edge]
        keep = fresh & (new_cost <= budget)
        if not keep.any():
            break
        src = src[keep]
        edge = edge[keep]
        new_cost = new_cost[keep]
        target = arrays.targets[edge]
        target_group = groups[target]
        seen = _test_bits(visited, src, target_group)
        new_gain = gain[src] + numpy.where(seen, 0.0, vertex_gains[target])

        candidate_quality = ctx.evaluate(new_gain, new_cost, frontier[target])
        i = int(numpy.argmax(candidate_quality))
        if candidate_quality[i] > best_quality:
            best_quality = float(candidate_quality[i])
            best_parent = int(node[src[i]])
            best_edge = int(edge[i])

        chosen = _select(target, new_gain, new_cost, beam_width, node_wise)
        history_parent.append(node[src[chosen]])
        history_edge.append(edge[chosen])
        node = numpy.arange(n_nodes, n_nodes + chosen.size, dtype="int64")
        n_nodes += chosen.size
        rows = numpy.arange(chosen.size)
        last = target[chosen]
        cost = new_cost[chosen]
        gain = new_gain[chosen]
        visited = visited[src[chosen]]
        _set_bits(visited, rows, target_group[chosen])
        traversed = traversed[src[chosen]]
        _set_bits(traversed, rows, edge[chosen])

    if best_edge < 0:
        best = Path.start_at(graph, start)
    else:
        parents = numpy.concatenate(history_parent)
        edges = numpy.concatenate(history_edge)
        chain = [best_edge]
        n = best_parent
        while n != 0:
            chain.append(int(edges[n]))
            n = int(parents[n])
        chain.reverse()
        best = Path.from_vertices(graph, [start] + arrays.targets[chain].tolist())
    wall_time = time.perf_counter() - t0
    logger.debug(
        "%s: %d paths expanded in %.4fs, best %s (quality %.4f)",
        name,
        expanded,
        wall_time,
        best,
        best_quality,
    )
    return PlanResult(best, expanded, wall_time, best_quality, name)


def _select(
    target: numpy.ndarray,
    gain: numpy.ndarray,
    cost: numpy.ndarray,
    beam_width: int,
    node_wise: bool,
) -> numpy.ndarray:
    """Indices of the candidates kept in the beam, in (group, preference)
    order. Preference is higher ratio, then higher gain, then lower cost;
    earlier candidates win exact ties.
    """
    n = target.size
    ratio = gain / cost
    group = target if node_wise else numpy.zeros(n, dtype="int64")
    order = numpy.lexsort((numpy.arange(n), cost, -gain, -ratio, group))
    sorted_group = group[order]
    starts = numpy.ones(n, dtype=bool)
    starts[1:] = sorted_group[1:] != sorted_group[:-1]
    index = numpy.arange(n)
    rank = index - numpy.maximum.accumulate(numpy.where(starts, index, 0))
    return order[rank < beam_width]


def _test_bits(words: numpy.ndarray, rows: numpy.ndarray, bits: numpy.ndarray) -> numpy.ndarray:
    shift = (bits & 63).astype(numpy.uint64)
    return ((words[rows, bits >> 6] >> shift) & _ONE).astype(bool)


def _set_bits(words: numpy.ndarray, rows: numpy.ndarray, bits: numpy.ndarray) -> None:
    shift = (bits & 63).astype(numpy.uint64)
    words[rows, bits >> 6] |= numpy.left_shift(_ONE, shift)
