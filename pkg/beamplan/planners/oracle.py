from typing import Dict, Iterator, Tuple
import time

from ..criteria import CriterionContext, quality
from ..errors import Errors, DomainError
from ..graph import Path, PlanGraph
from .params import PlanResult


MAX_ORACLE_EDGES = 24


def enumerate_trails(graph: PlanGraph, start: int, budget: float) -> Iterator[Path]:
    """Every trail from start with cost within budget, the bare start path
    first, in depth-first order over ascending successor ids.
    """
    return enumerate_walks(graph, start, budget, max_traversals=1)


def enumerate_walks(
    graph: PlanGraph, start: int, budget: float, max_traversals: int = 2
) -> Iterator[Path]:
    """Every walk from start within budget that traverses each directed edge
    at most `max_traversals` times.
    """
    if max_traversals < 1:
        raise DomainError(Errors.E035.format(max_traversals=max_traversals))
    counts: Dict[Tuple[int, int], int] = {}
    root = Path.start_at(graph, start)
    yield root
    # Each frame holds the path and its not-yet-tried successors.
    stack = [(root, iter(graph.successors(start)))]
    while stack:
        path, successors = stack[-1]
        for v, cost in successors:
            edge = (path.last, v)
            if counts.get(edge, 0) >= max_traversals or path.cost + cost > budget:
                continue
            child = path.extend(edge)
            if child.cost > budget:
                continue
            counts[edge] = counts.get(edge, 0) + 1
            yield child
            stack.append((child, iter(graph.successors(v))))
            break
        else:
            stack.pop()
            if stack:
                edge = (stack[-1][0].last, path.last)
                counts[edge] -= 1


def oracle_trails(
    graph: PlanGraph,
    start: int,
    budget: float,
    ctx: CriterionContext,
    *,
    max_edges: int = MAX_ORACLE_EDGES,
) -> PlanResult:
    """Exhaustive search over all trails within budget. Refuses graphs with
    more than `max_edges` directed edges.
    """
    return _oracle(graph, start, budget, ctx, 1, max_edges, "oracle")


def oracle_walks(
    graph: PlanGraph,
    start: int,
    budget: float,
    ctx: CriterionContext,
    *,
    max_traversals: int = 2,
    max_edges: int = MAX_ORACLE_EDGES,
) -> PlanResult:
    """Exhaustive search over walks with each directed edge traversed at most
    `max_traversals` times.
    """
    return _oracle(graph, start, budget, ctx, max_traversals, max_edges, "oracle_walks")


def _oracle(
    graph: PlanGraph,
    start: int,
    budget: float,
    ctx: CriterionContext,
    max_traversals: int,
    max_edges: int,
    name: str,
) -> PlanResult:
    n_edges = graph.n_edges
    if n_edges > max_edges:
        raise DomainError(Errors.E032.format(limit=max_edges, n_edges=n_edges))
    t0 = time.perf_counter()
    best = None
    best_quality = 0.0
    count = 0
    for path in enumerate_walks(graph, start, budget, max_traversals):
        q = quality(path, ctx)
        if best is None or q > best_quality:
            best = path
            best_quality = q
        count += 1
    return PlanResult(best, count - 1, time.perf_counter() - t0, best_quality, name)
