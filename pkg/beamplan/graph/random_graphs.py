"""Small graph constructors shared by the test suites and `beamplan verify`."""
from typing import List, Optional, Sequence, Tuple

import numpy

from .plan_graph import PlanGraph


def symmetric_graph(
    positions: Sequence[Tuple[float, float]],
    gains: Sequence[float],
    edges: Sequence[Tuple[int, int, float]],
) -> PlanGraph:
    """Graph with both directions of every listed undirected edge."""
    graph = PlanGraph()
    for position, gain in zip(positions, gains):
        graph.add_vertex(position, gain)
    for u, v, cost in edges:
        graph.add_edge(u, v, cost)
        graph.add_edge(v, u, cost)
    return graph


def line_graph(gains: Sequence[float], cost: float = 1.0) -> PlanGraph:
    positions = [(float(i), 0.0) for i in range(len(gains))]
    edges = [(i, i + 1, cost) for i in range(len(gains) - 1)]
    return symmetric_graph(positions, gains, edges)


def star_graph(hub_gain: float, leaf_gains: Sequence[float], cost: float = 1.0) -> PlanGraph:
    """Hub at vertex 0 with one symmetric spoke per leaf."""
    n = len(leaf_gains)
    positions = [(0.0, 0.0)] + [
        (numpy.cos(2 * numpy.pi * i / n), numpy.sin(2 * numpy.pi * i / n))
        for i in range(n)
    ]
    edges = [(0, i + 1, cost) for i in range(n)]
    return symmetric_graph(positions, [hub_gain] + list(leaf_gains), edges)


def random_symmetric_graph(
    rng: numpy.random.Generator,
    n_vertices: int,
    n_edges: int,
    *,
    cost_range: Tuple[float, float] = (1.0, 5.0),
    gain_range: Tuple[float, float] = (0.0, 10.0),
    frontier_probability: float = 0.0,
    connected: bool = True,
) -> PlanGraph:
    """Random graph with `n_edges` undirected edges (two directed edges
    each). With `connected`, a random spanning tree is laid first, so
    n_edges must be at least n_vertices - 1.
    """
    all_pairs = [(u, v) for u in range(n_vertices) for v in range(u + 1, n_vertices)]
    n_edges = min(n_edges, len(all_pairs))
    chosen: List[Tuple[int, int]] = []
    if connected and n_vertices > 1:
        order = rng.permutation(n_vertices)
        for i in range(1, n_vertices):
            parent = order[int(rng.integers(0, i))]
            child = order[i]
            chosen.append((int(min(parent, child)), int(max(parent, child))))
    remaining = [pair for pair in all_pairs if pair not in set(chosen)]
    n_extra = max(0, n_edges - len(chosen))
    if n_extra and remaining:
        picks = rng.choice(len(remaining), size=min(n_extra, len(remaining)), replace=False)
        chosen.extend(remaining[int(i)] for i in sorted(picks))
    positions = [tuple(p) for p in rng.uniform(0.0, 10.0, size=(n_vertices, 2))]
    gains = rng.uniform(gain_range[0], gain_range[1], size=n_vertices)
    costs = rng.uniform(cost_range[0], cost_range[1], size=len(chosen))
    graph = symmetric_graph(
        positions,
        gains,
        [(u, v, float(c)) for (u, v), c in zip(sorted(chosen), costs)],
    )
    if frontier_probability > 0.0:
        flags = rng.random(n_vertices) < frontier_probability
        for v in range(n_vertices):
            graph.set_frontier(v, bool(flags[v]))
    return graph


def random_walk(
    graph: PlanGraph,
    rng: numpy.random.Generator,
    start: int,
    n_steps: int,
    *,
    trail: bool = False,
) -> List[int]:
    """Random walk of at most n_steps edges; stops early at dead ends. With
    `trail`, directed edges are not repeated.
    """
    walk = [start]
    used = set()
    for _ in range(n_steps):
        options = [
            v for v, _ in graph.successors(walk[-1]) if not (trail and (walk[-1], v) in used)
        ]
        if not options:
            break
        nxt = options[int(rng.integers(0, len(options)))]
        used.add((walk[-1], nxt))
        walk.append(nxt)
    return walk


def decoy_graph(branch_gain: Optional[float] = None) -> PlanGraph:
    """A start vertex with a cheap rich neighbour leading nowhere and a poor
    neighbour leading into a richer chain. Greedy depth-wise search with
    beam width 1 follows the decoy.

        decoy(8) <- start(0) -> gate(1) -> a(9) -> b(9)
    """
    rich = 9.0 if branch_gain is None else branch_gain
    positions = [(0.0, 0.0), (-1.0, 0.0), (1.0, 0.0), (2.0, 0.0), (3.0, 0.0)]
    gains = [0.0, 8.0, 1.0, rich, rich]
    edges = [(0, 1, 1.0), (0, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]
    return symmetric_graph(positions, gains, edges)
