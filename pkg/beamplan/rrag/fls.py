from typing import List, Optional, Set
import time
import warnings

import numpy

from ..errors import Warnings
from ..util import logger
from .clearance import ClearanceField
from .params import Point


def fls(
    x1: Point,
    x2: Point,
    clearance: ClearanceField,
    l_max: float,
    rng: numpy.random.Generator,
    *,
    max_samples: int = 2000,
    time_budget: Optional[float] = None,
    goal_bias: float = 0.1,
    refine_samples: int = 200,
) -> Optional[List[Point]]:
    """Fallback local planner for a blocked straight connection: an RRT*
    search from x1 to x2 inside the bounding box of both points inflated by
    l_max on every side. Extension steps and the rewiring radius are both
    l_max / 2. After the first solution, `refine_samples` more samples are
    spent improving it.

    x1 (Point): Start position.
    x2 (Point): Goal position.
    clearance (ClearanceField): The clearance of the current map.
    l_max (float): Box inflation and twice the step length.
    rng (numpy.random.Generator): Random stream of the search.
    max_samples (int): Sample cap.
    time_budget (Optional[float]): Optional wall-clock cap in seconds.
    goal_bias (float): Probability of sampling the goal itself.
    refine_samples (int): Samples spent after the first solution.
    RETURNS (Optional[List[Point]]): Waypoints from x1 to x2, or None.
    """
    start = numpy.asarray(x1, dtype="float64")
    goal = numpy.asarray(x2, dtype="float64")
    (bx0, by0), (bx1, by1) = clearance.bounds
    low = numpy.maximum(numpy.minimum(start, goal) - l_max, (bx0, by0))
    high = numpy.minimum(numpy.maximum(start, goal) + l_max, (bx1, by1))
    step = l_max / 2.0
    nodes = [start]
    parents = [-1]
    costs = [0.0]
    children: List[Set[int]] = [set()]
    goal_links: List[int] = []
    t0 = time.perf_counter()
    remaining_refine: Optional[int] = None
    for _ in range(max_samples):
        if time_budget is not None and time.perf_counter() - t0 > time_budget:
            break
        if remaining_refine is not None:
            if remaining_refine == 0:
                break
            remaining_refine -= 1
        sample = goal if rng.random() < goal_bias else rng.uniform(low, high)
        points = numpy.asarray(nodes)
        dist = numpy.hypot(*(points - sample).T)
        n = int(numpy.argmin(dist))
        if dist[n] < 1e-9:
            continue
        new = sample if dist[n] <= step else points[n] + step * (sample - points[n]) / dist[n]
        if not clearance.is_free(new) or not clearance.segment_free(points[n], new):
            continue
        dnew = numpy.hypot(*(points - new).T)
        near = numpy.flatnonzero(dnew <= step)
        parent, cost = n, costs[n] + dnew[n]
        through = numpy.asarray(costs)[near] + dnew[near]
        for j in near[numpy.argsort(through, kind="stable")]:
            candidate = costs[j] + dnew[j]
            if candidate >= cost:
                break
            if clearance.segment_free(points[j], new):
                parent, cost = int(j), candidate
                break
        k = len(nodes)
        nodes.append(new)
        parents.append(parent)
        costs.append(float(cost))
        children.append(set())
        children[parent].add(k)
        for j in near.tolist():
            if j == parent:
                continue
            candidate = costs[k] + dnew[j]
            if candidate < costs[j] - 1e-12 and clearance.segment_free(new, points[j]):
                children[parents[j]].discard(j)
                parents[j] = k
                children[k].add(j)
                _shift_costs(j, candidate - costs[j], costs, children)
        dgoal = float(numpy.hypot(*(goal - new)))
        if dgoal <= step and clearance.segment_free(new, goal):
            goal_links.append(k)
            if remaining_refine is None:
                remaining_refine = refine_samples
    if not goal_links:
        logger.debug("fls: no path from %s to %s, %d nodes", tuple(x1), tuple(x2), len(nodes))
        warnings.warn(Warnings.W001.format(max_samples=max_samples))
        return None
    best = min(goal_links, key=lambda k: costs[k] + float(numpy.hypot(*(goal - nodes[k]))))
    route = []
    while best != -1:
        route.append((float(nodes[best][0]), float(nodes[best][1])))
        best = parents[best]
    route.reverse()
    if numpy.hypot(route[-1][0] - goal[0], route[-1][1] - goal[1]) > 1e-12:
        route.append((float(goal[0]), float(goal[1])))
    return route


def _shift_costs(v: int, delta: float, costs: List[float], children: List[Set[int]]) -> None:
    stack = [v]
    while stack:
        u = stack.pop()
        costs[u] += delta
        stack.extend(children[u])


def polyline_length(waypoints: List[Point]) -> float:
    points = numpy.asarray(waypoints, dtype="float64")
    return float(numpy.hypot(*numpy.diff(points, axis=0).T).sum())
