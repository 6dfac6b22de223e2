from typing import List, Optional, Tuple
import math

import numpy
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from ..errors import Errors, StructuralError
from ..util import logger
from .annulus import AnnulusGraph, Bounds, GraphMethod, expand
from .clearance import ClearanceField, collision_free_edge
from .fls import polyline_length
from .params import Point


def insert_intermediate(
    ag: AnnulusGraph,
    edge: Tuple[int, int],
    position: Point,
    *,
    progress: Optional[float] = None,
    heading: Optional[float] = None,
    clearance: Optional[ClearanceField] = None,
) -> int:
    """Add a temporary vertex where the robot is, part-way along `edge`.
    The edge itself stays; u -> w and w -> v split its cost by `progress`,
    and w gets outgoing edges to the clusters within l_max that a straight
    line reaches.

    ag (AnnulusGraph): An RRAG graph.
    edge (Tuple[int, int]): The edge being traversed.
    position (Point): The robot position on the edge.
    progress (Optional[float]): Fraction of the edge cost already spent;
        defaults to the travelled fraction of the edge length.
    heading (Optional[float]): The robot's yaw; defaults to the direction of
        travel.
    clearance (Optional[ClearanceField]): Needed for the outgoing edges.
    RETURNS (int): The temporary vertex.
    """
    if ag.is_tree:
        raise StructuralError(Errors.E063.format(method=ag.method.value, needed="rrag"))
    u, v = edge
    if not ag.graph.has_edge(u, v):
        raise StructuralError(Errors.E064.format(u=u, v=v))
    position = (float(position[0]), float(position[1]))
    route = ag.edge_waypoints(u, v)
    k = _segment_index(route, position)
    first = route[: k + 1] + [position]
    second = [position] + route[k + 1 :]
    if progress is None:
        total = polyline_length(route)
        progress = polyline_length(first) / total if total > 0.0 else 0.5
    progress = min(max(progress, 1e-6), 1.0 - 1e-6)
    if heading is None:
        (ax, ay), (bx, by) = route[k], route[k + 1]
        if (ax, ay) != (bx, by):
            heading = math.atan2(by - ay, bx - ax)
        else:
            heading = ag.headings[u]
    cost = ag.graph.edge_cost(u, v)
    w = ag._add_vertex(position, heading, yaw_index=None, group=None)
    ag.graph.add_edge(u, w, cost * progress)
    ag.graph.add_edge(w, v, cost * (1.0 - progress))
    if len(route) > 2:
        ag.waypoints[(u, w)] = first
        ag.waypoints[(w, v)] = second
    added = [(u, w), (w, v)]
    if clearance is not None:
        for cid in ag.index.within(position, ag.params.l_max):
            target = ag.clusters[cid].position
            dx, dy = target[0] - position[0], target[1] - position[1]
            if math.hypot(dx, dy) < 1e-9:
                continue
            if not collision_free_edge(position, target, clearance):
                continue
            t = ag.member_toward(cid, math.atan2(dy, dx))
            if not ag.graph.has_edge(w, t):
                ag.add_motion_edge(w, t)
                added.append((w, t))
    ag.intermediates[w] = added
    ag._sync_groups()
    return w


def remove_intermediate(ag: AnnulusGraph, w: int) -> None:
    """Drop a temporary vertex and every edge it took part in."""
    if w not in ag.intermediates:
        raise StructuralError(Errors.E062.format(v=w))
    ag.remove_vertex(w)
    del ag.intermediates[w]


def _segment_index(route: List[Point], position: Point) -> int:
    points = numpy.asarray(route, dtype="float64")
    p = numpy.asarray(position, dtype="float64")
    best, best_dist = 0, numpy.inf
    for k in range(len(points) - 1):
        a, b = points[k], points[k + 1]
        ab = b - a
        denom = float(ab @ ab)
        t = 0.0 if denom == 0.0 else min(max(float((p - a) @ ab) / denom, 0.0), 1.0)
        dist = float(numpy.hypot(*(a + t * ab - p)))
        if dist < best_dist - 1e-12:
            best, best_dist = k, dist
    return best


def attach_root(
    ag: AnnulusGraph,
    position: Point,
    heading: float,
    edge: Tuple[int, int],
    progress: float,
) -> int:
    """Split the tree edge the robot is on with a vertex at the robot's
    pose, to become the new root. Returns the new vertex.
    """
    if not ag.is_tree:
        raise StructuralError(Errors.E063.format(method=ag.method.value, needed="rrat"))
    u, v = edge
    if not ag.graph.has_edge(u, v):
        raise StructuralError(Errors.E064.format(u=u, v=v))
    progress = min(max(progress, 1e-6), 1.0 - 1e-6)
    cost = ag.graph.edge_cost(u, v)
    r = ag._add_vertex(
        (float(position[0]), float(position[1])), heading, yaw_index=None, group=None
    )
    ag.remove_edge(u, v)
    ag.graph.add_edge(r, v, cost * (1.0 - progress))
    ag.parent[v] = r
    if ag.method == GraphMethod.RRAT_STAR:
        ag.graph.add_edge(u, r, cost * progress)
        ag.parent[r] = u
    ag._sync_groups()
    return r


def advance_root(
    ag: AnnulusGraph, new_root: int, clearance: Optional[ClearanceField] = None
) -> None:
    """Move the tree root to `new_root`. RRAT keeps only the branch below
    the new root and drops everything else. RRAT* keeps every vertex,
    re-orients the tree away from the new root and rewires the nodes near
    it through the root where that is cheaper.
    """
    if not ag.is_tree:
        raise StructuralError(Errors.E063.format(method=ag.method.value, needed="rrat"))
    if ag.method == GraphMethod.RRAT:
        old = ag.parent.get(new_root)
        if old is not None and ag.graph.has_edge(old, new_root):
            ag.remove_edge(old, new_root)
        keep = set(ag.subtree(new_root))
        _drop_vertices(ag, [v for v in ag.graph.vertices() if v not in keep])
    else:
        _reorient(ag, new_root)
    ag.root = new_root
    ag.parent[new_root] = None
    ag.cost_to_come[new_root] = 0.0
    ag.propagate_costs(new_root)
    if ag.method == GraphMethod.RRAT_STAR and clearance is not None:
        origin = ag.position(new_root)
        for cid in ag.index.within(origin, ag.params.l_max):
            w = ag.clusters[cid].members[0]
            if w == new_root or ag.parent.get(w) == new_root:
                continue
            if not collision_free_edge(origin, ag.position(w), clearance):
                continue
            through = ag.motion.edge_cost(
                origin, ag.headings[new_root], ag.position(w), ag.headings[w]
            )
            if through < ag.cost_to_come[w] - 1e-12:
                ag.set_parent(w, new_root)
    logger.debug(
        "%s: root moved to %d, %d vertices", ag.method.value, new_root, ag.graph.n_vertices
    )


def _reorient(ag: AnnulusGraph, new_root: int) -> None:
    arrays = ag.graph.arrays()
    n = ag.graph.n_vertices
    matrix = csr_matrix(
        (numpy.ones(arrays.n_edges), arrays.targets, arrays.indptr), shape=(n, n)
    )
    order, predecessors = breadth_first_order(
        matrix, new_root, directed=False, return_predecessors=True
    )
    reached = set(order.tolist())
    _drop_vertices(ag, [v for v in ag.graph.vertices() if v not in reached])
    for v in order.tolist()[1:]:
        p = int(predecessors[v])
        if not ag.graph.has_edge(p, v):
            route = ag.edge_waypoints(v, p)[::-1]
            ag.remove_edge(v, p)
            ag.add_motion_edge(p, v, route if len(route) > 2 else None)
        ag.parent[v] = p


def _drop_vertices(ag: AnnulusGraph, vertices: List[int]) -> None:
    for v in vertices:
        if not ag.graph.is_active(v):
            continue
        cid = ag.cluster_of.get(v)
        if cid is not None and cid in ag.clusters:
            ag.remove_cluster(cid)
        else:
            ag.remove_vertex(v)
            ag.intermediates.pop(v, None)


def revalidate_edges(
    ag: AnnulusGraph, robot_position: Point, clearance: ClearanceField, l_edge: float
) -> int:
    """Remove the edges near the robot that the current map no longer
    allows. Bent edges are checked along their stored waypoints. In a tree
    the branch below a removed edge goes with it.

    RETURNS (int): The number of edges removed.
    """
    positions = ag.graph.positions()
    if len(positions) == 0:
        return 0
    offsets = positions - numpy.asarray(robot_position, dtype="float64")
    close = numpy.hypot(offsets[:, 0], offsets[:, 1]) <= l_edge
    failed = []
    for u, v, _ in ag.graph.edges():
        if not (close[u] or close[v]):
            continue
        route = ag.edge_waypoints(u, v)
        if (u, v) in ag.waypoints:
            ok = clearance.polyline_free(route)
        elif route[0] == route[1]:
            ok = clearance.is_free(route[0])
        else:
            ok = collision_free_edge(route[0], route[1], clearance)
        if not ok:
            failed.append((u, v))
    removed = 0
    for u, v in failed:
        if not ag.graph.has_edge(u, v):
            continue
        ag.remove_edge(u, v)
        removed += 1
        if ag.is_tree and ag.parent.get(v) == u:
            _drop_vertices(ag, ag.subtree(v))
    return removed


def graph_update(
    ag: AnnulusGraph,
    robot_position: Point,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    *,
    l_gain: float = 5.0,
    l_edge: float = 5.0,
    new_root: Optional[int] = None,
    bounds: Optional[Bounds] = None,
) -> int:
    """Bring the graph up to date with the current map, then expand it.

    Gains within l_gain of the robot are recomputed, edges within l_edge are
    revalidated, a tree moves its root to `new_root` when given, and one
    expansion round of the graph's own method runs.

    RETURNS (int): The number of edges removed by revalidation.
    """
    positions = ag.graph.positions()
    if len(positions):
        offsets = positions - numpy.asarray(robot_position, dtype="float64")
        near = numpy.flatnonzero(numpy.hypot(offsets[:, 0], offsets[:, 1]) <= l_gain)
        ag.refresh_gains(near.tolist())
    removed = revalidate_edges(ag, robot_position, clearance, l_edge)
    if ag.is_tree and new_root is not None:
        advance_root(ag, new_root, clearance)
    expand(ag, clearance, rng, bounds)
    logger.debug("graph update: %d edges removed, %d vertices", removed, ag.graph.n_vertices)
    return removed
