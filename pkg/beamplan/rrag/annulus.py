from typing import Callable, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass
from enum import Enum
import math

import numpy

from ..errors import Errors, StructuralError
from ..graph import PlanGraph
from ..util import logger, registry
from .clearance import ClearanceField, collision_free_edge
from .fls import fls
from .index import SpatialIndex
from .params import AnnulusParams, MotionModel, Point, nearest_yaw, wrap_angle


GainFunction = Callable[[Point, float], float]
Bounds = Tuple[Point, Point]


class GraphMethod(str, Enum):
    RRAG = "rrag"
    RRAT = "rrat"
    RRAT_STAR = "rrat_star"


@dataclass
class NodeCluster:
    """Co-located vertices that differ only in yaw. `members[i]` has the
    yaw index `yaw_indices[i]`.
    """

    position: Point
    members: Tuple[int, ...]
    yaw_indices: Tuple[int, ...]


def _zero_gain(position: Point, yaw: float) -> float:
    return 0.0


class AnnulusGraph:
    """A PlanGraph grown by one of the annulus builders, together with the
    node clusters, the spatial index over cluster positions and, for the
    tree builders, the parent links and costs-to-come.

    params (AnnulusParams): Builder parameters.
    motion (MotionModel): Edge cost model.
    method (str): "rrag", "rrat" or "rrat_star".
    gain_fn (Optional[GainFunction]): Gain of a (position, yaw) pose.
    shared_gain (bool): Whether the members of a cluster share one gain
        group, for orientation-independent gains.
    """

    def __init__(
        self,
        params: AnnulusParams,
        motion: Optional[MotionModel] = None,
        *,
        method: str = GraphMethod.RRAG.value,
        gain_fn: Optional[GainFunction] = None,
        shared_gain: bool = False,
    ):
        self.params = params
        self.motion = motion if motion is not None else MotionModel()
        self.method = GraphMethod(method)
        self.gain_fn = gain_fn if gain_fn is not None else _zero_gain
        self.shared_gain = shared_gain
        self.graph = PlanGraph()
        self.clusters: Dict[int, NodeCluster] = {}
        self.index = SpatialIndex()
        self.cluster_of: Dict[int, int] = {}
        self.headings: Dict[int, float] = {}
        self.waypoints: Dict[Tuple[int, int], List[Point]] = {}
        self.intermediates: Dict[int, List[Tuple[int, int]]] = {}
        self.parent: Dict[int, Optional[int]] = {}
        self.cost_to_come: Dict[int, float] = {}
        self.root: Optional[int] = None
        self._groups: List[int] = []

    @property
    def is_tree(self) -> bool:
        return self.method != GraphMethod.RRAG

    @property
    def n_clusters(self) -> int:
        return len(self.clusters)

    def position(self, v: int) -> Point:
        return self.graph.position(v)

    def heading(self, v: int) -> float:
        return self.headings[v]

    def cluster_positions(self) -> numpy.ndarray:
        return numpy.asarray([c.position for c in self.clusters.values()]).reshape(-1, 2)

    # Vertices and clusters

    def add_root(self, position: Point, yaw: float = 0.0) -> int:
        """Create the first cluster at the robot's position and return the
        vertex matching the robot's yaw.
        """
        if self.is_tree:
            index = nearest_yaw(yaw, self.params.yaw_count)
            cid = self._new_cluster(position, (index,))
            v = self.clusters[cid].members[0]
            self.parent[v] = None
            self.cost_to_come[v] = 0.0
            self.root = v
        else:
            cid = self._new_cluster(position, tuple(range(self.params.yaw_count)))
            v = self.member_toward(cid, yaw)
            self.root = v
        self._sync_groups()
        return v

    def member_toward(self, cid: int, angle: float) -> int:
        """The member whose yaw is closest to `angle`, the lower yaw index
        on ties.
        """
        cluster = self.clusters[cid]
        diffs = [
            abs(wrap_angle(angle - self.params.yaw_angle(i))) for i in cluster.yaw_indices
        ]
        return cluster.members[int(numpy.argmin(numpy.round(diffs, 12)))]

    def best_yaw(self, position: Point) -> int:
        """The yaw index with the highest gain at `position`."""
        gains = [
            self.gain_fn(position, self.params.yaw_angle(i))
            for i in range(self.params.yaw_count)
        ]
        return int(numpy.argmax(gains))

    def _new_cluster(self, position: Point, yaw_indices: Sequence[int]) -> int:
        position = (float(position[0]), float(position[1]))
        cid = self.index.add(position)
        members = []
        for i in yaw_indices:
            angle = self.params.yaw_angle(i)
            v = self._add_vertex(position, angle, yaw_index=i, group=cid)
            self.cluster_of[v] = cid
            members.append(v)
        self.clusters[cid] = NodeCluster(position, tuple(members), tuple(yaw_indices))
        k = len(members)
        if k > 1:
            turn = self.motion.turn_cost(2.0 * math.pi / self.params.yaw_count)
            for j in range(k):
                a, b = members[j], members[(j + 1) % k]
                for u, v in ((a, b), (b, a)):
                    if u != v and not self.graph.has_edge(u, v):
                        self.graph.add_edge(u, v, turn)
        return cid

    def _add_vertex(
        self, position: Point, heading: float, *, yaw_index: Optional[int], group: Optional[int]
    ) -> int:
        gain = max(float(self.gain_fn(position, heading)), 0.0)
        v = self.graph.add_vertex(position, gain, yaw=yaw_index)
        self.headings[v] = heading
        self._groups.append(group if group is not None else -(v + 1))
        return v

    def _sync_groups(self) -> None:
        if self.shared_gain:
            self.graph.set_gain_groups(self._groups)

    def remove_cluster(self, cid: int) -> None:
        for v in self.clusters[cid].members:
            self.remove_vertex(v)
        del self.clusters[cid]
        self.index.remove(cid)

    def remove_vertex(self, v: int) -> None:
        for u in self.graph.predecessors(v):
            self.waypoints.pop((u, v), None)
        for w, _ in self.graph.successors(v):
            self.waypoints.pop((v, w), None)
        self.graph.remove_vertex(v)
        self.parent.pop(v, None)
        self.cost_to_come.pop(v, None)

    def refresh_gains(self, vertices: Sequence[int]) -> None:
        for v in vertices:
            if self.graph.is_active(v):
                gain = max(float(self.gain_fn(self.position(v), self.headings[v])), 0.0)
                self.graph.set_gain(v, gain)

    # Edges

    def edge_waypoints(self, u: int, v: int) -> List[Point]:
        if (u, v) in self.waypoints:
            return list(self.waypoints[(u, v)])
        return [self.position(u), self.position(v)]

    def add_motion_edge(
        self, u: int, v: int, waypoints: Optional[List[Point]] = None
    ) -> float:
        """Add u -> v with its motion cost; `waypoints` marks a bent edge."""
        route = waypoints if waypoints is not None else [self.position(u), self.position(v)]
        cost = self.motion.polyline_cost(route, self.headings[u], self.headings[v])
        self.graph.add_edge(u, v, cost)
        if waypoints is not None:
            self.waypoints[(u, v)] = list(waypoints)
        return cost

    def remove_edge(self, u: int, v: int) -> None:
        self.graph.remove_edge(u, v)
        self.waypoints.pop((u, v), None)

    def find_route(
        self,
        p1: Point,
        p2: Point,
        clearance: ClearanceField,
        rng: Optional[numpy.random.Generator] = None,
    ) -> Optional[List[Point]]:
        """Waypoints of a collision-free connection from p1 to p2: the
        straight segment when it is free, otherwise the route of the
        fallback local planner when it is enabled and succeeds, or None.
        """
        if collision_free_edge(p1, p2, clearance):
            return [p1, p2]
        if self.params.fls_samples <= 0 or rng is None:
            return None
        return fls(
            p1,
            p2,
            clearance,
            self.params.l_max,
            rng,
            max_samples=self.params.fls_samples,
            time_budget=self.params.fls_time_budget,
        )

    def attach_route(self, source: int, target: int, route: List[Point]) -> bool:
        """Add the edge from `source` to `target` along `route`, attached to
        the members best aligned with the direction of travel. Routes with
        more than two points are stored as bent edges.
        """
        depart = math.atan2(route[1][1] - route[0][1], route[1][0] - route[0][0])
        arrive = math.atan2(route[-1][1] - route[-2][1], route[-1][0] - route[-2][0])
        u = self.member_toward(source, depart)
        v = self.member_toward(target, arrive)
        if self.graph.has_edge(u, v):
            return False
        self.add_motion_edge(u, v, list(route) if len(route) > 2 else None)
        return True

    def cluster_out_degree(self, cid: int) -> int:
        """Number of distinct clusters reachable by one inter-cluster edge."""
        targets = set()
        for u in self.clusters[cid].members:
            for v, _ in self.graph.successors(u):
                other = self.cluster_of.get(v)
                if other is not None and other != cid:
                    targets.add(other)
        return len(targets)

    # Trees

    def children(self, v: int) -> List[int]:
        return [w for w, _ in self.graph.successors(v)]

    def subtree(self, v: int) -> List[int]:
        order, stack = [], [v]
        while stack:
            u = stack.pop()
            order.append(u)
            stack.extend(reversed(self.children(u)))
        return order

    def propagate_costs(self, v: int) -> None:
        """Recompute costs-to-come below v from its own cost."""
        for u in self.subtree(v):
            for w in self.children(u):
                self.cost_to_come[w] = self.cost_to_come[u] + self.graph.edge_cost(u, w)

    def set_parent(self, v: int, parent: int) -> None:
        old = self.parent.get(v)
        if old is not None and self.graph.has_edge(old, v):
            self.remove_edge(old, v)
        self.add_motion_edge(parent, v)
        self.parent[v] = parent
        self.cost_to_come[v] = self.cost_to_come[parent] + self.graph.edge_cost(parent, v)
        self.propagate_costs(v)


def pull_in(draw: Point, index: SpatialIndex, params: AnnulusParams) -> Optional[Point]:
    """Apply the annulus rules to one draw: reject it when it lies closer
    than l_min to an existing node, move it to exactly l_min from the
    nearest node when it lies farther than l_max.

    draw (Point): The random position.
    index (SpatialIndex): Index over existing node positions.
    params (AnnulusParams): l_min and l_max.
    RETURNS (Optional[Point]): The candidate position, or None.
    """
    draw = (float(draw[0]), float(draw[1]))
    nearest = index.nearest(draw)
    if nearest is None:
        return draw
    dist, key = nearest
    if dist < params.l_min:
        return None
    if dist > params.l_max:
        x, y = index.point(key)
        scale = params.l_min / dist
        # Every other node is at least as far from the draw as the nearest,
        # so the moved point stays l_min away from all of them.
        draw = (x + scale * (draw[0] - x), y + scale * (draw[1] - y))
    return draw


def sample_free(
    ag: AnnulusGraph,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    bounds: Optional[Bounds] = None,
) -> Optional[Point]:
    """Draw up to n_sample positions uniformly within `bounds` (the map
    bounds by default) and return the first one that passes the annulus
    rules and is collision-free, or None.
    """
    low, high = bounds if bounds is not None else clearance.bounds
    for _ in range(ag.params.n_sample):
        draw = rng.uniform(low, high)
        point = pull_in((draw[0], draw[1]), ag.index, ag.params)
        if point is not None and clearance.is_free(point):
            return point
    return None


def add_cluster(
    ag: AnnulusGraph,
    position: Point,
    clearance: ClearanceField,
    rng: Optional[numpy.random.Generator] = None,
) -> int:
    """Add a full K-yaw cluster at `position` and try edges in both
    directions to every cluster within l_max. Returns the cluster id.
    """
    if ag.is_tree:
        raise StructuralError(Errors.E063.format(method=ag.method.value, needed="rrag"))
    neighbours = ag.index.within(position, ag.params.l_max)
    cid = ag._new_cluster(position, tuple(range(ag.params.yaw_count)))
    for other in neighbours:
        route = ag.find_route(position, ag.clusters[other].position, clearance, rng)
        if route is None:
            continue
        ag.attach_route(cid, other, route)
        ag.attach_route(other, cid, route[::-1])
    ag._sync_groups()
    return cid


@registry.graph_builders("rrag")
def rrag_expand(
    ag: AnnulusGraph,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    bounds: Optional[Bounds] = None,
) -> int:
    """Grow the annulus graph by up to n_new clusters. A new position is
    kept only if the straight line to its nearest cluster is free; it is
    then connected in both directions to every cluster within l_max.

    RETURNS (int): The number of clusters added.
    """
    added = 0
    for _ in range(ag.params.n_new):
        x = sample_free(ag, clearance, rng, bounds)
        if x is None:
            continue
        nearest = ag.index.nearest(x)
        if nearest is not None and not collision_free_edge(
            x, ag.clusters[nearest[1]].position, clearance
        ):
            continue
        add_cluster(ag, x, clearance, rng)
        added += 1
    logger.debug("rrag: %d clusters added, %d total", added, ag.n_clusters)
    return added


@registry.graph_builders("rrat")
def rrat_expand(
    ag: AnnulusGraph,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    bounds: Optional[Bounds] = None,
) -> int:
    """Grow the tree by up to n_new vertices, each hanging from its nearest
    node with the single most informative yaw.
    """
    added = 0
    for _ in range(ag.params.n_new):
        x = sample_free(ag, clearance, rng, bounds)
        if x is None:
            continue
        nearest = ag.index.nearest(x)
        if nearest is None:
            continue
        parent_cluster = ag.clusters[nearest[1]]
        if not collision_free_edge(x, parent_cluster.position, clearance):
            continue
        cid = ag._new_cluster(x, (ag.best_yaw(x),))
        v = ag.clusters[cid].members[0]
        ag.set_parent(v, parent_cluster.members[0])
        added += 1
    ag._sync_groups()
    logger.debug("rrat: %d vertices added, %d total", added, ag.n_clusters)
    return added


@registry.graph_builders("rrat_star")
def rrat_star_expand(
    ag: AnnulusGraph,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    bounds: Optional[Bounds] = None,
) -> int:
    """Grow the tree by up to n_new vertices. Each new vertex takes the
    parent with the lowest cost-to-come among the nodes within l_max, then
    every such node is rewired through the new vertex if that is cheaper.
    """
    added = 0
    for _ in range(ag.params.n_new):
        x = sample_free(ag, clearance, rng, bounds)
        if x is None:
            continue
        nearest = ag.index.nearest(x)
        if nearest is None:
            continue
        if not collision_free_edge(x, ag.clusters[nearest[1]].position, clearance):
            continue
        yaw_index = ag.best_yaw(x)
        heading = ag.params.yaw_angle(yaw_index)
        near = [
            cid
            for cid in ag.index.within(x, ag.params.l_max)
            if collision_free_edge(ag.clusters[cid].position, x, clearance)
        ]
        best: Optional[Tuple[float, int]] = None
        for cid in near:
            u = ag.clusters[cid].members[0]
            if u not in ag.cost_to_come:
                continue
            cost = ag.cost_to_come[u] + ag.motion.edge_cost(
                ag.position(u), ag.headings[u], x, heading
            )
            if best is None or cost < best[0]:
                best = (cost, u)
        if best is None:
            continue
        cid = ag._new_cluster(x, (yaw_index,))
        v = ag.clusters[cid].members[0]
        ag.set_parent(v, best[1])
        for other in near:
            w = ag.clusters[other].members[0]
            if w == best[1] or w == ag.root or w not in ag.cost_to_come:
                continue
            through = ag.cost_to_come[v] + ag.motion.edge_cost(
                x, heading, ag.position(w), ag.headings[w]
            )
            if through < ag.cost_to_come[w] - 1e-12:
                ag.set_parent(w, v)
        added += 1
    ag._sync_groups()
    logger.debug("rrat_star: %d vertices added, %d total", added, ag.n_clusters)
    return added


def expand(
    ag: AnnulusGraph,
    clearance: ClearanceField,
    rng: numpy.random.Generator,
    bounds: Optional[Bounds] = None,
) -> int:
    """Run the expansion round of the graph's own construction method."""
    return registry.graph_builders.get(ag.method.value)(ag, clearance, rng, bounds)
