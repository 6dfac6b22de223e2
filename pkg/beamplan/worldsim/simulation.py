from typing import Any, Dict, List, Optional, Set, Tuple
from dataclasses import asdict, dataclass, field
from enum import Enum
import math
import time

import numpy

from ..criteria import CriterionContext
from ..errors import Errors, ConfigError, DomainError, SimulationError
from ..planners import Planner, check_plan
from ..rrag import AnnulusGraph, AnnulusParams, ClearanceField, MotionModel
from ..rrag import attach_root, graph_update, insert_intermediate, remove_intermediate
from ..rrag import nearest_yaw
from ..util import logger, make_rng, registry
from .gains import FrontierHistory, classify_frontier, node_gain, path_gain_points
from .robot import Robot2D, edge_schedule
from .sensor import SensorModel2D, sense
from .world import Pose, World2D


class Task(str, Enum):
    POINTS = "points"
    EXPLORATION = "exploration"
    SURFACE = "surface"


TASK_GAINS = {
    Task.POINTS: "point_collection",
    Task.EXPLORATION: "volumetric",
    Task.SURFACE: "surface_frontier",
}

# (l_min, l_max) of the annulus graph per task.
TASK_ANNULUS = {
    Task.POINTS: (1.0, 2.0),
    Task.EXPLORATION: (1.5, 3.0),
    Task.SURFACE: (1.5, 3.0),
}


class SimStrategy(str, Enum):
    PERIODIC = "periodic"
    AT_GOAL = "at_goal"
    EVERY_NODE = "every_node"


@dataclass(frozen=True)
class SimParams:
    """Settings of one simulated episode. Times are in seconds of simulated
    time, distances in meters. l_min and l_max default per task.
    """

    task: str = Task.POINTS.value
    budget: float = 120.0
    criterion: str = "gain"
    strategy: str = SimStrategy.PERIODIC.value
    replan_period_steps: int = 5
    method: str = "rrag"
    robot_radius: float = 0.3
    l_min: Optional[float] = None
    l_max: Optional[float] = None
    n_new: int = 50
    n_sample: int = 20
    yaw_count: int = 8
    fls_samples: int = 300
    fls_time_budget: Optional[float] = None
    l_gain: float = 5.0
    l_edge: float = 5.0
    l_col: float = 1.0
    fov_deg: float = 90.0
    sensor_range: float = 3.0
    n_rays: int = 181
    v_max: float = 0.5
    omega_max: float = 1.6
    dt: float = 0.2

    def __post_init__(self):
        if self.task not in {t.value for t in Task}:
            available = [t.value for t in Task]
            raise ConfigError(Errors.E072.format(name=self.task, available=available))
        if self.strategy not in {s.value for s in SimStrategy}:
            available = [s.value for s in SimStrategy]
            raise ConfigError(Errors.E042.format(name=self.strategy, available=available))
        if self.replan_period_steps < 1:
            raise DomainError(Errors.E074.format(period=self.replan_period_steps))
        if not (self.budget > 0.0):
            raise DomainError(Errors.E022.format(budget=self.budget))

    @property
    def annulus(self) -> AnnulusParams:
        l_min, l_max = TASK_ANNULUS[Task(self.task)]
        return AnnulusParams(
            l_min=l_min if self.l_min is None else self.l_min,
            l_max=l_max if self.l_max is None else self.l_max,
            n_sample=self.n_sample,
            n_new=self.n_new,
            yaw_count=self.yaw_count,
            fls_samples=self.fls_samples,
            fls_time_budget=self.fls_time_budget,
        )

    @property
    def motion(self) -> MotionModel:
        return MotionModel(self.v_max, self.omega_max, self.dt, "time")

    @property
    def sensor(self) -> SensorModel2D:
        return SensorModel2D(math.radians(self.fov_deg), self.sensor_range, self.n_rays)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def make_task_gain(params: SimParams):
    """The registered gain function of the episode's task."""
    task = Task(params.task)
    factory = registry.gain_functions.get(TASK_GAINS[task])
    if task == Task.POINTS:
        return factory(l_col=params.l_col)
    return factory(
        fov_deg=params.fov_deg, sensor_range=params.sensor_range, n_rays=params.n_rays
    )


@dataclass
class SimResult:
    """Outcome of a simulated episode. `objective` is the realized task
    value: point gain collected, cells revealed, or occupied cells found.
    `records` holds the step and plan records followed by a closing
    summary, none of them with wall-clock times.
    """

    task: str
    objective: float
    time_used: float
    n_steps: int
    n_plans: int
    paths_expanded: int
    plan_time_total: float
    planner: str
    records: List[Dict[str, Any]] = field(default_factory=list)


class Simulation:
    """A time-stepped active-perception episode in a 2D world.

    The robot scans its surroundings in place, grows an annulus graph over
    the known free space and follows plans made on it. Every control step
    moves the robot along the current edge, senses and accrues the realized
    gain. Plans are remade on the periodic, at_goal or every_node schedule,
    and whenever one runs out. Each replan first updates the graph from the
    new map; a robot caught between two vertices is joined to the graph
    where it stands.

    world (World2D): The world, with nothing observed yet.
    planner (Planner): Callable (graph, start, budget, ctx) -> PlanResult.
    params (SimParams): Episode settings.
    seed (int): Seed of the graph-construction stream.
    """

    def __init__(
        self,
        world: World2D,
        planner: Planner,
        params: SimParams = SimParams(),
        seed: int = 0,
    ):
        self.world = world
        self.planner = planner
        self.params = params
        self.task = Task(params.task)
        self.strategy = SimStrategy(params.strategy)
        self.sensor = params.sensor
        self.motion = params.motion
        self.gain = make_task_gain(params)
        self.history = FrontierHistory()
        self.rng = make_rng(seed, 1)
        x, y, yaw = world.start
        if not self._clear((x, y)):
            raise SimulationError(Errors.E073.format(x=x, y=y))
        self.robot = Robot2D((x, y, yaw), params.robot_radius, self.motion)
        self.step_count = 0
        self.objective = 0.0
        self.records: List[Dict[str, Any]] = []
        self.n_plans = 0
        self.paths_expanded = 0
        self.plan_time_total = 0.0
        self.planner_name = ""
        self.plan: Tuple[int, ...] = ()
        self.cursor = 0
        self.edge: Optional[Tuple[int, int]] = None
        self.schedule: List[Pose] = []
        self.edge_steps = 0
        self.done = False
        self._flagged: Set[int] = set()
        self._initial_scan()
        self.graph = AnnulusGraph(
            params.annulus,
            self.motion,
            method=params.method,
            gain_fn=self._pose_gain,
            shared_gain=self.task == Task.POINTS,
        )
        self.vertex: Optional[int] = self.graph.add_root(self.robot.position, self.robot.yaw)
        self._replan()

    @property
    def time(self) -> float:
        return self.step_count * self.motion.dt

    @property
    def remaining(self) -> float:
        return self.params.budget - self.time

    def _clear(self, position) -> bool:
        field_ = self.world.truth_clearance(self.params.robot_radius)
        return float(field_.distance([position])[0]) >= self.params.robot_radius

    def _pose_gain(self, position, yaw: float) -> float:
        return node_gain(self.world, (position[0], position[1], yaw), self.gain)

    def _initial_scan(self) -> None:
        # A free turn in place, ending on the discrete yaw closest to the
        # start heading so the robot's pose is a graph vertex.
        x, y, yaw = self.robot.pose
        count = self.params.yaw_count
        start = nearest_yaw(yaw, count)
        for k in range(1, count + 1):
            angle = 2.0 * math.pi * ((start + k) % count) / count
            sense(self.world, (x, y, angle), self.sensor)
        self.robot.pose = (x, y, 2.0 * math.pi * start / count)

    # Graph maintenance

    def _update_graph(self, new_root: Optional[int] = None) -> ClearanceField:
        clearance = self.world.planning_clearance(self.params.robot_radius)
        graph_update(
            self.graph,
            self.robot.position,
            clearance,
            self.rng,
            l_gain=self.params.l_gain,
            l_edge=self.params.l_edge,
            new_root=new_root,
            bounds=self.world.known_free_bounds(self.params.robot_radius),
        )
        self._refresh_frontiers()
        return clearance

    def _refresh_frontiers(self) -> None:
        """Classify the vertices near the robot and the new ones."""
        positions = self.graph.graph.positions()
        offsets = positions - numpy.asarray(self.robot.position)
        near = numpy.hypot(offsets[:, 0], offsets[:, 1]) <= self.params.l_gain
        for v in self.graph.graph.vertices():
            if v in self._flagged and not near[v]:
                continue
            pose = (positions[v, 0], positions[v, 1], self.graph.heading(v))
            flag = classify_frontier(self.world, pose, self.history, v, self.sensor)
            self.graph.graph.set_frontier(v, flag)
            self._flagged.add(v)

    def _drop_intermediates(self, keep: Optional[int] = None) -> None:
        for w in [w for w in self.graph.intermediates if w != keep]:
            remove_intermediate(self.graph, w)

    def _join_graph(self) -> Optional[int]:
        """Update the graph and return the vertex to plan from: the vertex
        the robot stands on, or a new one where it is on its edge. None if
        the edge being driven is gone.
        """
        if self.edge is None:
            self._drop_intermediates(keep=self.vertex)
            self._update_graph(new_root=self.vertex if self.graph.is_tree else None)
            return self.vertex
        u, v = self.edge
        progress = (self.edge_steps - len(self.schedule)) / self.edge_steps
        if self.graph.is_tree:
            if not self.graph.graph.has_edge(u, v):
                return None
            start = attach_root(
                self.graph, self.robot.position, self.robot.yaw, (u, v), progress
            )
            self._update_graph(new_root=start)
        else:
            clearance = self._update_graph()
            if not self.graph.graph.has_edge(u, v):
                return None
            start = insert_intermediate(
                self.graph,
                (u, v),
                self.robot.position,
                progress=progress,
                heading=self.robot.yaw,
                clearance=clearance,
            )
            self._drop_intermediates(keep=start)
        self.edge = (start, v)
        self.edge_steps = len(self.schedule)
        return start

    # Planning and execution

    def _replan(self) -> None:
        start = self._join_graph()
        if start is None:
            # Finish the current edge and plan again on arrival.
            logger.debug("step %d: current edge removed, replan deferred", self.step_count)
            self.plan = self.plan[: self.cursor + 2]
            return
        ctx = CriterionContext(self.params.criterion, self.remaining)
        t0 = time.perf_counter()
        result = self.planner(self.graph.graph, start, self.remaining, ctx)
        self.plan_time_total += time.perf_counter() - t0
        check_plan(result, start, self.remaining)
        self.n_plans += 1
        self.paths_expanded += result.paths_expanded
        self.planner_name = result.planner
        self.plan = tuple(int(v) for v in result.best_path.vertices)
        self.cursor = 0
        record = {
            "type": "plan",
            "step": self.step_count,
            "start": start,
            "path": list(self.plan),
            "cost": float(result.best_path.cost),
            "gain": float(result.best_path.gain),
            "n_vertices": sum(1 for _ in self.graph.graph.vertices()),
            "n_clusters": self.graph.n_clusters,
        }
        if self.task == Task.POINTS:
            positions = [self.graph.position(v) for v in self.plan]
            record["point_gain"] = path_gain_points(
                positions, self.world, l_col=self.params.l_col
            )
        self.records.append(record)
        logger.debug(
            "step %d: plan of %d vertices from %d, %.1f s left",
            self.step_count,
            len(self.plan),
            start,
            self.remaining,
        )
        if len(self.plan) == 1:
            self.done = True
            return
        self._begin_edge()

    def _begin_edge(self) -> None:
        u, v = self.plan[self.cursor], self.plan[self.cursor + 1]
        if self.edge == (u, v) and self.schedule:
            # The plan continues along the edge the robot was joined on.
            return
        route = self.graph.edge_waypoints(u, v)
        self.schedule = edge_schedule(
            self.robot.pose, route, self.graph.heading(v), self.motion
        )
        self.edge = (u, v)
        self.edge_steps = len(self.schedule)

    def _realize(self, n_new: int, n_occupied: int) -> float:
        if self.task == Task.POINTS:
            return self.world.collect_near(self.robot.position, self.params.l_col)
        if self.task == Task.EXPLORATION:
            return float(n_new)
        return float(n_occupied)

    def step(self) -> None:
        """Advance the episode by one control step."""
        if self.done:
            return
        if self.remaining < self.motion.dt - 1e-9 or not self.schedule:
            self.done = True
            return
        pose = self.schedule.pop(0)
        if not self._clear(pose[:2]):
            field_ = self.world.truth_clearance(self.robot.radius)
            clearance = float(field_.distance([pose[:2]])[0]) - self.robot.radius
            raise SimulationError(
                Errors.E070.format(
                    x=pose[0], y=pose[1], step=self.step_count + 1, clearance=clearance
                )
            )
        self.robot.pose = pose
        self.step_count += 1
        seen = sense(self.world, pose, self.sensor)
        realized = self._realize(seen.n_new_cells, seen.n_new_occupied)
        self.objective += realized
        arrived = not self.schedule
        at_goal = False
        if arrived:
            self.cursor += 1
            self.vertex = self.plan[self.cursor]
            self.edge = None
            at_goal = self.cursor == len(self.plan) - 1
        if at_goal:
            due = True
        elif self.strategy == SimStrategy.EVERY_NODE:
            due = arrived
        elif self.strategy == SimStrategy.PERIODIC:
            due = self.step_count % self.params.replan_period_steps == 0
        else:
            due = False
        can_plan = self.remaining >= self.motion.dt - 1e-9
        self.records.append(
            {
                "type": "step",
                "step": self.step_count,
                "time": self.time,
                "x": pose[0],
                "y": pose[1],
                "yaw": pose[2],
                "vertex": self.vertex if arrived else None,
                "realized": realized,
                "objective": self.objective,
                "unknown": self.world.n_unknown,
                "replanned": bool(due and can_plan),
            }
        )
        if due and can_plan:
            self._replan()
        elif arrived and not at_goal:
            self._begin_edge()

    def result(self) -> SimResult:
        end = {
            "type": "end",
            "objective": self.objective,
            "time": self.time,
            "n_steps": self.step_count,
            "n_plans": self.n_plans,
            "paths_expanded": self.paths_expanded,
            "unknown": self.world.n_unknown,
        }
        return SimResult(
            task=self.task.value,
            objective=self.objective,
            time_used=self.time,
            n_steps=self.step_count,
            n_plans=self.n_plans,
            paths_expanded=self.paths_expanded,
            plan_time_total=self.plan_time_total,
            planner=self.planner_name,
            records=self.records + [end],
        )


def step_episode(sim: Simulation) -> Simulation:
    """Advance `sim` by one control step and return it."""
    sim.step()
    return sim


def run_simulation(
    world: World2D, planner: Planner, params: SimParams = SimParams(), seed: int = 0
) -> SimResult:
    """Run one episode until the budget is spent or no plan leaves the
    robot's vertex.
    """
    sim = Simulation(world, planner, params, seed)
    while not sim.done:
        sim.step()
    logger.debug(
        "%s episode: objective %.6g after %.1f s, %d plans",
        sim.task.value,
        sim.objective,
        sim.time,
        sim.n_plans,
    )
    return sim.result()
