from typing import Any, Dict, List, Optional, Tuple, Union
from dataclasses import asdict, dataclass, field
from enum import Enum

import numpy

from ..criteria import Criterion, CriterionContext, get_criterion
from ..errors import Errors, ConfigError, DomainError
from ..graph import PlanGraph
from ..planners import Planner, check_plan
from ..util import logger
from .environment import Environment, KnownGraphEnvironment


class ReplanStrategy(str, Enum):
    NO_REPLAN = "no_replan"
    AT_GOAL = "at_goal"
    EVERY_NODE = "every_node"


def get_strategy(name: Union[str, ReplanStrategy]) -> ReplanStrategy:
    try:
        return ReplanStrategy(name)
    except ValueError:
        available = [s.value for s in ReplanStrategy]
        raise ConfigError(Errors.E042.format(name=name, available=available)) from None


def check_combination(
    criterion: str, strategy: Union[str, ReplanStrategy], online: bool = False
) -> None:
    """Raise ConfigError for a criterion and strategy that cannot be run
    together: the ratio criterion needs replanning, and so does online
    perception.
    """
    strategy = get_strategy(strategy)
    get_criterion(criterion)
    if criterion == Criterion.PATH_RATIO and strategy == ReplanStrategy.NO_REPLAN:
        raise ConfigError(Errors.E040)
    if online and strategy == ReplanStrategy.NO_REPLAN:
        raise ConfigError(Errors.E041)


@dataclass
class TraceStep:
    """One edge traversal of an episode.

    step (int): Index of the traversal, from 0.
    vertex (int): The vertex reached.
    edge_cost (float): Cost of the traversed edge.
    remaining_budget (float): Budget left after the traversal.
    planned_path (Tuple[int, ...]): The plan being followed.
    replanned (bool): Whether that plan was computed right before this step.
    realized_gain (float): Gain collected on arrival.
    collected_gain (float): Gain collected so far, start vertex included.
    """

    step: int
    vertex: int
    edge_cost: float
    remaining_budget: float
    planned_path: Tuple[int, ...]
    replanned: bool
    realized_gain: float
    collected_gain: float

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["planned_path"] = list(self.planned_path)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceStep":
        data = {k: v for k, v in data.items() if k != "type"}
        data["planned_path"] = tuple(data["planned_path"])
        return cls(**data)


@dataclass
class EpisodeResult:
    collected_gain: float
    cost_used: float
    visited: Tuple[int, ...]
    trace: List[TraceStep] = field(default_factory=list)
    budget: float = 0.0
    n_plans: int = 0
    paths_expanded: int = 0
    plan_time_total: float = 0.0
    planner: str = ""

    @property
    def remaining_budget(self) -> float:
        return self.budget - self.cost_used


class _GainLedger:
    # Tracks which gain groups have been collected; a group pays out once.
    def __init__(self, graph: PlanGraph):
        self.groups = graph.group_ids()
        self.gains = graph.gains
        n_groups = int(self.groups.max()) + 1 if self.groups.size else 0
        self.taken = numpy.zeros(n_groups, dtype=bool)

    def collect(self, v: int) -> float:
        g = self.groups[v]
        if self.taken[g]:
            return 0.0
        self.taken[g] = True
        return float(self.gains[v])

    def zeroed(self, graph: PlanGraph) -> PlanGraph:
        return graph.with_gains(numpy.where(self.taken[self.groups], 0.0, graph.gains))


def run_episode(
    environment: Union[PlanGraph, Environment],
    start: int,
    budget: float,
    planner: Planner,
    criterion: str = Criterion.PATH_GAIN.value,
    strategy: Union[str, ReplanStrategy] = ReplanStrategy.EVERY_NODE,
) -> EpisodeResult:
    """Plan and execute until the budget is spent or the planner has nothing
    left to do.

    The start vertex's gain is collected at time zero, so every plan is made
    on a graph where the current vertex is worth nothing. After each arrival
    the environment is updated first (online perception reveals the
    neighbourhood), then the strategy decides whether to replan:
    "no_replan" follows the first plan to its end, "at_goal" replans when
    the plan's last vertex is reached, "every_node" replans after every edge.

    environment (Union[PlanGraph, Environment]): A known graph, or an
        environment such as an online perception wrapper.
    start (int): The start vertex.
    budget (float): The total cost budget C.
    planner (Planner): Callable (graph, start, budget, ctx) -> PlanResult.
    criterion (str): Name of the selection criterion.
    strategy (Union[str, ReplanStrategy]): The replanning strategy.
    RETURNS (EpisodeResult): Collected gain, used cost and the step trace.
    """
    strategy = get_strategy(strategy)
    if isinstance(environment, PlanGraph):
        environment = KnownGraphEnvironment(environment)
    check_combination(criterion, strategy, environment.online)
    if not (budget > 0.0):
        raise DomainError(Errors.E022.format(budget=budget))
    true_graph = environment.true_graph
    if not (0 <= start < true_graph.n_vertices) or not true_graph.is_active(start):
        raise DomainError(Errors.E043.format(start=start))

    environment.reset(start)
    ledger = _GainLedger(true_graph)
    collected = ledger.collect(start)
    result = EpisodeResult(collected, 0.0, (start,), budget=budget)
    visited = [start]
    current = start
    plan: Tuple[int, ...] = ()
    cursor = 0
    need_plan = True
    while True:
        remaining = budget - result.cost_used
        visible = environment.visible_graph()
        if not any(cost <= remaining for _, cost in visible.successors(current)):
            break
        replanned = False
        if need_plan:
            ctx = CriterionContext(criterion, remaining, environment.frontier())
            planned = planner(ledger.zeroed(visible), current, remaining, ctx)
            check_plan(planned, current, remaining)
            result.n_plans += 1
            result.paths_expanded += planned.paths_expanded
            result.plan_time_total += planned.wall_time
            result.planner = planned.planner
            plan = planned.best_path.vertices
            cursor = 0
            replanned = True
            logger.debug(
                "replan at %d with %.6g left: %s (quality %.6g)",
                current, remaining, plan, planned.quality,
            )
            if len(plan) == 1:
                break
        v = plan[cursor + 1]
        edge_cost = true_graph.edge_cost(current, v)
        result.cost_used += edge_cost
        cursor += 1
        current = v
        visited.append(v)
        realized = ledger.collect(v)
        result.collected_gain += realized
        environment.arrive(v)
        result.trace.append(
            TraceStep(
                step=len(result.trace),
                vertex=v,
                edge_cost=edge_cost,
                remaining_budget=budget - result.cost_used,
                planned_path=plan,
                replanned=replanned,
                realized_gain=realized,
                collected_gain=result.collected_gain,
            )
        )
        at_goal = cursor == len(plan) - 1
        if strategy == ReplanStrategy.NO_REPLAN and at_goal:
            break
        need_plan = strategy == ReplanStrategy.EVERY_NODE or at_goal
    result.visited = tuple(visited)
    return result


def episode_summary(result: EpisodeResult, **fields: Any) -> Dict[str, Any]:
    """One summary row: the given identifying fields followed by the
    episode's outcome.
    """
    row: Dict[str, Any] = dict(fields)
    row.update(
        final_gain=result.collected_gain,
        cost_used=result.cost_used,
        plan_time_total=result.plan_time_total,
        n_plans=result.n_plans,
        n_steps=len(result.trace),
    )
    return row


def first_plan(result: EpisodeResult) -> Optional[Tuple[int, ...]]:
    return result.trace[0].planned_path if result.trace else None
