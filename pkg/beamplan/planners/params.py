from typing import Callable, Optional
from dataclasses import dataclass

from ..errors import Errors, DomainError, InvariantViolation
from ..graph import Path, PlanGraph


@dataclass(frozen=True)
class BeamParams:
    beam_width: int = 1
    search_depth: int = 100

    def __post_init__(self):
        if self.beam_width < 1 or self.search_depth < 1:
            raise DomainError(
                Errors.E030.format(
                    beam_width=self.beam_width, search_depth=self.search_depth
                )
            )


@dataclass(frozen=True)
class TspParams:
    alpha: float = 0.5

    def __post_init__(self):
        if not (0.0 <= self.alpha <= 1.0):
            raise DomainError(Errors.E031.format(alpha=self.alpha))


@dataclass
class PlanResult:
    """The outcome of one planning call.

    best_path (Path): The selected path, starting at the start vertex.
    paths_expanded (int): Number of candidate paths the planner constructed.
    wall_time (float): Planning time in seconds.
    quality (float): Quality of best_path under the criterion used, or its
        gain for planners without a criterion.
    planner (str): Name of the planner that produced the result.
    """

    best_path: Path
    paths_expanded: int
    wall_time: float
    quality: float
    planner: str = ""


Planner = Callable[..., PlanResult]


def check_plan(
    result: PlanResult, start: int, budget: float, *, tol: float = 1e-9
) -> None:
    """Raise InvariantViolation unless the plan starts at `start`, fits the
    budget and traverses no directed edge twice.
    """
    path = result.best_path
    problem: Optional[str] = None
    if path.start != start:
        problem = f"starts at {path.start} instead of {start}"
    elif path.cost > budget + tol:
        problem = f"costs {path.cost} over a budget of {budget}"
    elif not path.is_trail():
        problem = "traverses a directed edge twice"
    if problem is not None:
        raise InvariantViolation(Errors.E033.format(planner=result.planner, problem=problem))


def bare_path(graph: PlanGraph, start: int) -> Path:
    return Path.start_at(graph, start)
