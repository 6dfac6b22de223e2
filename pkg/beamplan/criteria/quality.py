from typing import Callable, FrozenSet, Iterable, List, Optional, Sequence, Union
from dataclasses import dataclass, field
from enum import Enum

import catalogue
import numpy

from ..errors import Errors, ConfigError, DomainError
from ..graph import Path, PlanGraph
from ..util import registry


ArrayLike = Union[float, numpy.ndarray]
QualityFunction = Callable[[ArrayLike, ArrayLike, ArrayLike, float], numpy.ndarray]


class Criterion(str, Enum):
    PATH_GAIN = "gain"
    PATH_RATIO = "ratio"
    EXPECTED_GAIN = "expected_gain"


@dataclass(frozen=True)
class CriterionContext:
    """Everything needed to turn a path into a scalar quality.

    criterion (str): Name of a function in `registry.criteria`.
    budget (float): The cost budget C, strictly positive.
    frontier (Optional[FrozenSet[int]]): Frontier vertices. If None, the
        frontier flags stored on the graph are used.
    """

    criterion: str
    budget: float
    frontier: Optional[FrozenSet[int]] = None
    _func: QualityFunction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        name = self.criterion.value if isinstance(self.criterion, Criterion) else self.criterion
        object.__setattr__(self, "criterion", str(name))
        if not (self.budget > 0.0):
            raise DomainError(Errors.E022.format(budget=self.budget))
        if self.frontier is not None:
            object.__setattr__(self, "frontier", frozenset(int(v) for v in self.frontier))
        object.__setattr__(self, "_func", get_criterion(self.criterion))

    def with_budget(self, budget: float) -> "CriterionContext":
        return CriterionContext(self.criterion, budget, self.frontier)

    def is_frontier(self, graph: PlanGraph, v: int) -> bool:
        if self.frontier is None:
            return graph.is_frontier(v)
        return v in self.frontier

    def frontier_mask(self, graph: PlanGraph) -> numpy.ndarray:
        if self.frontier is None:
            return graph.frontier_flags
        mask = numpy.zeros(graph.n_vertices, dtype=bool)
        members = [v for v in self.frontier if 0 <= v < graph.n_vertices]
        mask[members] = True
        return mask

    def evaluate(self, gain: ArrayLike, cost: ArrayLike, frontier: ArrayLike) -> numpy.ndarray:
        """Vectorized quality over parallel arrays of path gains, costs and
        terminal-vertex frontier flags.
        """
        return self._func(gain, cost, frontier, self.budget)


def get_criterion(name: str) -> QualityFunction:
    try:
        return registry.criteria.get(name)
    except catalogue.RegistryError:
        available = sorted(registry.criteria.get_all())
        raise ConfigError(Errors.E023.format(name=name, available=available)) from None


def _ratio(gain: ArrayLike, cost: ArrayLike) -> numpy.ndarray:
    gain = numpy.asarray(gain, dtype="float64")
    cost = numpy.asarray(cost, dtype="float64")
    with numpy.errstate(divide="ignore", invalid="ignore"):
        zero_cost = numpy.where(gain > 0.0, numpy.inf, 0.0)
        return numpy.where(cost > 0.0, gain / cost, zero_cost)


@registry.criteria("gain")
def path_gain_quality(gain, cost, frontier, budget) -> numpy.ndarray:
    return numpy.asarray(gain, dtype="float64")


@registry.criteria("ratio")
def path_ratio_quality(gain, cost, frontier, budget) -> numpy.ndarray:
    return _ratio(gain, cost)


@registry.criteria("expected_gain")
def expected_gain_quality(gain, cost, frontier, budget) -> numpy.ndarray:
    """A frontier path extrapolates its own ratio over the whole budget;
    any other path is worth its gain.
    """
    extrapolated = _ratio(gain, cost) * budget
    gain = numpy.asarray(gain, dtype="float64")
    return numpy.where(numpy.asarray(frontier, dtype=bool), extrapolated, gain)


def quality(path: Path, ctx: CriterionContext) -> float:
    """Scalar quality of a path. A path is a frontier path iff its last
    vertex is a frontier vertex.
    """
    frontier = ctx.is_frontier(path.graph, path.last)
    return float(ctx.evaluate(path.gain, path.cost, frontier))


def argmax_equivalence_check(
    candidates: Iterable[Path], budget: float, tol: float = 1e-9
) -> bool:
    """Check that the paths maximizing r(p)·C are exactly the paths
    maximizing g(p) + r*·(C - c(p)), where r* is the best ratio among the
    candidates. Ties are judged in ratio units: a gap in either objective
    counts as a tie when it is within `tol` of a ratio difference.

    candidates (Iterable[Path]): Paths with strictly positive cost.
    budget (float): The budget C.
    tol (float): Ratio tolerance for ties.
    RETURNS (bool): Whether the two maximizer sets coincide.
    """
    paths = list(candidates)
    if not paths:
        raise DomainError(Errors.E020)
    for i, path in enumerate(paths):
        if not (path.cost > 0.0):
            raise DomainError(Errors.E021.format(index=i))
    gains = numpy.asarray([p.gain for p in paths], dtype="float64")
    costs = numpy.asarray([p.cost for p in paths], dtype="float64")
    ratios = gains / costs
    best_ratio = ratios.max()
    extrapolated = ratios * budget
    remaining = gains + best_ratio * (budget - costs)
    first = (extrapolated.max() - extrapolated) <= tol * budget
    second = (remaining.max() - remaining) <= tol * costs
    return bool(numpy.array_equal(first, second))


def expected_gain_max_ratio(paths: Sequence[Path], ctx: CriterionContext) -> List[float]:
    """Expected gain in the form g(p) + 1_F(p)·r*_F·(C - c(p)), with r*_F the
    best ratio among the frontier paths of the set.
    """
    if not paths:
        raise DomainError(Errors.E020)
    frontier = [ctx.is_frontier(p.graph, p.last) for p in paths]
    ratios = [float(_ratio(p.gain, p.cost)) for p, f in zip(paths, frontier) if f]
    best = max(ratios) if ratios else 0.0
    return [
        p.gain + (best * (ctx.budget - p.cost) if f else 0.0)
        for p, f in zip(paths, frontier)
    ]
