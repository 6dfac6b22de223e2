from ..criteria import CriterionContext
from ..graph import PlanGraph
from ..util import registry
from .beam_search import dbs, nbs
from .oracle import MAX_ORACLE_EDGES, oracle_trails
from .params import BeamParams, Planner, PlanResult, TspParams
from .spt import spt_plan
from .tsp import tsp_plan


@registry.planners("nbs")
def make_nbs_planner(beam_width: int = 1, search_depth: int = 100) -> Planner:
    params = BeamParams(beam_width, search_depth)

    def nbs_planner(
        graph: PlanGraph, start: int, budget: float, ctx: CriterionContext
    ) -> PlanResult:
        return nbs(graph, start, budget, params, ctx)

    nbs_planner.params = params
    return nbs_planner


@registry.planners("dbs")
def make_dbs_planner(beam_width: int = 100, search_depth: int = 100) -> Planner:
    params = BeamParams(beam_width, search_depth)

    def dbs_planner(
        graph: PlanGraph, start: int, budget: float, ctx: CriterionContext
    ) -> PlanResult:
        return dbs(graph, start, budget, params, ctx)

    dbs_planner.params = params
    return dbs_planner


@registry.planners("spt")
def make_spt_planner(alpha: float = 1.0) -> Planner:
    params = TspParams(alpha)

    def spt_planner(
        graph: PlanGraph, start: int, budget: float, ctx: CriterionContext
    ) -> PlanResult:
        return spt_plan(graph, start, budget, params.alpha, ctx)

    spt_planner.params = params
    return spt_planner


@registry.planners("tsp")
def make_tsp_planner(alpha: float = 0.5) -> Planner:
    params = TspParams(alpha)

    def tsp_planner(
        graph: PlanGraph, start: int, budget: float, ctx: CriterionContext
    ) -> PlanResult:
        return tsp_plan(graph, start, budget, params, frontier=ctx.frontier_mask(graph))

    tsp_planner.params = params
    return tsp_planner


@registry.planners("oracle")
def make_oracle_planner(max_edges: int = MAX_ORACLE_EDGES) -> Planner:
    def oracle_planner(
        graph: PlanGraph, start: int, budget: float, ctx: CriterionContext
    ) -> PlanResult:
        return oracle_trails(graph, start, budget, ctx, max_edges=max_edges)

    return oracle_planner
