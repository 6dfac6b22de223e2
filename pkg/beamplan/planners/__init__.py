from .params import BeamParams, TspParams, PlanResult, Planner, check_plan
from .beam_search import dbs, nbs, expansion_count_audit
from .spt import spt_plan, gain_threshold
from .tsp import tsp_plan, nearest_neighbor_tour, two_opt, tour_cost
from .oracle import oracle_trails, oracle_walks, enumerate_trails, enumerate_walks
from .shortest_paths import bellman_ford, floyd_warshall, tree_path, AllPairs
from .builders import make_nbs_planner, make_dbs_planner, make_spt_planner
from .builders import make_tsp_planner, make_oracle_planner

__all__ = [
    "BeamParams",
    "TspParams",
    "PlanResult",
    "Planner",
    "check_plan",
    "dbs",
    "nbs",
    "expansion_count_audit",
    "spt_plan",
    "gain_threshold",
    "tsp_plan",
    "nearest_neighbor_tour",
    "two_opt",
    "tour_cost",
    "oracle_trails",
    "oracle_walks",
    "enumerate_trails",
    "enumerate_walks",
    "bellman_ford",
    "floyd_warshall",
    "tree_path",
    "AllPairs",
    "make_nbs_planner",
    "make_dbs_planner",
    "make_spt_planner",
    "make_tsp_planner",
    "make_oracle_planner",
]
