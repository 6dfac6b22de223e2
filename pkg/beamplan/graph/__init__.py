from .plan_graph import PlanGraph, GraphArrays, GraphStats, graph_stats
from .plan_graph import component_labels
from .path import Path, Preference, path_cost, path_gain, path_ratio
from .path import compare_preference, preference_key, reduce_to_trail

__all__ = [
    "PlanGraph",
    "GraphArrays",
    "GraphStats",
    "graph_stats",
    "component_labels",
    "Path",
    "Preference",
    "path_cost",
    "path_gain",
    "path_ratio",
    "compare_preference",
    "preference_key",
    "reduce_to_trail",
]
