from .params import AnnulusParams, MotionModel, CostMetric, wrap_angle, nearest_yaw
from .clearance import ClearanceField, collision_free_edge
from .index import SpatialIndex
from .annulus import AnnulusGraph, NodeCluster, GraphMethod, pull_in, sample_free
from .annulus import add_cluster, rrag_expand, rrat_expand, rrat_star_expand, expand
from .fls import fls, polyline_length
from .update import insert_intermediate, remove_intermediate, attach_root
from .update import advance_root, revalidate_edges, graph_update

__all__ = [
    "AnnulusParams",
    "MotionModel",
    "CostMetric",
    "wrap_angle",
    "nearest_yaw",
    "ClearanceField",
    "collision_free_edge",
    "SpatialIndex",
    "AnnulusGraph",
    "NodeCluster",
    "GraphMethod",
    "pull_in",
    "sample_free",
    "add_cluster",
    "rrag_expand",
    "rrat_expand",
    "rrat_star_expand",
    "expand",
    "fls",
    "polyline_length",
    "insert_intermediate",
    "remove_intermediate",
    "attach_root",
    "advance_root",
    "revalidate_edges",
    "graph_update",
]
