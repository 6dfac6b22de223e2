from .grid import GainMode, GridGraphSpec, generate_grid, make_grid_graph
from .perception import PerceptionState, OnlinePerceptionEnvironment
from .perception import observe, frontier_vertices, reveal_radius

__all__ = [
    "GainMode",
    "GridGraphSpec",
    "generate_grid",
    "make_grid_graph",
    "PerceptionState",
    "OnlinePerceptionEnvironment",
    "observe",
    "frontier_vertices",
    "reveal_radius",
]
