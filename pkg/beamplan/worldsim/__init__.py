from .world import World2D, CellState, CollectPoint, PGM_VALUES, points_of
from .sensor import SensorModel2D, SenseResult, sense, cast_rays, visible_cells
from .gains import PointCollectionGain, VolumetricGain, SurfaceFrontierGain
from .gains import FovStats, fov_stats, node_gain, path_gain_points
from .gains import FrontierHistory, classify_frontier
from .robot import Robot2D, edge_schedule, rotate_schedule
from .templates import make_rooms_world, make_l_corridor_world, l_corridor_layout
from .simulation import Task, SimStrategy, SimParams, SimResult, Simulation
from .simulation import make_task_gain, run_simulation, step_episode
from .io import write_pgm, read_pgm, write_grid_csv, write_world, read_world
from .io import SIM_TRACE_KIND, sim_trace_lines, write_sim_trace, read_sim_trace

__all__ = [
    "World2D",
    "CellState",
    "CollectPoint",
    "PGM_VALUES",
    "points_of",
    "SensorModel2D",
    "SenseResult",
    "sense",
    "cast_rays",
    "visible_cells",
    "PointCollectionGain",
    "VolumetricGain",
    "SurfaceFrontierGain",
    "FovStats",
    "fov_stats",
    "node_gain",
    "path_gain_points",
    "FrontierHistory",
    "classify_frontier",
    "Robot2D",
    "edge_schedule",
    "rotate_schedule",
    "make_rooms_world",
    "make_l_corridor_world",
    "l_corridor_layout",
    "Task",
    "SimStrategy",
    "SimParams",
    "SimResult",
    "Simulation",
    "make_task_gain",
    "run_simulation",
    "step_episode",
    "write_pgm",
    "read_pgm",
    "write_grid_csv",
    "write_world",
    "read_world",
    "SIM_TRACE_KIND",
    "sim_trace_lines",
    "write_sim_trace",
    "read_sim_trace",
]
