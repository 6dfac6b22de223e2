from .about import __version__
from .util import registry, logger

# Importing the components registers their builders.
from . import criteria, planners, envs, rrag, worldsim  # noqa: F401
from .graph import PlanGraph, Path
from .planners import PlanResult, BeamParams, TspParams

__all__ = [
    "__version__",
    "registry",
    "logger",
    "PlanGraph",
    "Path",
    "PlanResult",
    "BeamParams",
    "TspParams",
]
