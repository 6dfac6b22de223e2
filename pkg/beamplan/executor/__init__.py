from .environment import Environment, KnownGraphEnvironment
from .episode import ReplanStrategy, TraceStep, EpisodeResult, run_episode
from .episode import get_strategy, check_combination, episode_summary, first_plan
from .trace import trace_header, trace_records, trace_lines, write_trace
from .trace import read_trace, read_trace_lines

__all__ = [
    "Environment",
    "KnownGraphEnvironment",
    "ReplanStrategy",
    "TraceStep",
    "EpisodeResult",
    "run_episode",
    "get_strategy",
    "check_combination",
    "episode_summary",
    "first_plan",
    "trace_header",
    "trace_records",
    "trace_lines",
    "write_trace",
    "read_trace",
    "read_trace_lines",
]
