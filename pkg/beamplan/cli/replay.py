from typing import List, Optional
from pathlib import Path
import sys
import warnings

import srsly
from wasabi import msg

from ..errors import Errors, Warnings, ConfigError, PlanningError
from ..executor import read_trace_lines, trace_lines
from ..worldsim import SIM_TRACE_KIND, sim_trace_lines
from .bench import run_cell_config as run_bench_cell
from .sim import run_cell_config as run_sim_cell
from ._util import Arg, Opt, app, fail, set_verbose


@app.command("replay")
def replay_cli(
    # fmt: off
    trace_paths: List[Path] = Arg(..., help="JSONL traces written by bench or sim", exists=True, dir_okay=False),
    verbose: bool = Opt(False, "--verbose", "-V", help="Log debug information"),
    # fmt: on
):
    """
    Rerun the episodes stored in one or more traces from the config and seed
    in their header, and check that the new traces match the stored ones
    line for line. Exits with 1 if any replay diverged.
    """
    set_verbose(verbose)
    n_diverged = 0
    for path in trace_paths:
        try:
            line = replay(path)
        except PlanningError as e:
            fail(e)
        if line is None:
            msg.good(f"Replayed {path}")
        else:
            warnings.warn(Warnings.W003.format(path=path, line=line))
            n_diverged += 1
    if n_diverged:
        msg.fail(f"{n_diverged} trace(s) diverged")
        sys.exit(1)


def replay(path: Path) -> Optional[int]:
    """Rerun the episode of a trace.

    path (Path): The trace file.
    RETURNS (Optional[int]): The 1-based number of the first line that
        differs, or None if the rerun reproduces the trace exactly.
    """
    stored = read_trace_lines(path)
    header = srsly.json_loads(stored[0]) if stored else {}
    if header.get("type") != "header" or "config" not in header:
        raise ConfigError(Errors.E083.format(path=path))
    if header.get("kind") == SIM_TRACE_KIND:
        result = run_sim_cell(header["config"])
        lines = sim_trace_lines(header, result)
    else:
        result = run_bench_cell(header["config"])
        lines = trace_lines(header, result)
    for i, (old, new) in enumerate(zip(stored, lines)):
        if old != new:
            return i + 1
    if len(stored) != len(lines):
        return min(len(stored), len(lines)) + 1
    return None
