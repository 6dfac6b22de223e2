from typing import Any, Dict, List, Optional
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
import itertools
from pathlib import Path
import warnings

import pandas
import srsly
import typer
from tqdm import tqdm
from wasabi import msg

from ..errors import Warnings, PlanningError
from ..executor import trace_header
from ..util import derive_seed, ensure_list, logger
from ..worldsim import SimParams, SimResult, run_simulation, write_sim_trace
from ._util import Opt, app, cli_overrides, ensure_dir, entry_label, exit_status
from ._util import fail, load_cli_config, planner_entries, require_section
from ._util import resolve_entry, resolve_planner, set_verbose


EPISODE_COLUMNS = [
    "cell",
    "world",
    "planner",
    "params",
    "task",
    "seed",
    "status",
    "objective",
    "time_used",
    "n_steps",
    "n_plans",
    "paths_expanded",
    "plan_time_total",
]
CURVE_COLUMNS = ["cell", "planner", "params", "task", "seed", "time", "objective"]
GROUP_COLUMNS = ["world", "planner", "params", "task"]


@dataclass(frozen=True)
class SimCell:
    index: int
    planner: str
    seed: int

    @property
    def name(self) -> str:
        return f"sim-{self.index:04d}"


def sim_cells(config: Dict[str, Any], planners: Dict[str, Any]) -> List[SimCell]:
    seeds = [int(s) for s in ensure_list(require_section(config, "grid")["seeds"])]
    product = itertools.product(sorted(planners), seeds)
    return [SimCell(i, *values) for i, values in enumerate(product)]


def cell_config(
    config: Dict[str, Any], cell: SimCell, entry: Dict[str, Any]
) -> Dict[str, Any]:
    """The self-contained config of one simulated episode. The world and the
    episode draw from separate streams under the root seed.
    """
    root_seed = int(require_section(config, "system").get("seed", 0))
    return {
        "kind": "sim",
        "world": dict(require_section(config, "world")),
        "world_seed": derive_seed(root_seed, cell.seed, 0),
        "simulation": dict(require_section(config, "simulation")),
        "planner": dict(entry),
        "seed": derive_seed(root_seed, cell.seed, 1),
    }


def run_cell_config(cell_cfg: Dict[str, Any]) -> SimResult:
    world = resolve_entry(cell_cfg["world"])(cell_cfg["world_seed"])
    params = SimParams(**cell_cfg["simulation"])
    planner = resolve_planner(cell_cfg["planner"])
    return run_simulation(world, planner, params, seed=cell_cfg["seed"])


@app.command(
    "sim", context_settings={"allow_extra_args": True, "ignore_unknown_options": True}
)
def sim_cli(
    # fmt: off
    ctx: typer.Context,  # This is only used to read additional arguments
    config_path: Optional[Path] = Opt(None, "--config", "-c", help="Path to a .cfg or .json config, the shipped default if omitted", exists=True, dir_okay=False),
    output_dir: Optional[Path] = Opt(None, "--output", "-o", help="Output directory, overrides [output.directory]"),
    task: Optional[str] = Opt(None, "--task", "-t", help="Task: points, exploration or surface"),
    budget: Optional[float] = Opt(None, "--budget", "-b", help="Episode budget in simulated seconds"),
    planner: Optional[str] = Opt(None, "--planner", "-p", help="Run a single planner instead of [grid.planners]"),
    beam: Optional[int] = Opt(None, "--beam", help="Beam width of the --planner entry"),
    alpha: Optional[float] = Opt(None, "--alpha", help="Gain threshold of the --planner entry"),
    n_workers: Optional[int] = Opt(None, "--n-workers", "-j", help="Worker threads, overrides [system.n_workers]"),
    verbose: bool = Opt(False, "--verbose", "-V", help="Log debug information"),
    # fmt: on
):
    """
    Run simulated active-perception episodes for every planner and seed.
    Writes one row per episode to episodes.csv, the realized objective
    against simulated time to curves.csv, the mean and std over seeds to
    summary.csv, and a JSONL trace per episode. Exits with 1 if any episode
    failed.
    """
    set_verbose(verbose)
    flags = {
        "output.directory": str(output_dir) if output_dir else None,
        "simulation.task": task,
        "simulation.budget": budget,
        "system.n_workers": n_workers,
    }
    overrides = cli_overrides(ctx, **flags)
    try:
        config = load_cli_config(config_path, "sim", overrides)
        entries = planner_entries(config, planner, beam, alpha)
        n_failed = sim(config, entries)
    except PlanningError as e:
        fail(e)
    exit_status(n_failed)


def sim(config: Dict[str, Any], entries: Dict[str, Dict[str, Any]]) -> int:
    """Run every episode and write the outputs.

    config (Dict[str, Any]): The sim config.
    entries (Dict[str, Dict[str, Any]]): Planner entries keyed by label.
    RETURNS (int): The number of failed episodes.
    """
    cells = sim_cells(config, entries)
    params = SimParams(**require_section(config, "simulation"))
    for entry in entries.values():
        resolve_planner(entry)
    output_dir = ensure_dir(require_section(config, "output")["directory"])
    traces_dir = ensure_dir(output_dir / "traces")
    n_workers = max(1, int(require_section(config, "system").get("n_workers", 1)))
    world = require_section(config, "world").get("@worlds", "")
    msg.info(f"Running {len(cells)} episode(s) of task '{params.task}'")
    rows: Dict[int, Dict[str, Any]] = {}
    curves: Dict[int, List[Dict[str, Any]]] = {}
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = {}
        for cell in cells:
            cell_cfg = cell_config(config, cell, entries[cell.planner])
            futures[pool.submit(run_cell_config, cell_cfg)] = (cell, cell_cfg)
        for future in tqdm(as_completed(futures), total=len(futures), leave=False):
            cell, cell_cfg = futures[future]
            _, planner_params = entry_label(cell.planner, entries[cell.planner])
            fields = dict(
                cell=cell.index,
                planner=cell.planner,
                params=planner_params,
                task=params.task,
                seed=cell.seed,
            )
            try:
                result = future.result()
            except PlanningError as e:
                warnings.warn(Warnings.W002.format(cell=cell.name, error=e))
                rows[cell.index] = dict(fields, world=world, status="failed")
                continue
            header = trace_header(cell_cfg, cell.seed, cell=cell.index)
            write_sim_trace(traces_dir / f"{cell.name}.jsonl", header, result)
            rows[cell.index] = dict(
                fields,
                world=world,
                status="ok",
                objective=result.objective,
                time_used=result.time_used,
                n_steps=result.n_steps,
                n_plans=result.n_plans,
                paths_expanded=result.paths_expanded,
                plan_time_total=result.plan_time_total,
            )
            curves[cell.index] = [
                dict(fields, time=r["time"], objective=r["objective"])
                for r in result.records
                if r["type"] == "step"
            ]
            logger.debug("%s: %s f=%.3f", cell.name, cell.planner, result.objective)
    episodes = pandas.DataFrame(
        [rows[i] for i in sorted(rows)], columns=EPISODE_COLUMNS
    )
    curve = pandas.DataFrame(
        [r for i in sorted(curves) for r in curves[i]], columns=CURVE_COLUMNS
    )
    summary = summarize(episodes)
    episodes.to_csv(output_dir / "episodes.csv", index=False)
    curve.to_csv(output_dir / "curves.csv", index=False)
    summary.to_csv(output_dir / "summary.csv", index=False)
    srsly.write_json(output_dir / "config.json", dict(config))
    msg.good(f"Saved results to {output_dir}")
    if len(summary):
        table = summary[["planner", "params", "objective_mean", "objective_std"]]
        msg.table(
            [
                (p, a, f"{m:.2f}", f"{s:.2f}")
                for p, a, m, s in table.itertuples(index=False)
            ],
            header=("Planner", "Params", "Objective", "Std"),
            divider=True,
        )
    return int((episodes["status"] == "failed").sum())


def summarize(episodes: pandas.DataFrame) -> pandas.DataFrame:
    done = episodes[episodes["status"] == "ok"]
    metrics = ["objective", "plan_time_total"]
    if not len(done):
        columns = [f"{m}_{s}" for m in metrics for s in ("mean", "std")]
        return pandas.DataFrame(columns=GROUP_COLUMNS + columns + ["n_seeds"])
    grouped = done.groupby(GROUP_COLUMNS, sort=True)
    summary = grouped[metrics].agg(["mean", "std"])
    summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
    summary["n_seeds"] = grouped.size()
    return summary.reset_index()
