from typing import Any, Dict, List, Optional, Tuple
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

from ..envs import OnlinePerceptionEnvironment
from ..errors import Warnings, PlanningError
from ..executor import check_combination, episode_summary, run_episode
from ..executor import trace_header, write_trace
from ..graph import PlanGraph
from ..util import derive_seed, ensure_list, logger
from ._util import Opt, app, cli_overrides, ensure_dir, entry_label, exit_status
from ._util import fail, load_cli_config, planner_entries, require_section
from ._util import resolve_entry, resolve_planner, set_verbose


EPISODE_COLUMNS = [
    "cell",
    "scenario",
    "planner",
    "params",
    "criterion",
    "strategy",
    "budget",
    "seed",
    "status",
    "final_gain",
    "cost_used",
    "plan_time_total",
    "n_plans",
    "n_steps",
    "paths_expanded",
]
GROUP_COLUMNS = ["scenario", "planner", "params", "criterion", "strategy", "budget"]
METRICS = ["final_gain", "plan_time_total"]


@dataclass(frozen=True)
class BenchCell:
    """One episode of the benchmark grid.

    index (int): Position in the sorted grid, also keys the cell's seed.
    planner (str): Label of the planner entry in [grid.planners].
    criterion (str): Name of the selection criterion.
    strategy (str): Name of the replanning strategy.
    budget (float): Episode budget.
    seed (int): Instance seed from [grid.seeds].
    """

    index: int
    planner: str
    criterion: str
    strategy: str
    budget: float
    seed: int

    @property
    def name(self) -> str:
        return f"cell-{self.index:04d}"


def bench_cells(config: Dict[str, Any], planners: Dict[str, Any]) -> List[BenchCell]:
    grid = require_section(config, "grid")
    product = itertools.product(
        sorted(planners),
        ensure_list(grid["criteria"]),
        ensure_list(grid["strategies"]),
        [float(b) for b in ensure_list(grid["budgets"])],
        [int(s) for s in ensure_list(grid["seeds"])],
    )
    return [BenchCell(i, *values) for i, values in enumerate(product)]


def check_cells(config: Dict[str, Any], cells: List[BenchCell]) -> None:
    """Reject invalid criterion and strategy combinations before any cell
    runs.
    """
    online = bool(require_section(config, "perception").get("online", False))
    for criterion, strategy in sorted({(c.criterion, c.strategy) for c in cells}):
        check_combination(criterion, strategy, online)


def scenario_label(scenario: Dict[str, Any]) -> str:
    name, params = entry_label(scenario.get("@graph_generators", ""), scenario)
    return f"{name} {params}"


def cell_config(
    config: Dict[str, Any], cell: BenchCell, entry: Dict[str, Any]
) -> Dict[str, Any]:
    """The self-contained config of one cell, stored in its trace header so
    `replay` can rerun the episode.
    """
    root_seed = int(require_section(config, "system").get("seed", 0))
    scenario = dict(require_section(config, "scenario"))
    scenario["seed"] = derive_seed(root_seed, cell.seed)
    return {
        "kind": "bench",
        "scenario": scenario,
        "perception": dict(require_section(config, "perception")),
        "planner": dict(entry),
        "criterion": cell.criterion,
        "strategy": cell.strategy,
        "budget": cell.budget,
        "start": 0,
    }


def build_environment(cell_cfg: Dict[str, Any]) -> Tuple[PlanGraph, Any]:
    graph = resolve_entry(cell_cfg["scenario"])
    perception = cell_cfg["perception"]
    if perception.get("online", False):
        environment = OnlinePerceptionEnvironment(
            graph,
            radius=float(perception.get("radius", 5.0)),
            frontier_fraction=float(perception.get("frontier_fraction", 0.8)),
        )
        return graph, environment
    return graph, graph


def run_cell_config(cell_cfg: Dict[str, Any]):
    """Run the episode a cell config describes."""
    _, environment = build_environment(cell_cfg)
    return run_episode(
        environment,
        cell_cfg["start"],
        cell_cfg["budget"],
        resolve_planner(cell_cfg["planner"]),
        criterion=cell_cfg["criterion"],
        strategy=cell_cfg["strategy"],
    )


@app.command(
    "bench", context_settings={"allow_extra_args": True, "ignore_unknown_options": True}
)
def bench_cli(
    # fmt: off
    ctx: typer.Context,  # This is only used to read additional arguments
    config_path: Optional[Path] = Opt(None, "--config", "-c", help="Path to a .cfg or .json config, the shipped default if omitted", exists=True, dir_okay=False),
    output_dir: Optional[Path] = Opt(None, "--output", "-o", help="Output directory, overrides [output.directory]"),
    planner: Optional[str] = Opt(None, "--planner", "-p", help="Run a single planner instead of [grid.planners]"),
    beam: Optional[int] = Opt(None, "--beam", help="Beam width of the --planner entry"),
    alpha: Optional[float] = Opt(None, "--alpha", help="Gain threshold of the --planner entry"),
    n_workers: Optional[int] = Opt(None, "--n-workers", "-j", help="Worker threads, overrides [system.n_workers]"),
    verbose: bool = Opt(False, "--verbose", "-V", help="Log debug information"),
    # fmt: on
):
    """
    Run a benchmark grid of planners, criteria, strategies, budgets and seeds
    on synthetic graphs. Writes one row per episode to episodes.csv, the
    mean and std over seeds to summary.csv, and a JSONL trace per episode.
    Extra settings can be overridden on the command line, e.g.
    `--perception.online true`. Exits with 1 if any cell failed.
    """
    set_verbose(verbose)
    flags = {
        "output.directory": str(output_dir) if output_dir else None,
        "system.n_workers": n_workers,
    }
    overrides = cli_overrides(ctx, **flags)
    try:
        config = load_cli_config(config_path, "bench", overrides)
        entries = planner_entries(config, planner, beam, alpha)
        n_failed = bench(config, entries)
    except PlanningError as e:
        fail(e)
    exit_status(n_failed)


def bench(config: Dict[str, Any], entries: Dict[str, Dict[str, Any]]) -> int:
    """Run every cell of the grid and write the outputs.

    config (Dict[str, Any]): The bench config.
    entries (Dict[str, Dict[str, Any]]): Planner entries keyed by label.
    RETURNS (int): The number of failed cells.
    """
    cells = bench_cells(config, entries)
    check_cells(config, cells)
    for entry in entries.values():
        resolve_planner(entry)
    output_dir = ensure_dir(require_section(config, "output")["directory"])
    traces_dir = ensure_dir(output_dir / "traces")
    n_workers = max(1, int(require_section(config, "system").get("n_workers", 1)))
    scenario = scenario_label(require_section(config, "scenario"))
    msg.info(f"Running {len(cells)} cell(s) on {n_workers} worker(s)")
    rows: Dict[int, Dict[str, Any]] = {}
    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        futures = {}
        for cell in cells:
            entry = entries[cell.planner]
            cell_cfg = cell_config(config, cell, entry)
            futures[pool.submit(run_cell_config, cell_cfg)] = (cell, cell_cfg)
        for future in tqdm(as_completed(futures), total=len(futures), leave=False):
            cell, cell_cfg = futures[future]
            _, params = entry_label(cell.planner, entries[cell.planner])
            fields = dict(
                cell=cell.index,
                scenario=scenario,
                planner=cell.planner,
                params=params,
                criterion=cell.criterion,
                strategy=cell.strategy,
                budget=cell.budget,
                seed=cell.seed,
            )
            try:
                result = future.result()
            except PlanningError as e:
                warnings.warn(Warnings.W002.format(cell=cell.name, error=e))
                rows[cell.index] = dict(fields, status="failed")
                continue
            header = trace_header(cell_cfg, cell.seed, cell=cell.index)
            write_trace(traces_dir / f"{cell.name}.jsonl", header, result)
            row = episode_summary(result, **fields, status="ok")
            row["paths_expanded"] = result.paths_expanded
            rows[cell.index] = row
            logger.debug(
                "%s: %s gain=%.3f", cell.name, cell.planner, result.collected_gain
            )
    episodes = pandas.DataFrame(
        [rows[i] for i in sorted(rows)], columns=EPISODE_COLUMNS
    )
    summary = summarize(episodes)
    episodes.to_csv(output_dir / "episodes.csv", index=False)
    summary.to_csv(output_dir / "summary.csv", index=False)
    srsly.write_json(output_dir / "config.json", dict(config))
    msg.good(f"Saved results to {output_dir}")
    if len(summary):
        table = summary[["planner", "criterion", "strategy", "final_gain_mean"]]
        msg.table(
            [(p, c, s, f"{g:.2f}") for p, c, s, g in table.itertuples(index=False)],
            header=("Planner", "Criterion", "Strategy", "Gain"),
            divider=True,
        )
    return int((episodes["status"] == "failed").sum())


def summarize(episodes: pandas.DataFrame) -> pandas.DataFrame:
    """Mean and std over seeds of final gain and plan time, one row per
    (scenario, planner, params, criterion, strategy, budget).
    """
    done = episodes[episodes["status"] == "ok"]
    if not len(done):
        columns = GROUP_COLUMNS + [f"{m}_{s}" for m in METRICS for s in ("mean", "std")]
        return pandas.DataFrame(columns=columns + ["n_seeds"])
    grouped = done.groupby(GROUP_COLUMNS, sort=True)
    summary = grouped[METRICS].agg(["mean", "std"])
    summary.columns = [f"{metric}_{stat}" for metric, stat in summary.columns]
    summary["n_seeds"] = grouped.size()
    return summary.reset_index()
