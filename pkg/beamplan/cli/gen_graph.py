from typing import Any, Dict, Optional
from dataclasses import asdict
from pathlib import Path

import srsly
from wasabi import msg

from ..envs import GridGraphSpec, generate_grid
from ..errors import PlanningError
from ..graph import graph_stats
from ._util import Arg, Opt, app, fail, set_verbose


@app.command("gen-graph")
def gen_graph_cli(
    # fmt: off
    output_path: Path = Arg(..., help="Output file for the graph JSON", dir_okay=False),
    spec_path: Optional[Path] = Opt(None, "--spec", "-s", help="JSON file with the grid spec", exists=True, dir_okay=False),
    extent: Optional[float] = Opt(None, "--extent", help="Side length of the area in meters"),
    mode: Optional[str] = Opt(None, "--mode", "-m", help="Gain mode: scattered or clustered"),
    seed: Optional[int] = Opt(None, "--seed", help="Seed of the gain draws"),
    cluster_count: Optional[int] = Opt(None, "--cluster-count", help="Number of gain clusters"),
    spacing: Optional[float] = Opt(None, "--spacing", help="Lattice spacing in meters"),
    connectivity: Optional[int] = Opt(None, "--connectivity", help="Lattice connectivity, 4 or 8"),
    verbose: bool = Opt(False, "--verbose", "-V", help="Log debug information"),
    # fmt: on
):
    """
    Generate a synthetic lattice benchmark graph and write it as JSON. The
    spec can come from a JSON file, from the flags, or both, the flags
    taking precedence. Running the same command twice writes the same file.
    """
    set_verbose(verbose)
    spec: Dict[str, Any] = dict(srsly.read_json(spec_path)) if spec_path else {}
    flags = dict(
        extent=extent,
        gain_mode=mode,
        seed=seed,
        cluster_count=cluster_count,
        spacing=spacing,
        connectivity=connectivity,
    )
    spec.update({key: value for key, value in flags.items() if value is not None})
    try:
        gen_graph(output_path, GridGraphSpec(**spec))
    except (PlanningError, TypeError) as e:
        fail(e)


def gen_graph(output_path: Path, spec: GridGraphSpec) -> None:
    graph = generate_grid(spec)
    output_path.parent.mkdir(parents=True, exist_ok=True)
    graph.to_disk(output_path)
    stats = graph_stats(graph)
    msg.good(f"Saved graph to {output_path}")
    data = [(key, value) for key, value in asdict(spec).items()]
    data += [
        ("vertices", stats.n_vertices),
        ("edges", stats.n_edges),
        ("max out-degree", stats.max_out_degree),
        ("components", stats.n_components),
    ]
    msg.table(data, header=("Setting", "Value"), divider=True)
