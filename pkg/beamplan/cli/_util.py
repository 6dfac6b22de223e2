from typing import Any, Dict, Optional, Tuple, Union
import logging
from pathlib import Path
import sys

import catalogue
import srsly
import typer
from confection import Config
from wasabi import msg

from ..errors import Errors, ConfigError, PlanningError
from ..planners import Planner
from ..util import load_config, load_config_from_str, logger, parse_config_overrides
from ..util import registry


COMMAND = "python -m beamplan"
NAME = "beamplan"
HELP = """beamplan command-line interface: generate benchmark graphs, run
planner benchmarks and simulated episodes, replay stored traces and check
the library's properties.
"""
CONFIG_DIR = Path(__file__).parent.parent / "configs"

# Wrappers for Typer's annotations. Initially created to set defaults and to
# keep the names short, but not needed at the moment.
Arg = typer.Argument
Opt = typer.Option

app = typer.Typer(name=NAME, help=HELP, add_completion=False)


def setup_cli() -> None:
    # Ensure that the help messages always display the correct prompt
    command = typer.main.get_command(app)
    command(prog_name=COMMAND)


def set_verbose(verbose: bool) -> None:
    """Send the package's debug records to stderr."""
    if verbose:
        logging.basicConfig(format="%(name)s: %(message)s")
        logger.setLevel(logging.DEBUG)


def default_config(name: str) -> str:
    """The text of a config shipped with the package, e.g. "bench"."""
    return (CONFIG_DIR / f"{name}.cfg").read_text(encoding="utf8")


def load_cli_config(
    path: Optional[Path], default: str, overrides: Dict[str, Any]
) -> Config:
    """Load the config at `path`, or the shipped default when no path is
    given, with the dotted overrides applied.
    """
    if path is None:
        config = load_config_from_str(default_config(default))
    else:
        config = load_config(path)
    for key in overrides:
        node: Any = config
        for part in key.split("."):
            if not isinstance(node, dict) or part not in node:
                raise ConfigError(Errors.E082.format(key=key))
            node = node[part]
    if path is None:
        return load_config_from_str(default_config(default), overrides)
    return load_config(path, overrides)


def cli_overrides(ctx: typer.Context, **flags: Any) -> Dict[str, Any]:
    """Overrides from extra `--section.key value` arguments, plus the named
    flags that were given, keyed by their dotted config path.
    """
    overrides = parse_config_overrides(list(ctx.args))
    overrides.update({key: value for key, value in flags.items() if value is not None})
    return overrides


def entry_label(name: str, entry: Dict[str, Any]) -> Tuple[str, str]:
    """The name and the JSON-encoded parameters of a registry entry."""
    params = {k: v for k, v in entry.items() if not k.startswith("@")}
    return name, srsly.json_dumps(params, sort_keys=True)


def ensure_dir(path: Union[str, Path]) -> Path:
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path


def fail(error: Union[str, PlanningError], exits: int = 1) -> None:
    msg.fail(str(error), exits=exits)


def exit_status(n_failed: int) -> None:
    if n_failed:
        msg.fail(f"{n_failed} cell(s) failed")
        sys.exit(1)
    msg.good("All cells succeeded")


def require_section(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    if name not in config:
        raise ConfigError(Errors.E081.format(section=name))
    return config[name]


def resolve_entry(entry: Dict[str, Any]) -> Any:
    """Build the function a registry entry such as `{"@planners": "nbs",
    "beam_width": 1}` points to.
    """
    return registry.resolve({"entry": dict(entry)})["entry"]


def resolve_planner(entry: Dict[str, Any]) -> Planner:
    name = entry.get("@planners")
    try:
        return resolve_entry(entry)
    except catalogue.RegistryError:
        available = sorted(registry.planners.get_all())
        raise ConfigError(Errors.E084.format(name=name, available=available)) from None


def planner_entries(
    config: Dict[str, Any],
    planner: Optional[str] = None,
    beam: Optional[int] = None,
    alpha: Optional[float] = None,
) -> Dict[str, Dict[str, Any]]:
    """The planner entries of the [grid.planners] section, or a single entry
    built from the --planner, --beam and --alpha flags.
    """
    if planner is None:
        return dict(require_section(config, "grid").get("planners", {}))
    entry: Dict[str, Any] = {"@planners": planner}
    if beam is not None:
        entry["beam_width"] = beam
    if alpha is not None:
        entry["alpha"] = alpha
    return {planner: entry}
