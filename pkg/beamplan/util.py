from typing import Any, Dict, Iterable, List, Optional, Union
import logging
from pathlib import Path

import catalogue
import confection
import numpy
import srsly
from confection import Config

from .errors import Errors, ConfigError


logger = logging.getLogger("beamplan")


class registry(confection.registry):
    """Function registries for every pluggable part of beamplan. Entries
    can be referenced from config files, e.g. `@planners = "nbs"`, and
    third-party packages can add entries through the entry-point groups
    `beamplan_planners`, `beamplan_criteria` and so on.
    """

    planners = catalogue.create("beamplan", "planners", entry_points=True)
    criteria = catalogue.create("beamplan", "criteria", entry_points=True)
    graph_generators = catalogue.create(
        "beamplan", "graph_generators", entry_points=True
    )
    graph_builders = catalogue.create("beamplan", "graph_builders", entry_points=True)
    gain_functions = catalogue.create("beamplan", "gain_functions", entry_points=True)
    worlds = catalogue.create("beamplan", "worlds", entry_points=True)


def load_config(
    path: Union[str, Path],
    overrides: Optional[Dict[str, Any]] = None,
    *,
    interpolate: bool = True,
) -> Config:
    """Load a config from a .cfg or .json file.

    path (Union[str, Path]): The config file.
    overrides (Optional[Dict[str, Any]]): Dotted-key overrides, e.g.
        {"perception.radius": 5.0}.
    interpolate (bool): Whether to substitute ${section.key} variables.
    RETURNS (Config): The loaded config.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(Errors.E080.format(path=path))
    overrides = dict(overrides or {})
    if path.suffix == ".json":
        text = Config(srsly.read_json(path)).to_str()
        return Config().from_str(text, overrides=overrides, interpolate=interpolate)
    return Config().from_disk(path, overrides=overrides, interpolate=interpolate)


def load_config_from_str(
    text: str, overrides: Optional[Dict[str, Any]] = None, *, interpolate: bool = True
) -> Config:
    return Config().from_str(text, overrides=dict(overrides or {}), interpolate=interpolate)


def parse_config_overrides(args: List[str]) -> Dict[str, Any]:
    """Parse extra command-line arguments of the form `--section.key value`
    or `--section.key=value` into a dict of dotted-key overrides. Values are
    decoded as JSON where possible and kept as strings otherwise.

    args (List[str]): The extra arguments.
    RETURNS (Dict[str, Any]): The parsed overrides.
    """
    result = {}
    args = list(args)
    while args:
        opt = args.pop(0)
        if not opt.startswith("--") or "." not in opt:
            raise ConfigError(Errors.E082.format(key=opt))
        opt = opt[2:]
        if "=" in opt:
            opt, value = opt.split("=", 1)
        elif args and not args[0].startswith("--"):
            value = args.pop(0)
        else:
            value = "true"
        result[opt.replace("-", "_")] = _parse_override(value)
    return result


def _parse_override(value: Any) -> Any:
    if not isinstance(value, str):
        return value
    try:
        return srsly.json_loads(value)
    except ValueError:
        return str(value)


def seed_sequence(seed: int, *keys: int) -> numpy.random.SeedSequence:
    """Child seed sequence for the stream identified by `keys`. The same
    (seed, keys) pair always yields the same stream, independent of the
    order in which streams are requested.
    """
    return numpy.random.SeedSequence(entropy=seed, spawn_key=tuple(keys))


def make_rng(seed: int, *keys: int) -> numpy.random.Generator:
    return numpy.random.Generator(numpy.random.PCG64(seed_sequence(seed, *keys)))


def ensure_list(value: Union[Any, Iterable[Any]]) -> List[Any]:
    if isinstance(value, (list, tuple)):
        return list(value)
    return [value]


def derive_seed(seed: int, *keys: int) -> int:
    """A 32-bit seed for the stream identified by `keys` under `seed`."""
    return int(seed_sequence(seed, *keys).generate_state(1)[0])
