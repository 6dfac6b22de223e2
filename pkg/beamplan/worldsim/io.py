from typing import Any, Dict, List, Tuple, Union
from pathlib import Path

import numpy
import pandas
import srsly

from ..errors import Errors, ConfigError
from .simulation import SimResult
from .world import PGM_VALUES, CellState, World2D


SIM_TRACE_KIND = "simulation"


def occupancy_image(world: World2D) -> numpy.ndarray:
    """The estimate as grey levels, top row first as images are stored."""
    image = numpy.full(world.shape, PGM_VALUES[CellState.UNKNOWN], dtype="uint8")
    image[world.estimate == CellState.FREE] = PGM_VALUES[CellState.FREE]
    image[world.estimate == CellState.OCCUPIED] = PGM_VALUES[CellState.OCCUPIED]
    return image[::-1]


def write_pgm(world: World2D, path: Union[str, Path]) -> None:
    """Write the estimate as a binary PGM (P5) image."""
    image = occupancy_image(world)
    ny, nx = image.shape
    header = f"P5\n{nx} {ny}\n255\n".encode("ascii")
    Path(path).write_bytes(header + image.tobytes())


def read_pgm(path: Union[str, Path]) -> numpy.ndarray:
    data = Path(path).read_bytes()
    magic, size, maxval, pixels = data.split(b"\n", 3)
    nx, ny = (int(v) for v in size.split())
    return numpy.frombuffer(pixels, dtype="uint8").reshape(ny, nx)


def write_grid_csv(world: World2D, path: Union[str, Path]) -> None:
    """Write the estimate's cell states (-1, 0, 1), row 0 first."""
    frame = pandas.DataFrame(world.estimate.astype("int64"))
    frame.to_csv(path, header=False, index=False)


def write_world(world: World2D, path: Union[str, Path]) -> None:
    srsly.write_json(path, world.to_dict())


def read_world(path: Union[str, Path]) -> World2D:
    return World2D.from_dict(srsly.read_json(path))


def sim_trace_records(header: Dict[str, Any], result: SimResult) -> List[Dict[str, Any]]:
    header = dict(header, kind=SIM_TRACE_KIND)
    return [header] + list(result.records)


def sim_trace_lines(header: Dict[str, Any], result: SimResult) -> List[str]:
    return [srsly.json_dumps(record) for record in sim_trace_records(header, result)]


def write_sim_trace(path: Union[str, Path], header: Dict[str, Any], result: SimResult) -> None:
    srsly.write_jsonl(path, sim_trace_records(header, result))


def read_sim_trace(path: Union[str, Path]) -> Tuple[Dict[str, Any], List[Dict[str, Any]]]:
    """Read a simulation trace back into its header and records."""
    records = list(srsly.read_jsonl(path))
    if not records or records[0].get("kind") != SIM_TRACE_KIND:
        raise ConfigError(Errors.E076.format(path=path))
    return records[0], records[1:]
