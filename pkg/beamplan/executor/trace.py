from typing import Any, Dict, List, Tuple, Union
from pathlib import Path

import srsly

from ..errors import Errors, ConfigError
from .episode import EpisodeResult, TraceStep


TRACE_FORMAT = 1


def trace_header(config: Dict[str, Any], seed: int, **extra: Any) -> Dict[str, Any]:
    header = {"type": "header", "format": TRACE_FORMAT, "seed": seed, "config": config}
    header.update(extra)
    return header


def trace_records(header: Dict[str, Any], result: EpisodeResult) -> List[Dict[str, Any]]:
    """The JSON-lines records of a trace: the header, one record per step
    and a closing summary. Wall-clock times are left out, so rerunning the
    same episode reproduces the records exactly.
    """
    records = [header]
    for step in result.trace:
        record = {"type": "step"}
        record.update(step.to_dict())
        records.append(record)
    records.append(
        {
            "type": "end",
            "collected_gain": result.collected_gain,
            "cost_used": result.cost_used,
            "visited": list(result.visited),
            "n_plans": result.n_plans,
            "paths_expanded": result.paths_expanded,
        }
    )
    return records


def trace_lines(header: Dict[str, Any], result: EpisodeResult) -> List[str]:
    return [srsly.json_dumps(record) for record in trace_records(header, result)]


def write_trace(path: Union[str, Path], header: Dict[str, Any], result: EpisodeResult) -> None:
    srsly.write_jsonl(path, trace_records(header, result))


def read_trace(path: Union[str, Path]) -> Tuple[Dict[str, Any], List[TraceStep]]:
    """Read a trace file back into its header and steps."""
    records = list(srsly.read_jsonl(path))
    if not records or records[0].get("type") != "header":
        raise ConfigError(Errors.E083.format(path=path))
    steps = [TraceStep.from_dict(r) for r in records[1:] if r.get("type") == "step"]
    return records[0], steps


def read_trace_lines(path: Union[str, Path]) -> List[str]:
    text = Path(path).read_text(encoding="utf8")
    return [line for line in text.split("\n") if line.strip()]
