"""Deterministic JSON/CSV artifacts with the producing configuration embedded."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

SIG_DIGITS = 12
CONFIG_PREFIX = "# config: "


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    seed: int = 0
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"command": self.command, "seed": self.seed, "params": normalize(self.params)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "ExperimentConfig":
        return cls(obj["command"], int(obj.get("seed", 0)), dict(obj.get("params", {})))


def round_float(x: float) -> float | None:
    if not math.isfinite(x):
        return None
    return float(f"{x:.{SIG_DIGITS}g}")


def normalize(obj: Any) -> Any:
    """Make ``obj`` JSON-ready: floats rounded, tuples and sets listed, dataclasses expanded."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return round_float(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if hasattr(obj, "to_json"):
        return normalize(obj.to_json())
    if hasattr(obj, "__dataclass_fields__"):
        return normalize(asdict(obj))
    if isinstance(obj, Mapping):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [normalize(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return normalize(obj.item())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _cell(v) -> str:
    v = normalize(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, dict)):
        return json.dumps(v, separators=(",", ":"))
    return str(v)


def _parse_cell(s: str):
    if s == "":
        return None
    if s in ("true", "false"):
        return s == "true"
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    if s[0] in "[{":
        try:
            return json.loads(s)
        except ValueError:
            pass
    return s


def emit_report(results, fmt: str = "json", path=None, config: ExperimentConfig | None = None,
                columns: Sequence[str] | None = None) -> str:
    """Render ``results`` and optionally write them to ``path``.

    JSON wraps the payload as ``{"config": ..., "results": ...}``. CSV takes a
    list of row mappings; the config goes on a leading comment line and the
    header follows ``columns`` or the keys of the first row.
    """
    if fmt == "json":
        doc = {"config": config.to_json() if config else None, "results": normalize(results)}
        text = json.dumps(doc, indent=2) + "\n"
    elif fmt == "csv":
        rows = list(results)
        cols = list(columns) if columns is not None else (list(rows[0]) if rows else [])
        buf = io.StringIO()
        if config is not None:
            buf.write(CONFIG_PREFIX + json.dumps(config.to_json(), separators=(",", ":")) + "\n")
        w = csv.writer(buf, lineterminator="\n")
        if cols:
            w.writerow(cols)
        for r in rows:
            w.writerow([_cell(r.get(c)) for c in cols])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def read_report(source, fmt: str | None = None):
    """Inverse of :func:`emit_report`: ``(config, results)``.

    ``source`` is a path or the text itself.
    """
    text = source
    if isinstance(source, Path) or (isinstance(source, str) and "\n" not in source and Path(source).exists()):
        text = Path(source).read_text()
    if fmt is None:
        fmt = "json" if text.lstrip().startswith("{") else "csv"
    if fmt == "json":
        doc = json.loads(text)
        cfg = doc.get("config")
        return (ExperimentConfig.from_json(cfg) if cfg else None), doc.get("results")
    lines = text.splitlines()
    cfg = None
    if lines and lines[0].startswith(CONFIG_PREFIX):
        cfg = ExperimentConfig.from_json(json.loads(lines[0][len(CONFIG_PREFIX):]))
        lines = lines[1:]
    if not lines:
        return cfg, []
    reader = csv.reader(lines)
    header = next(reader)
    return cfg, [{k: _parse_cell(v) for k, v in zip(header, row)} for row in reader]


def rows_from_traces(traces: Iterable) -> list[dict]:
    """One CSV row per checkpoint of each thinning trace."""
    return [{"trial": r.trial, "step": r.step, "|A|": r.a_size, "|RP|": r.rp_size,
             "mode": r.mode, "nodes": r.nodes}
            for tr in traces for r in tr.records]


TRACE_COLUMNS = ("trial", "step", "|A|", "|RP|", "mode", "nodes")
