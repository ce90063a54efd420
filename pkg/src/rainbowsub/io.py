"""Text and JSON graph formats.

Text::

    # comment
    ecg <n> <palette_size>
    e <u> <v> <c>
    ...

JSON: ``{"format": "ecg", "n": ..., "palette_size": ..., "edges": [[u, v, c], ...]}``
with an optional ``"labels"`` list.
"""

from __future__ import annotations

import json
from pathlib import Path

from .graph import EdgeColoredGraph, GraphError, build_graph


class FormatError(GraphError):
    pass


def to_text(g: EdgeColoredGraph) -> str:
    lines = [f"ecg {g.n} {g.palette_size}"]
    lines.extend(f"e {u} {v} {c}" for u, v, c in g.edges)
    return "\n".join(lines) + "\n"


def from_text(text: str) -> EdgeColoredGraph:
    header = None
    triples = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "ecg":
            if header is not None or len(parts) != 3:
                raise FormatError(f"line {lineno}: bad header {raw!r}")
            header = (int(parts[1]), int(parts[2]))
        elif parts[0] == "e":
            if header is None:
                raise FormatError(f"line {lineno}: edge before header")
            if len(parts) != 4:
                raise FormatError(f"line {lineno}: expected 'e u v c'")
            triples.append(tuple(int(p) for p in parts[1:]))
        else:
            raise FormatError(f"line {lineno}: unknown record {parts[0]!r}")
    if header is None:
        raise FormatError("missing 'ecg' header")
    g = build_graph(header[0], triples)
    if g.palette_size != header[1]:
        raise FormatError(f"header palette_size {header[1]} but edges use {g.palette_size} colors")
    return g


def _jsonable_label(label):
    if isinstance(label, tuple):
        return [_jsonable_label(x) for x in label]
    return label


def to_json_obj(g: EdgeColoredGraph) -> dict:
    obj = {
        "format": "ecg",
        "n": g.n,
        "palette_size": g.palette_size,
        "edges": [list(e) for e in g.edges],
    }
    if g.labels is not None:
        obj["labels"] = [_jsonable_label(x) for x in g.labels]
    return obj


def from_json_obj(obj: dict) -> EdgeColoredGraph:
    try:
        n = int(obj["n"])
        edges = obj["edges"]
    except (KeyError, TypeError) as exc:
        raise FormatError(f"missing field: {exc}") from None
    labels = obj.get("labels")
    if labels is not None:
        labels = [tuple(x) if isinstance(x, list) else x for x in labels]
    g = build_graph(n, edges, labels=labels)
    if "palette_size" in obj and g.palette_size != int(obj["palette_size"]):
        raise FormatError(f"palette_size {obj['palette_size']} but edges use {g.palette_size} colors")
    return g


def to_json(g: EdgeColoredGraph) -> str:
    return json.dumps(to_json_obj(g), separators=(",", ":")) + "\n"


def from_json(text: str) -> EdgeColoredGraph:
    return from_json_obj(json.loads(text))


def dumps(g: EdgeColoredGraph, fmt: str = "text") -> str:
    if fmt == "text":
        return to_text(g)
    if fmt == "json":
        return to_json(g)
    raise ValueError(f"unknown format {fmt!r}")


def loads(text: str) -> EdgeColoredGraph:
    """Parse either format, sniffing JSON by its leading brace."""
    if text.lstrip().startswith("{"):
        return from_json(text)
    return from_text(text)


def read_graph(path) -> EdgeColoredGraph:
    return loads(Path(path).read_text())


def write_graph(g: EdgeColoredGraph, path, fmt: str | None = None) -> None:
    path = Path(path)
    if fmt is None:
        fmt = "json" if path.suffix == ".json" else "text"
    path.write_text(dumps(g, fmt))
