"""Reading and writing graphs, vertex sets, and DOT renderings.

Formats:
  graph JSON   {"n": int, "edges": [[u,v], ...], "labels": {"id": "text", ...}?}
  edge list    first line ``n``, then one ``u v`` pair per line, 0-indexed
  set JSON     either a bare id list or an object with a "set" key
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import IO, Iterable

from .errors import InputError, ParseError
from .graph import Graph


def _as_text(source: str | Path | IO) -> str:
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    return data.decode("utf-8") if isinstance(data, bytes) else data


def read_graph(source: str | Path | IO, fmt: str = "auto") -> Graph:
    """Parse a graph from ``source``; fmt is "json", "edge-list" or "auto".

    Auto-detection uses the file suffix when available, else the first
    non-space character (``{`` means JSON).
    """
    text = _as_text(source)
    if fmt == "auto":
        name = str(source) if isinstance(source, (str, Path)) else ""
        if name.endswith(".json"):
            fmt = "json"
        else:
            stripped = text.lstrip()
            fmt = "json" if stripped.startswith("{") else "edge-list"
    if fmt == "json":
        g, _ = read_graph_json(text)
        return g
    if fmt == "edge-list":
        return read_edge_list(text)
    raise InputError(f"unknown graph format {fmt!r}")


def read_graph_json(text: str) -> tuple[Graph, dict[int, str]]:
    """Parse graph JSON, returning the graph and its label side map."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno) from exc
    if not isinstance(obj, dict) or "n" not in obj:
        raise ParseError('graph JSON must be an object with an "n" field')
    try:
        n = int(obj["n"])
        edges = [(int(u), int(v)) for u, v in obj.get("edges", [])]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad graph JSON payload: {exc}") from exc
    try:
        g = Graph(n, edges)
    except InputError as exc:
        raise ParseError(str(exc)) from exc
    labels = {int(k): str(v) for k, v in obj.get("labels", {}).items()}
    return g, labels


def read_edge_list(text: str) -> Graph:
    lines = text.splitlines()
    rows = [(i + 1, line.strip()) for i, line in enumerate(lines)]
    rows = [(no, line) for no, line in rows if line and not line.startswith("#")]
    if not rows:
        raise ParseError("empty edge list", line=1)
    no, first = rows[0]
    try:
        n = int(first)
    except ValueError as exc:
        raise ParseError(f"expected vertex count, got {first!r}", line=no) from exc
    edges = []
    for no, line in rows[1:]:
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"expected 'u v', got {line!r}", line=no)
        try:
            edges.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise ParseError(f"non-integer vertex id in {line!r}", line=no) from exc
    try:
        return Graph(n, edges)
    except InputError as exc:
        raise ParseError(str(exc)) from exc


def graph_to_json(g: Graph, labels: dict[int, str] | None = None) -> dict:
    obj: dict = {"n": g.n, "edges": [[u, v] for u, v in g.edges()]}
    if labels:
        obj["labels"] = {str(k): labels[k] for k in sorted(labels)}
    return obj


def write_graph(g: Graph, target: str | Path | IO, fmt: str = "json",
                labels: dict[int, str] | None = None) -> None:
    if fmt == "json":
        text = json.dumps(graph_to_json(g, labels), indent=2, sort_keys=True) + "\n"
    elif fmt == "edge-list":
        text = "\n".join([str(g.n)] + [f"{u} {v}" for u, v in g.edges()]) + "\n"
    else:
        raise InputError(f"unknown graph format {fmt!r}")
    _write_text(target, text)


def write_dot(g: Graph, target: str | Path | IO,
              labels: dict[int, str] | None = None,
              highlight: Iterable[int] | None = None) -> None:
    """Emit Graphviz DOT; members of ``highlight`` get style=filled."""
    marked = frozenset(highlight) if highlight is not None else frozenset()
    for v in marked:
        if not (0 <= v < g.n):
            raise InputError(f"highlight vertex {v} out of range")
    lines = ["graph g {", "  node [shape=circle];"]
    for v in range(g.n):
        attrs = []
        if labels and v in labels:
            attrs.append(f'label="{labels[v]}"')
        if v in marked:
            attrs.append("style=filled")
            attrs.append("fillcolor=lightblue")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        lines.append(f"  {v}{suffix};")
    for u, v in g.edges():
        lines.append(f"  {u} -- {v};")
    lines.append("}")
    _write_text(target, "\n".join(lines) + "\n")


def read_vertex_set(source: str | Path | IO, n: int | None = None) -> frozenset[int]:
    """Read a vertex set: a bare JSON list or any object with a "set" key."""
    text = _as_text(source)
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, offset=exc.colno) from exc
    if isinstance(obj, dict):
        if "set" not in obj:
            raise ParseError('set JSON object must carry a "set" key')
        obj = obj["set"]
    if not isinstance(obj, list):
        raise ParseError("set JSON must be a list of vertex ids")
    try:
        members = frozenset(int(v) for v in obj)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"non-integer vertex id: {exc}") from exc
    if n is not None:
        for v in members:
            if not (0 <= v < n):
                raise InputError(f"vertex id {v} out of range [0, {n})")
    return members


def write_vertex_set(members: Iterable[int], target: str | Path | IO) -> None:
    text = json.dumps({"set": sorted(members)}) + "\n"
    _write_text(target, text)


def _write_text(target: str | Path | IO, text: str) -> None:
    if isinstance(target, (str, Path)):
        Path(target).write_text(text, encoding="utf-8")
    else:
        target.write(text)
