"""Graph and partition file formats.

Edge-list format: one edge per line, ``u v w`` with ``w`` optional (default
1); ``u u w`` declares a self-loop of loop-weight ``w``; ``#`` starts a
comment; vertex ids are nonnegative integers and the graph size is
``max id + 1``.  Duplicate edges collapse by weight summation.

GML subset: only ``node``/``id`` and ``edge``/``source``/``target``/``value``
keys are interpreted; everything else is skipped.

Partition format: one ``u c`` pair (vertex, community id) per line.
"""

from __future__ import annotations

import re
from pathlib import Path

import numpy as np

from .graph import Clustering, Graph

__all__ = [
    "load_edge_list",
    "save_edge_list",
    "load_gml",
    "load_graph",
    "load_partition",
    "save_partition",
]


class ParseError(ValueError):
    """Malformed graph or partition file; carries the offending line number."""


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def load_edge_list(path) -> Graph:
    edges = []
    max_id = -1
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = _strip(raw)
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3):
                raise ParseError(f"{path}:{lineno}: expected 'u v [w]', got {raw!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
                w = float(parts[2]) if len(parts) == 3 else 1.0
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
            if u < 0 or v < 0:
                raise ParseError(f"{path}:{lineno}: vertex ids must be nonnegative")
            max_id = max(max_id, u, v)
            edges.append((u, v, w))
    return Graph(max_id + 1, edges)


def save_edge_list(g: Graph, path, header: str | None = None):
    with open(path, "w", encoding="utf-8") as fh:
        if header:
            for line in header.splitlines():
                fh.write(f"# {line}\n")
        for u, v, w in g.edges():
            if w == 1.0 and u != v:
                fh.write(f"{u} {v}\n")
            else:
                fh.write(f"{u} {v} {w!r}\n")


_GML_TOKEN = re.compile(r"\[|\]|\"[^\"]*\"|[^\s\[\]]+")


def load_gml(path) -> Graph:
    """Read the node/edge subset of a GML file.

    Node ids may be arbitrary integers; they are compacted to 0..n-1 in order
    of appearance.  Edge ``value`` is used as the weight when present.
    """
    with open(path, "r", encoding="utf-8") as fh:
        tokens = _GML_TOKEN.findall(fh.read())
    ids: dict[int, int] = {}
    edges: list[tuple[int, int, float]] = []
    pos = 0

    def parse_block(kind: str):
        nonlocal pos
        fields: dict[str, str] = {}
        depth = 1
        key = None
        while pos < len(tokens) and depth:
            tok = tokens[pos]
            pos += 1
            if tok == "[":
                depth += 1
            elif tok == "]":
                depth -= 1
            elif depth == 1:
                if key is None:
                    key = tok
                else:
                    fields[key] = tok
                    key = None
        if kind == "node":
            if "id" not in fields:
                raise ParseError(f"{path}: node block without id")
            ids.setdefault(int(fields["id"]), len(ids))
        else:
            try:
                s, t = int(fields["source"]), int(fields["target"])
            except KeyError:
                raise ParseError(f"{path}: edge block without source/target") from None
            w = float(fields.get("value", 1.0))
            edges.append((s, t, w))

    while pos < len(tokens):
        tok = tokens[pos]
        pos += 1
        if tok in ("node", "edge") and pos < len(tokens) and tokens[pos] == "[":
            pos += 1
            parse_block(tok)
    if not ids:
        raise ParseError(f"{path}: no node blocks found")
    remapped = []
    for s, t, w in edges:
        if s not in ids or t not in ids:
            raise ParseError(f"{path}: edge endpoint {s if s not in ids else t} has no node block")
        remapped.append((ids[s], ids[t], w))
    return Graph(len(ids), remapped)


def load_graph(path, fmt: str = "auto") -> Graph:
    """Load a graph, inferring the format from the suffix when ``auto``."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(path)
    if fmt == "auto":
        fmt = "gml" if path.suffix.lower() == ".gml" else "edges"
    if fmt == "gml":
        return load_gml(path)
    if fmt == "edges":
        return load_edge_list(path)
    raise ValueError(f"unknown graph format {fmt!r}")


def load_partition(path, n: int | None = None) -> Clustering:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = _strip(raw)
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'u c', got {raw!r}")
            pairs.append((int(parts[0]), int(parts[1])))
    size = (max(u for u, _ in pairs) + 1) if pairs else 0
    if n is not None:
        size = n
    assign = -np.ones(size, dtype=np.int64)
    for u, cid in pairs:
        assign[u] = cid
    if np.any(assign < 0):
        missing = int(np.nonzero(assign < 0)[0][0])
        raise ParseError(f"{path}: vertex {missing} has no community assignment")
    return Clustering(assign)


def save_partition(c: Clustering, path):
    with open(path, "w", encoding="utf-8") as fh:
        for v, cid in enumerate(c.assignment):
            fh.write(f"{v} {cid}\n")
