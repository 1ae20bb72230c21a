"""Readers for the JSON and whitespace text input formats (``-`` reads stdin)."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from .combinatorics import BuildingSet, SimpleGraph
from .errors import InvalidInput
from .fan import Fan


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc


def _load(path: str) -> Any:
    """Parsed JSON, or a list of integer rows for whitespace text."""
    text = _read(path)
    stripped = text.strip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            return json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InvalidInput(f"{path}: invalid JSON ({exc.msg})") from exc
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append([int(tok) for tok in line.replace(",", " ").split()])
        except ValueError as exc:
            raise InvalidInput(f"{path}:{lineno}: expected integers") from exc
    return rows


def _field(data: dict, key: str, path: str):
    try:
        return data[key]
    except (KeyError, TypeError):
        raise InvalidInput(f"{path}: missing field {key!r}") from None


def read_building_set(path: str) -> BuildingSet:
    data = _load(path)
    if isinstance(data, dict):
        return BuildingSet.from_lists(int(_field(data, "ground_set", path)), _field(data, "sets", path))
    if not data:
        raise InvalidInput(f"{path}: no sets")
    return BuildingSet.from_lists(max(max(r) for r in data if r), data)


def read_graph(path: str) -> SimpleGraph:
    data = _load(path)
    if isinstance(data, dict):
        return SimpleGraph.from_edges(int(_field(data, "nodes", path)), _field(data, "edges", path))
    if not data:
        raise InvalidInput(f"{path}: empty graph")
    nodes = max(max(r) for r in data if r)
    edges = [r for r in data if len(r) == 2]
    if any(len(r) not in (1, 2) for r in data):
        raise InvalidInput(f"{path}: each line is an edge 'i j' or a lone node 'i'")
    return SimpleGraph.from_edges(nodes, edges)


def read_fan(path: str) -> Fan:
    data = _load(path)
    if not isinstance(data, dict):
        raise InvalidInput(f"{path}: fans are read from JSON")
    return Fan.from_json(data)


def read_points(path: str) -> tuple[int | None, list[list[int]]]:
    data = _load(path)
    if isinstance(data, dict):
        return data.get("dim"), _field(data, "vertices", path)
    return None, data


def read_digraph(path: str):
    from .polytopes import DirectedGraph

    data = _load(path)
    if isinstance(data, dict):
        return DirectedGraph.from_arrows(int(_field(data, "nodes", path)), _field(data, "arrows", path))
    if not data or any(len(r) != 2 for r in data):
        raise InvalidInput(f"{path}: each line is an arrow 'i j'")
    return DirectedGraph.from_arrows(max(max(r) for r in data), data)


def read_cartan(path: str) -> list[list[int]]:
    data = _load(path)
    if isinstance(data, dict):
        return _field(data, "cartan", path)
    return data
