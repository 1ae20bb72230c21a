"""Normal fans of graph cubeahedra.

Facets are labelled by tubes (members of B(G)) and by bars ``~i``, one per
node; normals are ``e_I`` and ``-e_i`` in ``Z^n`` with ``n = |V(G)|``.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .combinatorics import SimpleGraph, bits, format_mask, graphical_building_set
from .errors import GroundSetTooLarge, InvalidInput
from .fan import FAN_MAX_GROUND, Fan, is_smooth


@dataclass(frozen=True, order=True)
class CubeLabel:
    kind: str  # "tube" or "bar"
    value: int  # tube: node mask; bar: 1-based node

    @classmethod
    def tube(cls, mask: int) -> "CubeLabel":
        return cls("tube", mask)

    @classmethod
    def bar(cls, node: int) -> "CubeLabel":
        return cls("bar", node)

    def __str__(self) -> str:
        return format_mask(self.value) if self.kind == "tube" else f"~{self.value}"


def _check_label(g: SimpleGraph, a: CubeLabel) -> None:
    if a.kind == "tube":
        if a.value == 0 or a.value & ~g.vertex_mask or not g.is_induced_connected(a.value):
            raise InvalidInput(f"{a} is not a tube of the graph")
    elif a.kind == "bar":
        if not 1 <= a.value <= g.nodes:
            raise InvalidInput(f"bar index {a.value} outside 1..{g.nodes}")
    else:
        raise InvalidInput(f"unknown label kind {a.kind!r}")


def labels_compatible(g: SimpleGraph, a: CubeLabel, b: CubeLabel) -> bool:
    """Whether the facets labelled ``a`` and ``b`` intersect."""
    _check_label(g, a)
    _check_label(g, b)
    if a.kind == "bar" and b.kind == "bar":
        return True
    if a.kind == "tube" and b.kind == "tube":
        i, j = a.value, b.value
        return i & j == i or i & j == j or not g.is_induced_connected(i | j)
    tube, bar = (a, b) if a.kind == "tube" else (b, a)
    return not tube.value >> (bar.value - 1) & 1


def cube_labels(g: SimpleGraph) -> list[CubeLabel]:
    return [CubeLabel.tube(m) for m in graphical_building_set(g).sets] + [
        CubeLabel.bar(i) for i in range(1, g.nodes + 1)
    ]


def cube_ray(g: SimpleGraph, a: CubeLabel) -> tuple[int, ...]:
    v = [0] * g.nodes
    if a.kind == "tube":
        for i in bits(a.value):
            v[i] = 1
    else:
        v[a.value - 1] = -1
    return tuple(v)


def cubeahedron_fan(g: SimpleGraph) -> Fan:
    """Maximal cones are the maximal cliques of the compatibility graph (the polytope is flag)."""
    if g.nodes > FAN_MAX_GROUND:
        raise GroundSetTooLarge(f"{g.nodes} nodes exceeds {FAN_MAX_GROUND}")
    labels = cube_labels(g)
    compat = nx.Graph()
    compat.add_nodes_from(range(len(labels)))
    for x in range(len(labels)):
        for y in range(x + 1, len(labels)):
            if labels_compatible(g, labels[x], labels[y]):
                compat.add_edge(x, y)
    cones = [sorted(c) for c in nx.find_cliques(compat)]
    for c in cones:
        if len(c) != g.nodes:
            raise AssertionError(f"maximal compatible family of size {len(c)} != {g.nodes}")
    fan = Fan.make(g.nodes, [cube_ray(g, a) for a in labels], cones, [str(a) for a in labels])
    if not is_smooth(fan):
        raise AssertionError("cubeahedron fan has a non-unimodular cone")
    return fan
