"""Direct combinatorial Fano / weak-Fano criteria, decided without building a fan."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any

from .combinatorics import BuildingSet, SimpleGraph, bits, to_elements


@dataclass(frozen=True)
class Classification:
    fano: bool
    weak_fano: bool
    witness: Any = None

    def __post_init__(self):
        if self.fano and not self.weak_fano:
            raise ValueError("fano implies weak_fano")

    def to_json(self) -> dict:
        return {"fano": self.fano, "weak_fano": self.weak_fano, "witness": self.witness}


# --- forbidden induced subgraphs -------------------------------------------


def _is_induced_cycle(g: SimpleGraph, mask: int) -> bool:
    k = mask.bit_count()
    if k < 4 or g.induced_edge_count(mask) != k:
        return False
    adj = g.adjacency
    return all((adj[v] & mask).bit_count() == 2 for v in bits(mask)) and g.is_induced_connected(mask)


def _is_induced_diamond(g: SimpleGraph, mask: int) -> bool:
    return mask.bit_count() == 4 and g.induced_edge_count(mask) == 5


def _is_induced_claw(g: SimpleGraph, mask: int) -> bool:
    if mask.bit_count() != 4 or g.induced_edge_count(mask) != 3:
        return False
    adj = g.adjacency
    return any((adj[v] & mask).bit_count() == 3 for v in bits(mask))


def _forbidden(g: SimpleGraph, mask: int, claw: bool) -> str | None:
    if _is_induced_cycle(g, mask):
        return f"cycle C{mask.bit_count()}"
    if _is_induced_diamond(g, mask):
        return "diamond"
    if claw and _is_induced_claw(g, mask):
        return "claw"
    return None


def _submasks_by_size(mask: int, lo: int, hi: int):
    elems = list(bits(mask))
    for k in range(lo, min(hi, len(elems)) + 1):
        for combo in itertools.combinations(elems, k):
            yield sum(1 << e for e in combo)


def graph_fano(g: SimpleGraph) -> bool:
    return all(c.bit_count() <= 3 for c in g.component_masks())


def graph_weak_fano(g: SimpleGraph) -> Classification:
    """No connected component has a *proper* induced cycle (>= 4 nodes) or diamond."""
    for comp in g.component_masks():
        for sub in _submasks_by_size(comp, 4, comp.bit_count() - 1):
            kind = _forbidden(g, sub, claw=False)
            if kind:
                return Classification(False, False, {"kind": kind, "nodes": to_elements(sub)})
    return Classification(graph_fano(g), True)


def cubeahedron_fano(g: SimpleGraph) -> bool:
    return all(c.bit_count() <= 2 for c in g.component_masks())


def cubeahedron_weak_fano(g: SimpleGraph) -> Classification:
    """No induced subgraph at all (the whole graph included) is a cycle >= 4, diamond or claw."""
    for comp in g.component_masks():
        for sub in _submasks_by_size(comp, 4, comp.bit_count()):
            kind = _forbidden(g, sub, claw=True)
            if kind:
                return Classification(False, False, {"kind": kind, "nodes": to_elements(sub)})
    return Classification(cubeahedron_fano(g), True)


# --- building sets -----------------------------------------------------------


def _overlapping_pairs(members: tuple[int, ...]):
    for a, c in itertools.combinations(members, 2):
        inter = a & c
        if inter and inter != a and inter != c:
            yield a, c


def _pair_witness(component: int, a: int, c: int, reason: str) -> dict:
    return {"component": to_elements(component), "I1": to_elements(a), "I2": to_elements(c), "reason": reason}


def building_set_fano(b: BuildingSet) -> Classification:
    """Every overlapping incomparable pair in a component C has union C and intersection in B."""
    weak = building_set_weak_fano(b)
    for comp, sub in b.components():
        for a, c in _overlapping_pairs(sub.sets):
            if a | c != comp:
                return Classification(False, weak.weak_fano, _pair_witness(comp, a, c, "union is not the component"))
            if a & c not in b.members:
                return Classification(False, weak.weak_fano, _pair_witness(comp, a, c, "intersection not in B"))
    return Classification(True, True)


def building_set_weak_fano(b: BuildingSet) -> Classification:
    """Per overlapping incomparable pair: intersection in B, or union = C with at most
    two maximal members of B inside the intersection."""
    for comp, sub in b.components():
        for a, c in _overlapping_pairs(sub.sets):
            inter = a & c
            if inter in b.members:
                continue
            if a | c == comp and len(b.max_within(inter)) <= 2:
                continue
            return Classification(False, False, _pair_witness(comp, a, c, "neither condition holds"))
    fano_ok = all(
        a | c == comp and (a & c) in b.members for comp, sub in b.components() for a, c in _overlapping_pairs(sub.sets)
    )
    return Classification(fano_ok, True)


# --- root systems ------------------------------------------------------------


def root_system_fano_weak_fano(r) -> Classification:
    """Column sums of the Cartan matrix, block by block."""
    from .roots import cartan_column_degrees

    sums = cartan_column_degrees(r)
    bad = [j + 1 for j, s in enumerate(sums) if s < 0]
    witness = {"column_sums": sums, "negative_columns": bad} if bad else None
    return Classification(all(s > 0 for s in sums), not bad, witness)
