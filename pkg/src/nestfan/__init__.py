"""Toric varieties of building sets: fans, Fano criteria, polytopes and tables."""

from .combinatorics import BuildingSet, SimpleGraph, graphical_building_set, maximal_nested_sets, nested_complex
from .criteria import (
    Classification,
    building_set_fano,
    building_set_weak_fano,
    cubeahedron_fano,
    cubeahedron_weak_fano,
    graph_fano,
    graph_weak_fano,
    root_system_fano_weak_fano,
)
from .errors import BudgetExceeded, InvalidInput, NestfanError
from .fan import Fan, Wall, fan_of_building_set, is_fano_oracle, is_weak_fano_oracle, walls

__version__ = "0.1.0"

__all__ = [
    "BuildingSet",
    "SimpleGraph",
    "graphical_building_set",
    "maximal_nested_sets",
    "nested_complex",
    "Classification",
    "building_set_fano",
    "building_set_weak_fano",
    "cubeahedron_fano",
    "cubeahedron_weak_fano",
    "graph_fano",
    "graph_weak_fano",
    "root_system_fano_weak_fano",
    "BudgetExceeded",
    "InvalidInput",
    "NestfanError",
    "Fan",
    "Wall",
    "fan_of_building_set",
    "is_fano_oracle",
    "is_weak_fano_oracle",
    "walls",
]
