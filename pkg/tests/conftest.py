import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from nestfan.combinatorics import BuildingSet, SimpleGraph, validate_building_set

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def close_family(n, masks):
    fam = {1 << i for i in range(n)} | {m for m in masks if m}
    changed = True
    while changed:
        changed = False
        for a in list(fam):
            for c in list(fam):
                if a & c and (a | c) not in fam:
                    fam.add(a | c)
                    changed = True
    return fam


@st.composite
def building_sets(draw, min_size=1, max_size=5):
    n = draw(st.integers(min_size, max_size))
    masks = draw(st.lists(st.integers(1, (1 << n) - 1), max_size=6))
    return validate_building_set((1 << n) - 1, close_family(n, masks), ground_is_mask=True)


@st.composite
def graphs(draw, min_nodes=1, max_nodes=6):
    n = draw(st.integers(min_nodes, max_nodes))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return SimpleGraph.from_edges(n, chosen)


@pytest.fixture(scope="session")
def corpus5():
    """Every building-set class on at most 5 elements with its fan."""
    from nestfan.enumeration import enumerate_building_sets
    from nestfan.fan import fan_of_building_set

    return [(b, fan_of_building_set(b)) for b in enumerate_building_sets(5)]


@pytest.fixture
def example_b():
    return BuildingSet.from_lists(3, [[1], [2], [3], [2, 3], [1, 2, 3]])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
