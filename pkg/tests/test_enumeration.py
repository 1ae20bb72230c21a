import itertools
import json
import random

import networkx as nx
import pytest
from hypothesis import given

from conftest import building_sets, graphs
from nestfan.combinatorics import BuildingSet, SimpleGraph
from nestfan.criteria import building_set_fano
from nestfan.enumeration import (
    EnumerationReport,
    Row,
    building_sets_of_size,
    connected_building_sets,
    cross_validate,
    enumerate_building_sets,
    enumerate_connected_graphs,
    family_canonical_key,
    graph_canonical_form,
    labeled_building_sets,
    table1,
    table2,
    table3,
)
from nestfan.errors import InvalidInput, SearchBudgetExceeded


def atlas_connected_counts(max_nodes):
    counts = [0] * (max_nodes + 1)
    for g in nx.graph_atlas_g():
        n = g.number_of_nodes()
        if 1 <= n <= max_nodes and nx.is_connected(g):
            counts[n] += 1
    return counts[1:]


def brute_classes(n):
    """Isomorphism classes of building sets on exactly n elements, by brute force."""
    full = (1 << n) - 1
    cands = [m for m in range(1, full + 1) if m.bit_count() >= 2]
    seen = set()
    for choice in range(1 << len(cands)):
        fam = {1 << i for i in range(n)} | {c for k, c in enumerate(cands) if choice >> k & 1}
        if any(a & c and (a | c) not in fam for a in fam for c in fam):
            continue
        key = min(
            tuple(sorted(sum(1 << p[i] for i in range(n) if m >> i & 1) for m in fam))
            for p in itertools.permutations(range(n))
        )
        seen.add(key)
    return seen


def test_graph_counts_match_atlas():
    assert [len(enumerate_connected_graphs(n)) for n in range(1, 7)] == atlas_connected_counts(6)


@given(graphs(max_nodes=7))
def test_graph_canonical_form_relabel_invariant(g):
    perm = list(range(g.nodes))
    random.Random(g.nodes * 31 + len(g.edges)).shuffle(perm)
    assert graph_canonical_form(g.relabel(perm)) == graph_canonical_form(g)


def test_graph_canonical_form_separates():
    path = SimpleGraph.from_edges(4, [(1, 2), (2, 3), (3, 4)])
    star = SimpleGraph.from_edges(4, [(1, 2), (1, 3), (1, 4)])
    assert graph_canonical_form(path) != graph_canonical_form(star)


def test_building_set_classes_match_brute_force():
    for n in range(1, 5):
        expected = brute_classes(n)
        got = building_sets_of_size(n)
        assert len(got) == len(expected)
        conn = [b for b in got if b.is_connected]
        assert len(connected_building_sets(n)) == len(conn)


def test_building_set_counts():
    assert len(enumerate_building_sets(2, connected_only=True)) == 2
    assert len(enumerate_building_sets(3, connected_only=True)) == 6
    assert [len(connected_building_sets(n)) for n in range(1, 6)] == [1, 1, 4, 40, 3044]
    assert [labeled_building_sets(n) for n in range(1, 4)] == [1, 2, 12]
    with pytest.raises(SearchBudgetExceeded):
        labeled_building_sets(5)


def test_fano_filter_is_exact():
    for n in range(1, 6):
        fano = {family_canonical_key(n, b.sets) for b in connected_building_sets(n, fano_filter=True)}
        direct = {family_canonical_key(n, b.sets) for b in connected_building_sets(n) if building_set_fano(b).fano}
        assert fano == direct


@given(building_sets(max_size=5))
def test_family_key_relabel_invariant(b):
    n = b.size
    perm = list(range(n))
    random.Random(len(b.sets)).shuffle(perm)
    c = b.relabel(dict(enumerate(perm)))
    assert family_canonical_key(n, b.sets) == family_canonical_key(n, c.sets)


def test_tables_1_and_3():
    t1 = table1()
    assert [(r.total, r.positive) for r in t1.rows] == [(1, 1), (1, 1), (2, 2), (6, 6), (21, 10), (112, 23)]
    t3 = table3()
    assert [r.positive for r in t3.rows] == [1, 1, 2, 3, 6, 11]
    assert t1.to_text().splitlines()[0].split("\t")[0] == "nodes"
    assert json.loads(json.dumps(t1.to_json()))["table"] == "table1"


def test_row_validation():
    with pytest.raises(ValueError):
        Row(1, 1, 2)
    assert EnumerationReport("x", [Row(1, 2, 1)]).to_text() == "param\ttotal\tpositive\n1\t2\t1"


def test_table2_small_dims(tmp_path):
    ck = tmp_path / "ck.json"
    t = table2(3, checkpoint=str(ck))
    assert [r.positive for r in t.rows] == [1, 5, 14]
    state = json.loads(ck.read_text())
    assert set(state["rows"]) == {"1", "2", "3"}
    again = table2(3, checkpoint=str(ck))
    assert again.rows == t.rows
    assert table2(3, jobs=2).rows == t.rows


def test_table2_guards():
    with pytest.raises(SearchBudgetExceeded, match="extended"):
        table2(5)
    with pytest.raises(InvalidInput):
        table2(0)


@pytest.mark.parametrize("corpus", ["graphs<=5", "building-sets<=4", "cubeahedra<=4", "roots<=3"])
def test_cross_validate(corpus):
    res = cross_validate(corpus)
    assert res["checked"] > 0 and res["disagreements"] == []


def test_cross_validate_unknown():
    with pytest.raises(InvalidInput):
        cross_validate("graphs<=9")
