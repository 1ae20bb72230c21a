"""Acceptance suite: one PASS/FAIL line per criterion, shown in the terminal summary."""

import time
from collections import Counter

import numpy as np

from conftest import ACCEPTANCE_LINES
from nestfan.chern2 import ch2_dot_surface, classify_surface_star, is_projective_space, is_two_fano, proof_surface, proof_tau
from nestfan.combinatorics import BuildingSet
from nestfan.criteria import building_set_fano, building_set_weak_fano
from nestfan.enumeration import building_sets_of_size, cross_validate, enumerate_building_sets, table1, table2, table3
from nestfan.fan import (
    anticanonical_degree,
    building_set_wall_degree,
    fan_of_building_set,
    is_fano_oracle,
    wall_configuration,
    wall_negative_coefficient_counts,
    walls,
)
from nestfan.polytopes import (
    apply_linear,
    digraph_polytope,
    fan_normal_form,
    find_digraph_realization,
    is_pseudo_symmetric,
    is_reflexive,
    is_smooth_fano,
    normal_form,
    polytope_of_weak_fano_fan,
    random_unimodular,
    smooth_fano_polytope_of_fan,
)
from nestfan.roots import cartan_column_degrees, root_datum, weyl_fan


def record(n, title, ok, detail=""):
    ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {n:>2}. {title}" + (f"  [{detail}]" if detail else ""))
    print(ACCEPTANCE_LINES[-1])
    assert ok, detail


def corpus(max_size):
    return [(b, fan_of_building_set(b)) for b in enumerate_building_sets(max_size)]


def test_01_table1():
    t0 = time.perf_counter()
    rows = [(r.total, r.positive) for r in table1().rows]
    dt = time.perf_counter() - t0
    ok = rows == [(1, 1), (1, 1), (2, 2), (6, 6), (21, 10), (112, 23)] and dt < 60
    record(1, "graph associahedra weak Fano counts, 1-6 nodes", ok, f"{rows} in {dt:.1f}s")


def test_02_table3():
    t0 = time.perf_counter()
    pos = [r.positive for r in table3().rows]
    dt = time.perf_counter() - t0
    record(2, "graph cubeahedra weak Fano counts, 1-6 nodes", pos == [1, 1, 2, 3, 6, 11] and dt < 60, f"{pos} in {dt:.1f}s")


def test_03_table2(tmp_path):
    t0 = time.perf_counter()
    pos = [r.positive for r in table2(4).rows]
    dt = time.perf_counter() - t0
    ck = tmp_path / "table2.json"
    t1 = time.perf_counter()
    ext = table2(5, extended=True, checkpoint=str(ck)).rows[-1].positive
    dt5 = time.perf_counter() - t1
    ok = pos == [1, 5, 14, 50] and dt < 600 and ext == 161 and ck.exists()
    record(3, "distinct toric Fano varieties from building sets, dims 1-4 (+5 extended)", ok,
           f"{pos} in {dt:.1f}s; dim 5 = {ext} in {dt5:.1f}s")


def test_04_oracle_equivalence():
    results = {c: cross_validate(c) for c in ("graphs<=5", "building-sets<=4", "cubeahedra<=4", "roots<=3")}
    bad = sum(len(r["disagreements"]) for r in results.values())
    checked = sum(r["checked"] for r in results.values())
    record(4, "direct criteria agree with the wall-degree oracle", bad == 0, f"{checked} objects, {bad} disagreements")


def test_05_intersection_formula():
    n_walls = mismatches = 0
    for b, f in corpus(5):
        for comp, sub in b.components():
            g = fan_of_building_set(sub)
            if g.dim == 0:
                continue
            for w in walls(g):
                n_walls += 1
                mismatches += building_set_wall_degree(sub, *wall_configuration(g, w)) != anticanonical_degree(w)
    record(5, "building-set degree formula equals wall-relation degree, |S|<=5", mismatches == 0,
           f"{n_walls} walls, {mismatches} mismatches")


def test_06_single_negative_coefficient():
    worst, fano = 0, 0
    for b, f in corpus(5):
        if f.dim and is_fano_oracle(f):
            fano += 1
            worst = max([worst, *wall_negative_coefficient_counts(f)])
    record(6, "wall relations of Fano fans have at most one negative coefficient", worst <= 1,
           f"{fano} Fano fans, max negatives {worst}")


def test_07_two_fano():
    values = {}
    for n in (4, 5):
        for b in building_sets_of_size(n, connected_only=True, fano_filter=True):
            if is_projective_space(b):
                continue
            ps = proof_surface(b)
            f = fan_of_building_set(b)
            values.setdefault(ps.case, set()).add(ch2_dot_surface(classify_surface_star(f, proof_tau(f, ps))))
    fano = [b for b in enumerate_building_sets(5) if building_set_fano(b).fano]
    wrong = [b for b in fano if is_two_fano(b) != is_projective_space(b)]
    ok = values == {"1.1": {0}, "1.2": {0}, "2": {-1}} and not wrong
    detail = ", ".join(f"case {k}: {sorted(map(int, v))}" for k, v in sorted(values.items()))
    record(7, "proof surfaces and 2-Fano exactly for projective spaces, |S|<=5", ok,
           f"{detail}; {len(fano)} Fano sets, {len(wrong)} wrong")


def test_08_root_systems():
    expected = {"A2": 6, "B2": 8, "G2": 12, "A3": 24, "B3": 48}
    counts, degrees_ok = {}, True
    for name in ("A1", "A2", "A3", "B2", "B3", "C3", "G2"):
        r = root_datum(name)
        f = weyl_fan(r)
        counts[name] = len(f.max_cones)
        half = len(f.max_cones) // 2
        want = Counter()
        for c in cartan_column_degrees(r):
            want[c] += half
        degrees_ok &= Counter(w.degree for w in walls(f)) == want
    forms_ok = True
    for n in (1, 2, 3):
        full = BuildingSet.from_lists(n + 1, [
            [i + 1 for i in range(n + 1) if m >> i & 1] for m in range(1, 1 << (n + 1))
        ])
        forms_ok &= fan_normal_form(weyl_fan(root_datum(f"A{n}"))) == fan_normal_form(fan_of_building_set(full))
    ok = all(counts[k] == v for k, v in expected.items()) and degrees_ok and forms_ok
    record(8, "Weyl fans: chamber counts, degrees from Cartan columns, A_n vs permutohedral", ok,
           f"chambers {counts}; degrees {degrees_ok}; A1-A3 forms {forms_ok}")


def test_09_polytopes():
    reflexive_fail = iff_fail = weak = 0
    tests = {}
    for b, f in corpus(5):
        if f.dim == 0 or not building_set_weak_fano(b).weak_fano:
            continue
        weak += 1
        p = polytope_of_weak_fano_fan(f)
        reflexive_fail += not is_reflexive(p)
        fano = building_set_fano(b).fano
        iff_fail += is_smooth_fano(p) != fano
        if fano and b.size <= 4:
            tests.setdefault(normal_form(p), p)
    example = BuildingSet.from_lists(3, [[1], [2], [3], [2, 3], [1, 2, 3]])
    not_ps = not is_pseudo_symmetric(smooth_fano_polytope_of_fan(fan_of_building_set(example)))
    rng = np.random.default_rng(20240601)
    invariance_fail = 0
    for nf, p in tests.items():
        for _ in range(100):
            invariance_fail += normal_form(apply_linear(p, random_unimodular(p.dim, rng))) != nf
    ok = reflexive_fail == 0 and iff_fail == 0 and not_ps and invariance_fail == 0
    record(9, "polytopes: reflexive, smooth Fano iff Fano, pseudo-symmetry, normal-form invariance", ok,
           f"{weak} weak Fano; {reflexive_fail} non-reflexive; {iff_fail} iff failures; "
           f"example not pseudo-symmetric {not_ps}; {len(tests)} polytopes x 100 maps, {invariance_fail} failures")


def test_10_digraph_realizations():
    fano = [b for b in enumerate_building_sets(4) if building_set_fano(b).fano]
    failed = []
    for b in fano:
        g = find_digraph_realization(b)
        if g is None:
            failed.append(b)
        elif b.dim and normal_form(digraph_polytope(g)) != normal_form(smooth_fano_polytope_of_fan(fan_of_building_set(b))):
            failed.append(b)
    record(10, "digraph realizations of Fano building sets, |S|<=4", not failed, f"{len(fano)} sets, {len(failed)} failures")
