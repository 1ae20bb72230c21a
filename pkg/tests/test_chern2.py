from fractions import Fraction

import pytest

from nestfan.chern2 import (
    IntersectionPolynomial,
    ch2_dot_surface,
    ch2_dot_surface_oracle,
    classify_surface_star,
    curve_polynomial,
    is_projective_space,
    is_two_fano,
    proof_polynomial,
    proof_surface,
    proof_tau,
    surface_intersection_matrix,
    surface_polynomial,
    surface_stars,
    two_fano_report,
)
from nestfan.combinatorics import BuildingSet
from nestfan.criteria import building_set_fano
from nestfan.enumeration import building_sets_of_size
from nestfan.errors import NotACone, NotFano, UnsupportedStar
from nestfan.fan import fan_of_building_set, walls


def projective(n):
    return BuildingSet.from_lists(n + 1, [[i] for i in range(1, n + 2)] + [list(range(1, n + 2))])


def lin(**kw):
    return IntersectionPolynomial.linear({int(k[1:]): v for k, v in kw.items()})


def test_polynomial_arithmetic():
    x = lin(x0=1, x1=2)
    assert (x * x).terms == {(0, 0): 1, (0, 1): 4, (1, 1): 4}
    assert (x - x).terms == {}
    assert (3 * x).terms == {(0,): 3, (1,): 6}
    assert (x * x).diagonal_sum() == 5
    assert x.format(["a", "b"]) == "X[a] + 2*X[b]"


def test_curve_polynomials(example_b):
    (line,) = [w for w in walls(fan_of_building_set(projective(2))) if w.generators == (0,)]
    assert curve_polynomial(line) == lin(x0=1, x1=1, x2=1)
    f = fan_of_building_set(example_b)
    w = [w for w in walls(f) if f.label(w.generators[0]) == "2|3"][0]
    assert curve_polynomial(w).format(f.labels) == "X[2] + X[3] - X[2|3]"
    (w,) = walls(fan_of_building_set(projective(1)))
    assert curve_polynomial(w) == lin(x0=1, x1=1)


def test_star_in_projective_space():
    f = fan_of_building_set(projective(3))
    s = classify_surface_star(f, [0])
    assert s.kind == "ProjectivePlane"
    assert ch2_dot_surface(s) == 2
    all4 = IntersectionPolynomial.linear({i: 1 for i in range(4)})
    assert surface_polynomial(s) == all4 * all4


def test_whole_plane():
    f = fan_of_building_set(projective(2))
    s = classify_surface_star(f, [])
    all3 = IntersectionPolynomial.linear({i: 1 for i in range(3)})
    assert surface_polynomial(s) == all3 * all3


def test_star_errors(example_b):
    f = fan_of_building_set(projective(3))
    with pytest.raises(NotACone):
        classify_surface_star(f, [0, 1])
    g = fan_of_building_set(BuildingSet.from_lists(3, [[1], [2], [3], [1, 2], [2, 3], [1, 2, 3]]))
    s = classify_surface_star(g, [])
    assert s.kind == "Other"
    with pytest.raises(UnsupportedStar):
        surface_polynomial(s)
    # (2|3) and (1) are never in a common cone of the blow-up of P3 along a line
    b = BuildingSet.from_lists(4, [[1], [2], [3], [4], [3, 4], [1, 2, 3, 4]])
    h = fan_of_building_set(b)
    i, j = h.labels.index("3|4"), h.labels.index("3")
    with pytest.raises(NotACone):
        classify_surface_star(h, [i, j][:1] + [h.labels.index("4")])


def test_projective_plane_lines_agree(corpus5):
    for b, f in corpus5:
        if f.dim < 3 or b.size > 4:
            continue
        for tau in surface_stars(f):
            s = classify_surface_star(f, tau)
            if s.kind == "ProjectivePlane":
                lines = set()
                for r in s.link:
                    (w,) = [w for w in walls(f) if w.generators == tuple(sorted(s.tau + (r,)))]
                    lines.add(curve_polynomial(w) * curve_polynomial(w))
                assert len(lines) == 1


def test_hirzebruch_zero_symmetric(corpus5):
    checked = 0
    for b, f in corpus5:
        if b.size != 4:
            continue
        for tau in surface_stars(f):
            s = classify_surface_star(f, tau)
            if s.kind == "Hirzebruch" and s.a == 0:
                swapped = type(s)(**{**s.__dict__, "neg": s.fib, "fib": s.neg})
                assert ch2_dot_surface(swapped) == ch2_dot_surface(s)
                checked += 1
    assert checked > 0


def test_wall_polynomials_match_divisor_oracle(corpus5):
    for b, f in corpus5:
        if f.dim < 2 or b.size > 4:
            continue
        for tau in surface_stars(f):
            s = classify_surface_star(f, tau)
            if s.kind == "Other":
                continue
            matrix = surface_intersection_matrix(f, tau)
            poly = surface_polynomial(s)
            for (i, j), v in poly.terms.items():
                assert matrix.get((i, j), 0) * (1 if i == j else 2) == v
            assert ch2_dot_surface(s) == ch2_dot_surface_oracle(f, tau)


def test_projective_space_stars_constant():
    for n in range(2, 6):
        f = fan_of_building_set(projective(n))
        values = {ch2_dot_surface(classify_surface_star(f, tau)) for tau in surface_stars(f)}
        assert values == {Fraction(n + 1, 2)}


def test_two_fano_examples(example_b):
    assert is_two_fano(projective(4))
    rep = two_fano_report(example_b)
    assert not rep.two_fano and rep.ch2_dot_s <= 0
    assert not is_two_fano(BuildingSet.from_lists(4, [[1], [2], [1, 2], [3], [4], [3, 4]]))
    with pytest.raises(NotFano):
        is_two_fano(BuildingSet.from_lists(4, [[1], [2], [3], [4], [1, 2], [2, 3], [3, 4], [1, 2, 3], [2, 3, 4], [1, 2, 3, 4]]))


def test_proof_surfaces_all_cases():
    seen = {}
    for n in (4, 5):
        for b in building_sets_of_size(n, connected_only=True, fano_filter=True):
            if is_projective_space(b):
                continue
            ps = proof_surface(b)
            f = fan_of_building_set(b)
            s = classify_surface_star(f, proof_tau(f, ps))
            assert s.kind == "Hirzebruch"
            assert s.a == (0 if ps.case == "2" else 1)
            assert surface_polynomial(s) == proof_polynomial(f, ps)
            value = ch2_dot_surface(s)
            assert value == (-1 if ps.case == "2" else 0)
            seen[ps.case] = seen.get(ps.case, 0) + 1
    assert set(seen) == {"1.1", "1.2", "2"}


def test_every_nonprojective_fano_has_witness():
    for n in range(2, 6):
        for b in building_sets_of_size(n, fano_filter=True):
            rep = two_fano_report(b)
            assert rep.two_fano == is_projective_space(b)
            if b.is_connected and b.dim >= 3 and not rep.two_fano:
                assert rep.ch2_dot_s is not None and rep.ch2_dot_s <= 0


def test_building_set_fano_precondition():
    b = projective(3)
    assert building_set_fano(b).fano and is_projective_space(b)
