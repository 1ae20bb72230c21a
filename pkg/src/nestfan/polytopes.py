"""Lattice polytopes: exact hulls, reflexive / smooth Fano predicates,
unimodular normal forms and Higashitani's digraph polytopes."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .combinatorics import BuildingSet
from .errors import (
    BudgetExceeded,
    InvalidInput,
    NotConnected,
    NotFano,
    NotFullDimensional,
    NotSmoothFano,
    NotWeakFano,
    SearchBudgetExceeded,
)
from .fan import Fan, fan_of_building_set, is_weak_fano_oracle

HULL_MAX_DIM = 8
HULL_MAX_POINTS = 1000
NORMAL_FORM_BUDGET = 10**8
_CHUNK = 20000


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: int
    vertices: tuple[int, ...]


@dataclass(frozen=True)
class LatticePolytope:
    """Full-dimensional lattice polytope; facets satisfy ``<normal, x> <= offset``."""

    dim: int
    vertices: tuple[tuple[int, ...], ...]
    facets: tuple[Facet, ...]

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [list(v) for v in self.vertices]}

    @classmethod
    def from_json(cls, data: dict) -> "LatticePolytope":
        try:
            return hull(data["vertices"], dim=data.get("dim"))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed polytope JSON: {exc}") from exc

    @cached_property
    def vertex_index(self) -> dict[tuple[int, ...], int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def facet_vertex_sets(self) -> list[frozenset[tuple[int, ...]]]:
        return [frozenset(self.vertices[i] for i in f.vertices) for f in self.facets]


# --- convex hull -------------------------------------------------------------


def _hyperplanes(P: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """Integer normals of the hyperplanes through each n-subset (generalized cross product)."""
    n = P.shape[1]
    base = P[combos[:, 0]]
    diffs = P[combos[:, 1:]] - base[:, None, :]
    normals = np.empty((len(combos), n), dtype=object if diffs.dtype == object else np.int64)
    for k in range(n):
        minor = np.delete(diffs, k, axis=2)
        d = linalg.batch_det_exact(minor)
        normals[:, k] = d if k % 2 == 0 else -d
    return normals


def hull(points: Iterable[Sequence[int]], dim: int | None = None) -> LatticePolytope:
    """Exact facet enumeration by brute force over n-subsets of the points."""
    pts = sorted({tuple(int(x) for x in p) for p in points})
    if not pts:
        raise NotFullDimensional(-1, dim or 0)
    n = len(pts[0]) if dim is None else dim
    if any(len(p) != n for p in pts):
        raise InvalidInput("points of mixed dimension")
    if n > HULL_MAX_DIM or len(pts) > HULL_MAX_POINTS:
        raise BudgetExceeded(f"hull limited to dim <= {HULL_MAX_DIM} and <= {HULL_MAX_POINTS} points")
    r = linalg.rank([[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]) if len(pts) > 1 else 0
    if r < n or n == 0:
        raise NotFullDimensional(r, n)
    P = np.array(pts, dtype=np.int64)
    found: dict[tuple[tuple[int, ...], int], None] = {}
    combos_iter = itertools.combinations(range(len(pts)), n)
    while True:
        chunk = list(itertools.islice(combos_iter, _CHUNK))
        if not chunk:
            break
        combos = np.array(chunk, dtype=np.int64)
        normals = _hyperplanes(P, combos)
        nz = np.any(normals != 0, axis=1)
        normals, combos = normals[nz], combos[nz]
        if len(normals) == 0:
            continue
        g = np.gcd.reduce(np.abs(normals.astype(np.int64)), axis=1)
        normals = normals // g[:, None]
        offs = (normals * P[combos[:, 0]]).sum(axis=1)
        vals = P @ normals.T - offs
        pos = (vals > 0).any(axis=0)
        neg = (vals < 0).any(axis=0)
        ok = ~(pos & neg)
        sign = np.where(pos, -1, 1)
        for k in np.nonzero(ok)[0]:
            key = (tuple(int(x) * int(sign[k]) for x in normals[k]), int(offs[k]) * int(sign[k]))
            found[key] = None
    facet_list = sorted(found)
    incid = [[i for i, p in enumerate(pts) if sum(a * b for a, b in zip(u, p)) == c] for u, c in facet_list]
    on = [[] for _ in pts]
    for fi, members in enumerate(incid):
        for i in members:
            on[i].append(facet_list[fi][0])
    vert_ids = [i for i in range(len(pts)) if len(on[i]) >= n and linalg.rank(on[i]) == n]
    renum = {old: new for new, old in enumerate(vert_ids)}
    facets = tuple(
        Facet(u, c, tuple(renum[i] for i in members if i in renum)) for (u, c), members in zip(facet_list, incid)
    )
    return LatticePolytope(n, tuple(pts[i] for i in vert_ids), facets)


def smooth_fano_polytope_of_fan(f: Fan) -> LatticePolytope:
    """``conv(rays)`` for a smooth Fano fan, facets read off the maximal cones.

    Each cone's dual vector ``u`` (``<u, v> = 1`` on its rays) is checked to
    keep every other ray strictly below 1, which certifies the facet list.
    """
    n = f.dim
    if n == 0:
        raise NotFullDimensional(0, 0)
    order = sorted(range(len(f.rays)), key=lambda i: f.rays[i])
    pos = {old: new for new, old in enumerate(order)}
    V = np.array([f.rays[i] for i in order], dtype=np.int64)
    cones = [tuple(sorted(pos[i] for i in c)) for c in f.max_cones]
    stack = np.array([V[list(c)] for c in cones], dtype=np.int64)
    inv = linalg.batch_unimodular_inverse(stack)
    facets = []
    for k, c in enumerate(cones):
        if inv is not None:
            u = inv[k] @ np.ones(n, dtype=np.int64)
        else:
            u = np.array(linalg.solve([list(col) for col in stack[k]], [1] * n), dtype=object)
            if any(x.denominator != 1 for x in u):
                raise NotFano("cone is not unimodular")
            u = u.astype(np.int64)
        vals = V @ u
        others = np.delete(vals, list(c))
        if (vals[list(c)] != 1).any() or (others >= 1).any():
            raise NotFano("rays are not in convex position over the maximal cones")
        facets.append(Facet(tuple(int(x) for x in u), 1, c))
    facets.sort(key=lambda fc: (fc.normal, fc.offset))
    return LatticePolytope(n, tuple(tuple(int(x) for x in v) for v in V), tuple(facets))


def polytope_of_weak_fano_fan(f: Fan) -> LatticePolytope:
    """Convex hull of the primitive ray generators."""
    if not is_weak_fano_oracle(f):
        raise NotWeakFano("fan is not weak Fano")
    return hull(f.rays, dim=f.dim)


def cones_by_facet(p: LatticePolytope, f: Fan) -> dict[int, list[tuple[int, ...]]]:
    """Group the maximal cones of ``f`` under the facet of ``p`` containing all their rays."""
    out: dict[int, list[tuple[int, ...]]] = {}
    for cone in f.max_cones:
        pts = [f.rays[i] for i in cone]
        hits = [
            k
            for k, fc in enumerate(p.facets)
            if all(sum(a * b for a, b in zip(fc.normal, v)) == fc.offset for v in pts)
        ]
        if len(hits) != 1:
            raise AssertionError(f"cone {cone} lies on {len(hits)} facets")
        out.setdefault(hits[0], []).append(cone)
    return out


# --- predicates ----------------------------------------------------------------


def is_reflexive(p: LatticePolytope) -> bool:
    """Origin strictly inside and every facet at lattice distance one."""
    return all(fc.offset == 1 and linalg.is_primitive(fc.normal) for fc in p.facets)


def interior_lattice_points(p: LatticePolytope, limit: int = 10**7) -> list[tuple[int, ...]]:
    lo = [min(v[k] for v in p.vertices) for k in range(p.dim)]
    hi = [max(v[k] for v in p.vertices) for k in range(p.dim)]
    if math.prod(h - l + 1 for l, h in zip(lo, hi)) > limit:
        raise BudgetExceeded("bounding box too large for lattice point enumeration")
    grid = np.array(list(itertools.product(*(range(l, h + 1) for l, h in zip(lo, hi)))), dtype=np.int64)
    A = np.array([fc.normal for fc in p.facets], dtype=np.int64)
    c = np.array([fc.offset for fc in p.facets], dtype=np.int64)
    inside = ((grid @ A.T) < c).all(axis=1)
    return [tuple(int(x) for x in row) for row in grid[inside]]


def _facets_unimodular(p: LatticePolytope) -> bool:
    for fc in p.facets:
        if len(fc.vertices) != p.dim:
            return False
        if abs(linalg.det([p.vertices[i] for i in fc.vertices])) != 1:
            return False
    return True


def is_smooth_fano(p: LatticePolytope) -> bool:
    if not _facets_unimodular(p):
        return False
    return interior_lattice_points(p) == [(0,) * p.dim]


def is_pseudo_symmetric(p: LatticePolytope) -> bool:
    """Some facet ``F`` has ``-F`` as a facet too."""
    if not is_smooth_fano(p):
        raise NotSmoothFano("pseudo-symmetry is defined for smooth Fano polytopes")
    sets = set(p.facet_vertex_sets())
    return any(frozenset(tuple(-x for x in v) for v in s) in sets for s in sets)


# --- normal forms -----------------------------------------------------------------


def _serialize(n: int, points: Iterable[Sequence[int]]) -> bytes:
    return (f"{n}:" + ";".join(",".join(map(str, pt)) for pt in points)).encode()


def normal_form(p: LatticePolytope, budget: int = NORMAL_FORM_BUDGET) -> bytes:
    """Lexicographically least sorted vertex list over every facet basis and ordering.

    Equal byte strings iff the polytopes are related by a unimodular map.
    """
    if not _facets_unimodular(p):
        raise NotSmoothFano("normal form requires every facet to be a unimodular simplex")
    n, m = p.dim, len(p.vertices)
    nperm = math.factorial(n)
    cost = len(p.facets) * nperm * m * max(1, math.ceil(math.log2(max(m, 2))))
    if cost > budget:
        raise BudgetExceeded(f"normal form cost {cost} exceeds budget {budget}")
    V = np.array(p.vertices, dtype=np.int64)
    stack = np.array([V[list(fc.vertices)] for fc in p.facets], dtype=np.int64)
    inv = linalg.batch_unimodular_inverse(stack)
    if inv is None:
        inv = np.array([linalg.integer_inverse(b.tolist()) for b in stack], dtype=np.int64)
    T = np.einsum("mi,fij->fmj", V, inv)
    off = int(np.abs(T).max())
    base = 2 * off + 1
    if n * math.log2(base) > 62:
        raise BudgetExceeded("coordinates too large for packed normal form")
    perms = list(itertools.permutations(range(n)))
    W = np.zeros((n, nperm), dtype=np.int64)
    for pi, perm in enumerate(perms):
        for k, col in enumerate(perm):
            W[col, pi] = base ** (n - 1 - k)
    K = np.sort((T + off) @ W, axis=1)  # facets x m x perms
    rows = K.transpose(0, 2, 1).reshape(-1, m)
    cand = np.arange(len(rows))
    for col in range(m):
        vals = rows[cand, col]
        cand = cand[vals == vals.min()]
        if len(cand) == 1:
            break
    best = rows[cand[0]]
    points = []
    for key in best.tolist():
        digits = []
        for _ in range(n):
            key, d = divmod(key, base)
            digits.append(d - off)
        points.append(digits[::-1])
    return _serialize(n, points)


def fan_normal_form(f: Fan) -> bytes:
    """Canonical form of a smooth complete fan under unimodular maps (rays and cones)."""
    n = f.dim
    best = None
    for cone in f.max_cones:
        B = [list(f.rays[i]) for i in cone]
        Binv = linalg.integer_inverse(B)
        coords = [tuple(sum(r[i] * Binv[i][j] for i in range(n)) for j in range(n)) for r in f.rays]
        for perm in itertools.permutations(range(n)):
            moved = [tuple(c[k] for k in perm) for c in coords]
            order = sorted(range(len(moved)), key=lambda i: moved[i])
            pos = {old: new for new, old in enumerate(order)}
            rays = tuple(moved[i] for i in order)
            cones = tuple(sorted(tuple(sorted(pos[i] for i in c)) for c in f.max_cones))
            cand = (rays, cones)
            if best is None or cand < best:
                best = cand
    if best is None:
        return b"0:"
    rays, cones = best
    return (_serialize(n, rays).decode() + "|" + ";".join(",".join(map(str, c)) for c in cones)).encode()


def apply_linear(p: LatticePolytope, matrix: Sequence[Sequence[int]]) -> LatticePolytope:
    """Image of ``p`` under ``x -> matrix @ x``; ``matrix`` must be unimodular."""
    if abs(linalg.det(matrix)) != 1:
        raise InvalidInput("matrix is not unimodular")
    pts = [tuple(sum(row[k] * v[k] for k in range(len(v))) for row in matrix) for v in p.vertices]
    return hull(pts, dim=p.dim)


def random_unimodular(n: int, rng, steps: int = 8, bound: int = 3) -> list[list[int]]:
    """Random unimodular matrix from signed permutations and bounded row operations."""
    while True:
        perm = list(rng.permutation(n))
        m = [[0] * n for _ in range(n)]
        for i, j in enumerate(perm):
            m[i][j] = int(rng.choice([-1, 1]))
        for _ in range(steps):
            i, j = rng.choice(n, size=2, replace=False) if n > 1 else (0, 0)
            if i == j:
                continue
            c = int(rng.integers(-2, 3))
            m[i] = [a + c * b for a, b in zip(m[i], m[j])]
        if max(abs(x) for row in m for x in row) <= bound:
            return m


# --- directed graphs ------------------------------------------------------------------


@dataclass(frozen=True)
class DirectedGraph:
    nodes: int
    arrows: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.nodes < 1:
            raise InvalidInput("a digraph needs at least one node")
        for i, j in self.arrows:
            if i == j or not (1 <= i <= self.nodes and 1 <= j <= self.nodes):
                raise InvalidInput(f"bad arrow ({i}, {j})")

    @classmethod
    def from_arrows(cls, nodes: int, arrows: Iterable[Iterable[int]]) -> "DirectedGraph":
        return cls(nodes, frozenset((int(a), int(b)) for a, b in arrows))

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "arrows": [list(a) for a in sorted(self.arrows)]}

    def underlying_connected(self) -> bool:
        adj = {i: set() for i in range(1, self.nodes + 1)}
        for i, j in self.arrows:
            adj[i].add(j)
            adj[j].add(i)
        seen, stack = {1}, [1]
        while stack:
            x = stack.pop()
            for y in adj[x] - seen:
                seen.add(y)
                stack.append(y)
        return len(seen) == self.nodes


def arrow_vector(nodes: int, arrow: tuple[int, int]) -> tuple[int, ...]:
    """``e_i - e_j`` in ``Z^{n+1}``."""
    v = [0] * nodes
    v[arrow[0] - 1] += 1
    v[arrow[1] - 1] -= 1
    return tuple(v)


def digraph_points(g: DirectedGraph) -> list[tuple[int, ...]]:
    """Arrow vectors in ``Z^n`` after dropping the last coordinate of the hyperplane model."""
    out = []
    for a in sorted(g.arrows):
        v = arrow_vector(g.nodes, a)
        if sum(v) != 0:
            raise AssertionError("arrow vector left the hyperplane")
        out.append(v[:-1])
    return out


def digraph_polytope(g: DirectedGraph) -> LatticePolytope:
    if not g.underlying_connected():
        raise NotConnected("underlying graph is not connected")
    pts = digraph_points(g)
    if not pts:
        raise NotFullDimensional(-1, g.nodes - 1)
    return hull(pts, dim=g.nodes - 1)


def _as_arrow(v: Sequence[int]) -> tuple[int, int] | None:
    plus = minus = None
    for k, x in enumerate(v):
        if x == 1 and plus is None:
            plus = k
        elif x == -1 and minus is None:
            minus = k
        elif x != 0:
            return None
    if plus is None or minus is None:
        return None
    return plus + 1, minus + 1


def find_digraph_realization(
    b: BuildingSet, max_nodes: int = 5, budget: int = 10**7
) -> DirectedGraph | None:
    """A connected digraph whose polytope is unimodularly equivalent to ``P_B``.

    Searches lattice maps instead of digraphs: a fixed facet of ``P_B`` is sent
    to an ordered tuple of arrow vectors and every other vertex must land on an
    arrow vector.  Any realization arises this way because a smooth Fano
    polytope has no lattice points besides its vertices and the origin.
    """
    from .criteria import building_set_fano

    if not building_set_fano(b).fano:
        raise NotFano("building set is not Fano")
    d = b.dim
    if d == 0:
        return DirectedGraph(1, frozenset())
    if d + 1 > max_nodes:
        return None
    target = smooth_fano_polytope_of_fan(fan_of_building_set(b))
    target_nf = normal_form(target)
    facet = target.facets[0]
    basis = [target.vertices[i] for i in facet.vertices]
    Binv = linalg.integer_inverse(basis)
    # row-vector coordinates: v = sum_k c[k] * basis[k]
    coords = [[sum(v[i] * Binv[i][k] for i in range(d)) for k in range(d)] for v in target.vertices]
    depth_of = [max((k for k in range(d) if c[k] != 0), default=0) for c in coords]
    checks = [[vi for vi in range(len(coords)) if depth_of[vi] == k] for k in range(d)]
    nodes = d + 1
    arrows = [(i, j) for i in range(1, nodes + 1) for j in range(1, nodes + 1) if i != j]
    vecs = {a: arrow_vector(nodes, a) for a in arrows}
    steps = 0
    chosen: list[tuple[int, int]] = []

    def images_ok(k):
        for vi in checks[k]:
            img = [0] * nodes
            for t in range(k + 1):
                c = coords[vi][t]
                if c:
                    img = [x + c * y for x, y in zip(img, vecs[chosen[t]])]
            if _as_arrow(img) is None:
                return False
        return True

    def rec(k):
        nonlocal steps
        if k == d:
            imgs = set()
            for c in coords:
                img = [0] * nodes
                for t in range(d):
                    img = [x + c[t] * y for x, y in zip(img, vecs[chosen[t]])]
                imgs.add(_as_arrow(img))
            if None in imgs or len(imgs) != len(coords):
                return None
            g = DirectedGraph(nodes, frozenset(imgs))
            if not g.underlying_connected():
                return None
            q = digraph_polytope(g)
            if is_smooth_fano(q) and normal_form(q) == target_nf:
                return g
            return None
        for a in arrows if k > 0 else [(1, 2)]:
            if a in chosen:
                continue
            steps += 1
            if steps > budget:
                raise SearchBudgetExceeded(f"digraph search exceeded {budget} steps")
            chosen.append(a)
            if images_ok(k):
                found = rec(k + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    return rec(0)
