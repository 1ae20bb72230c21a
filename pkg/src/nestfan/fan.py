"""Simplicial lattice fans, walls and the anticanonical intersection oracle."""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .combinatorics import BuildingSet, bits, format_mask, is_nested, mask_key, maximal_nested_sets
from .errors import (
    GroundSetTooLarge,
    InvalidInput,
    NonMaximalDimensionCone,
    NotAWallConfiguration,
    NotComplete,
    NotSmooth,
)

# nested complexes grow super-exponentially; beyond this the fan is not desk scale
FAN_MAX_GROUND = 16


@dataclass(frozen=True)
class Wall:
    """A shared (n-1)-cone with its two opposite rays and the relation
    ``v + v' + sum(relation[k] * generators[k]) == 0``."""

    generators: tuple[int, ...]
    sides: tuple[int, int]
    relation: tuple[int, ...]

    @property
    def degree(self) -> int:
        return anticanonical_degree(self)

    def coefficient(self, ray: int) -> int:
        if ray in self.sides:
            return 1
        return self.relation[self.generators.index(ray)]


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None
    ray_masks: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        seen = set()
        for r in self.rays:
            if len(r) != self.dim:
                raise InvalidInput(f"ray {r} has wrong length for dimension {self.dim}")
            if not linalg.is_primitive(r):
                raise InvalidInput(f"ray {r} is not primitive")
            if r in seen:
                raise InvalidInput(f"duplicate ray {r}")
            seen.add(r)
        for c in self.max_cones:
            if any(not 0 <= i < len(self.rays) for i in c) or len(set(c)) != len(c):
                raise InvalidInput(f"bad cone {c}")
        if self.labels is not None and len(self.labels) != len(self.rays):
            raise InvalidInput("labels and rays differ in length")

    @classmethod
    def make(cls, dim, rays, cones, labels=None, ray_masks=None) -> "Fan":
        return cls(
            dim,
            tuple(tuple(int(x) for x in r) for r in rays),
            tuple(sorted(tuple(sorted(c)) for c in cones)),
            None if labels is None else tuple(labels),
            None if ray_masks is None else tuple(ray_masks),
        )

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def to_json(self) -> dict:
        out = {"dim": self.dim, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        try:
            return cls.make(data["dim"], data["rays"], data["max_cones"], data.get("labels"))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed fan JSON: {exc}") from exc

    @cached_property
    def _facets(self) -> dict[tuple[int, ...], list[tuple[int, int]]]:
        """(n-1)-face -> list of (cone index, opposite ray)."""
        table: dict[tuple[int, ...], list[tuple[int, int]]] = defaultdict(list)
        for ci, cone in enumerate(self.max_cones):
            for p, r in enumerate(cone):
                table[cone[:p] + cone[p + 1 :]].append((ci, r))
        return table

    @cached_property
    def _walls(self) -> tuple[Wall, ...]:
        return tuple(_compute_walls(self))

    def walls_containing(self, tau: Iterable[int]) -> list[Wall]:
        t = set(tau)
        return [w for w in self._walls if t.issubset(w.generators)]

    @cached_property
    def wall_index(self) -> dict[tuple[int, ...], Wall]:
        return {w.generators: w for w in self._walls}


def _coordinate_map(b: BuildingSet) -> dict[int, tuple[int, ...]]:
    """Element (0-based) -> lattice vector; components in canonical order, the
    largest element of each component folded to minus the block sum."""
    dim = b.dim
    vec: dict[int, tuple[int, ...]] = {}
    offset = 0
    for c in b.maximal:
        elems = list(bits(c))
        block = len(elems) - 1
        for k, e in enumerate(elems):
            v = [0] * dim
            if k < block:
                v[offset + k] = 1
            else:
                for j in range(block):
                    v[offset + j] = -1
            vec[e] = tuple(v)
        offset += block
    return vec


def ray_of(b: BuildingSet, mask: int, coords: dict[int, tuple[int, ...]] | None = None) -> tuple[int, ...]:
    coords = coords or _coordinate_map(b)
    out = [0] * b.dim
    for e in bits(mask):
        for k, x in enumerate(coords[e]):
            out[k] += x
    return tuple(out)


def fan_of_building_set(b: BuildingSet) -> Fan:
    """Rays ``e_I`` for ``I`` in ``B \\ B_max`` and cones from the maximal nested sets."""
    if b.size > FAN_MAX_GROUND:
        raise GroundSetTooLarge(f"ground set of size {b.size} exceeds {FAN_MAX_GROUND} for fan construction")
    coords = _coordinate_map(b)
    labels = b.proper
    index = {m: k for k, m in enumerate(labels)}
    rays = [ray_of(b, m, coords) for m in labels]
    cones = [[index[m] for m in n] for n in maximal_nested_sets(b)]
    return Fan.make(b.dim, rays, cones, [format_mask(m) for m in labels], labels)


def product_fan(fans: Sequence[Fan]) -> Fan:
    dim = sum(f.dim for f in fans)
    rays, labels, cones_per = [], [], []
    offset = 0
    for k, f in enumerate(fans):
        base = len(rays)
        for i, r in enumerate(f.rays):
            v = [0] * dim
            v[offset : offset + f.dim] = r
            rays.append(tuple(v))
            labels.append(f"{k}:{f.label(i)}")
        cones_per.append([[base + i for i in c] for c in f.max_cones])
        offset += f.dim
    cones = [sum(combo, []) for combo in itertools.product(*cones_per)]
    return Fan.make(dim, rays, cones, labels)


def cone_matrix(f: Fan, cone: Sequence[int]) -> list[list[int]]:
    """Rays of ``cone`` as rows."""
    return [list(f.rays[i]) for i in cone]


def is_smooth(f: Fan) -> bool:
    for c in f.max_cones:
        if len(c) != f.dim:
            raise NonMaximalDimensionCone(f"cone {c} has {len(c)} rays in dimension {f.dim}")
    if f.dim == 0:
        return True
    stack = np.array([cone_matrix(f, c) for c in f.max_cones], dtype=np.int64)
    if f.dim <= 6:
        dets = linalg.batch_det_exact(stack)
        return all(abs(int(d)) == 1 for d in dets)
    return all(abs(linalg.det(m)) == 1 for m in stack.tolist())


def is_complete(f: Fan) -> bool:
    """Every (n-1)-face of a maximal cone lies in exactly two maximal cones and
    the adjacency graph of maximal cones is connected."""
    if not f.max_cones:
        return False
    if any(len(c) != f.dim for c in f.max_cones):
        return False
    if f.dim == 0:
        return len(f.max_cones) == 1
    facets = f._facets
    if any(len(v) != 2 for v in facets.values()):
        return False
    adj = defaultdict(list)
    for pairs in facets.values():
        (a, _), (b, _) = pairs
        adj[a].append(b)
        adj[b].append(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == len(f.max_cones)


def _compute_walls(f: Fan) -> list[Wall]:
    n = f.dim
    if n == 0:
        return []
    cones = f.max_cones
    stack = np.array([[f.rays[i] for i in c] for c in cones], dtype=np.int64).transpose(0, 2, 1)
    inv = linalg.batch_unimodular_inverse(stack)
    out = []
    for facet, pairs in sorted(f._facets.items()):
        (ca, v), (cb, v2) = pairs
        cone = cones[ca]
        target = f.rays[v2]
        if inv is not None:
            x = (inv[ca] @ np.array(target, dtype=np.int64)).tolist()
        else:
            sol = linalg.solve([f.rays[i] for i in cone], target)
            if any(s.denominator != 1 for s in sol):
                raise NotSmooth(f"cone {cone} is not unimodular")
            x = [int(s) for s in sol]
        p = cone.index(v)
        if x[p] != -1:
            raise NotComplete(f"rays {v} and {v2} are not on opposite sides of {facet}")
        relation = tuple(-x[k] for k in range(n) if k != p)
        out.append(Wall(facet, (v, v2), relation))
    return out


def _require_smooth_complete(f: Fan) -> None:
    if not is_smooth(f):
        raise NotSmooth("fan is not smooth")
    if not is_complete(f):
        raise NotComplete("fan is not complete")


def walls(f: Fan) -> list[Wall]:
    _require_smooth_complete(f)
    return list(f._walls)


def wall_residual(f: Fan, w: Wall) -> tuple[int, ...]:
    v, v2 = w.sides
    out = [a + b for a, b in zip(f.rays[v], f.rays[v2])]
    for g, a in zip(w.generators, w.relation):
        out = [x + a * y for x, y in zip(out, f.rays[g])]
    return tuple(out)


def anticanonical_degree(w: Wall) -> int:
    """``(-K . V(tau)) = 2 + sum(a_i)``."""
    return 2 + sum(w.relation)


def wall_degrees(f: Fan) -> list[int]:
    return [anticanonical_degree(w) for w in walls(f)]


def is_fano_oracle(f: Fan) -> bool:
    return all(d > 0 for d in wall_degrees(f))


def is_weak_fano_oracle(f: Fan) -> bool:
    return all(d >= 0 for d in wall_degrees(f))


def wall_negative_coefficient_counts(f: Fan) -> list[int]:
    """Per wall, strictly negative coefficients in the full relation ``(1, 1, a_1, ...)``."""
    return [sum(1 for a in w.relation if a < 0) for w in walls(f)]


# --- building-set side of the intersection numbers -------------------------


def building_set_wall_degree(b: BuildingSet, n: Iterable[int], i1: int, i2: int) -> int:
    """``k - |(B|_{I1 n I2})_max| - 1`` (or without the ``-1`` when the
    union of the family is ``S``), with ``k`` from the pairing proposition."""
    if not b.is_connected:
        raise InvalidInput("building_set_wall_degree needs a connected building set")
    nset = frozenset(n)
    if i1 == i2 or i1 in nset or i2 in nset:
        raise NotAWallConfiguration("I1, I2 must be distinct and outside N")
    target = b.size - 1
    for extra in (i1, i2):
        if extra not in b.members or extra == b.ground:
            raise NotAWallConfiguration("I1, I2 must lie in B \\ B_max")
        if len(nset) + 1 != target or not is_nested(b, nset | {extra}):
            raise NotAWallConfiguration("N + {I} is not a maximal nested set")
    union = i1 | i2
    containing = [s for s in nset | {b.ground} if s & union == union]
    top = min(containing, key=mask_key)
    inside = [s for s in nset if s & ~top == 0 and s != top and s & union == 0]
    family = [s for s in inside if not any(s != t and s & t == s for t in inside)]
    covered = union
    for s in family:
        covered |= s
    if covered != top:
        raise NotAWallConfiguration("family does not cover the enclosing set")
    k = 2 + len(family)
    m = len(b.max_within(i1 & i2))
    return k - m - 1 if top in nset else k - m


def wall_configuration(f: Fan, w: Wall) -> tuple[frozenset[int], int, int]:
    """Translate a wall of ``fan_of_building_set(b)`` to ``(N, I1, I2)``."""
    if f.ray_masks is None:
        raise InvalidInput("fan carries no building-set labels")
    masks = f.ray_masks
    return frozenset(masks[g] for g in w.generators), masks[w.sides[0]], masks[w.sides[1]]


def fan_report(f: Fan) -> dict:
    """Summary used by ``fan check``."""
    smooth = is_smooth(f)
    complete = is_complete(f) if smooth else False
    out = {"dim": f.dim, "rays": len(f.rays), "max_cones": len(f.max_cones), "smooth": smooth, "complete": complete}
    if smooth and complete:
        ws = walls(f)
        degs = [anticanonical_degree(w) for w in ws]
        out.update(
            fano=all(d > 0 for d in degs),
            weak_fano=all(d >= 0 for d in degs),
            walls=[
                {"tau": [f.label(g) for g in w.generators], "sides": [f.label(s) for s in w.sides], "degree": d}
                for w, d in zip(ws, degs)
            ],
        )
    return out
