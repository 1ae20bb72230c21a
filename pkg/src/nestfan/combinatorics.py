"""Building sets, graphical building sets and nested sets.

Subsets of the ground set are int bitmasks: element ``i`` (1-based in all
I/O) is bit ``i - 1``.  A building set is stored with its ground set as a
mask too, so restrictions ``B|_C`` keep the original labels.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator

from .errors import (
    EmptyMember,
    EmptySubset,
    GroundSetTooLarge,
    InvalidInput,
    MemberIsBMax,
    MemberNotInB,
    MissingSingleton,
    NotUnionClosed,
)

MAX_GROUND = 63


def mask_key(mask: int) -> tuple[int, int]:
    """Canonical order on subsets: by cardinality, then by numeric value."""
    return (mask.bit_count(), mask)


def bits(mask: int) -> Iterator[int]:
    """0-based positions of the set bits, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_mask(elements: Iterable[int]) -> int:
    mask = 0
    for e in elements:
        if e < 1 or e > MAX_GROUND:
            raise InvalidInput(f"element {e} outside 1..{MAX_GROUND}")
        mask |= 1 << (e - 1)
    return mask


def to_elements(mask: int) -> list[int]:
    return [i + 1 for i in bits(mask)]


def format_mask(mask: int) -> str:
    return "|".join(str(e) for e in to_elements(mask))


def full_mask(size: int) -> int:
    if size < 1:
        raise InvalidInput("ground set must be nonempty")
    if size > MAX_GROUND:
        raise GroundSetTooLarge(f"ground set of size {size} exceeds {MAX_GROUND}")
    return (1 << size) - 1


def _subset(a: int, b: int) -> bool:
    return a & b == a


@dataclass(frozen=True)
class BuildingSet:
    """A validated building set; build instances with :func:`validate_building_set`."""

    ground: int
    sets: tuple[int, ...]

    @classmethod
    def from_lists(cls, size: int, family: Iterable[Iterable[int]]) -> "BuildingSet":
        return validate_building_set(size, [to_mask(s) for s in family])

    @cached_property
    def members(self) -> frozenset[int]:
        return frozenset(self.sets)

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return maximal_elements(self.sets)

    @property
    def size(self) -> int:
        return self.ground.bit_count()

    @property
    def is_connected(self) -> bool:
        return self.ground in self.members

    @property
    def dim(self) -> int:
        return self.size - len(self.maximal)

    @cached_property
    def proper(self) -> tuple[int, ...]:
        """B \\ B_max in canonical order: the ray labels of the fan."""
        top = set(self.maximal)
        return tuple(s for s in self.sets if s not in top)

    def __contains__(self, mask: int) -> bool:
        return mask in self.members

    def restriction(self, c: int) -> "BuildingSet":
        return restriction(self, c)

    def components(self) -> list[tuple[int, "BuildingSet"]]:
        return components(self)

    def max_within(self, x: int) -> tuple[int, ...]:
        """Maximal members of ``B|_x`` (empty tuple for ``x == 0``)."""
        return _max_within(self, x)

    def to_lists(self) -> list[list[int]]:
        return [to_elements(s) for s in self.sets]

    def relabel(self, perm: dict[int, int]) -> "BuildingSet":
        """Apply a 0-based element map; the result is re-sorted canonically."""

        def image(mask):
            out = 0
            for i in bits(mask):
                out |= 1 << perm[i]
            return out

        return BuildingSet(image(self.ground), tuple(sorted((image(s) for s in self.sets), key=mask_key)))

    def __repr__(self) -> str:
        body = ", ".join("{" + ",".join(map(str, to_elements(s))) + "}" for s in self.sets)
        return f"BuildingSet({{{body}}})"


def maximal_elements(masks: Iterable[int]) -> tuple[int, ...]:
    ordered = sorted(set(masks), key=mask_key, reverse=True)
    kept: list[int] = []
    for m in ordered:
        if not any(_subset(m, k) for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=mask_key))


@lru_cache(maxsize=1 << 16)
def _max_within(b: BuildingSet, x: int) -> tuple[int, ...]:
    if x == 0:
        return ()
    return maximal_elements(s for s in b.sets if _subset(s, x))


def validate_building_set(ground: int, family: Iterable[int], *, ground_is_mask: bool = False) -> BuildingSet:
    """Check both closure axioms and return the canonical building set.

    ``ground`` is the size ``n`` of ``{1..n}`` unless ``ground_is_mask``.
    """
    gmask = ground if ground_is_mask else full_mask(ground)
    if gmask.bit_length() > MAX_GROUND:
        raise GroundSetTooLarge(f"ground set exceeds {MAX_GROUND} elements")
    fam = sorted(set(family), key=mask_key)
    if not fam:
        raise InvalidInput("family is empty")
    for s in fam:
        if s == 0:
            raise EmptyMember("empty member")
        if not _subset(s, gmask):
            raise InvalidInput(f"member {to_elements(s)} not inside the ground set")
    members = set(fam)
    for i in bits(gmask):
        if (1 << i) not in members:
            raise MissingSingleton(i + 1)
    for a, b in itertools.combinations(fam, 2):
        if a & b and (a | b) not in members:
            raise NotUnionClosed(frozenset(to_elements(a)), frozenset(to_elements(b)))
    return BuildingSet(gmask, tuple(fam))


def restriction(b: BuildingSet, c: int) -> BuildingSet:
    if c == 0:
        raise EmptySubset("restriction to the empty set")
    if not _subset(c, b.ground):
        raise InvalidInput("restriction target not inside the ground set")
    return BuildingSet(c, tuple(s for s in b.sets if _subset(s, c)))


def components(b: BuildingSet) -> list[tuple[int, BuildingSet]]:
    """``B_max`` paired with the connected restrictions ``B|_C``."""
    return [(c, restriction(b, c)) for c in b.maximal]


@dataclass(frozen=True)
class SimpleGraph:
    """Undirected simple graph on nodes ``1..nodes``; edges stored as ``(i, j)`` with ``i < j``."""

    nodes: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        if self.nodes < 1:
            raise InvalidInput("a graph needs at least one node")
        if self.nodes > MAX_GROUND:
            raise GroundSetTooLarge(f"{self.nodes} nodes exceeds {MAX_GROUND}")
        for i, j in self.edges:
            if not (1 <= i < j <= self.nodes):
                raise InvalidInput(f"bad edge ({i}, {j})")

    @classmethod
    def from_edges(cls, nodes: int, edges: Iterable[Iterable[int]]) -> "SimpleGraph":
        norm = set()
        for e in edges:
            i, j = e
            if i == j:
                raise InvalidInput(f"loop at node {i}")
            norm.add((min(i, j), max(i, j)))
        return cls(nodes, frozenset(norm))

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        adj = [0] * self.nodes
        for i, j in self.edges:
            adj[i - 1] |= 1 << (j - 1)
            adj[j - 1] |= 1 << (i - 1)
        return tuple(adj)

    @property
    def vertex_mask(self) -> int:
        return (1 << self.nodes) - 1

    def degree(self, v: int) -> int:
        """Degree of the 0-based node ``v``."""
        return self.adjacency[v].bit_count()

    def is_induced_connected(self, mask: int) -> bool:
        if mask == 0:
            return False
        adj = self.adjacency
        seen = mask & -mask
        frontier = seen
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= adj[v]
            nxt &= mask & ~seen
            seen |= nxt
            frontier = nxt
        return seen == mask

    def component_masks(self) -> list[int]:
        rest = self.vertex_mask
        adj = self.adjacency
        out = []
        while rest:
            seen = rest & -rest
            frontier = seen
            while frontier:
                nxt = 0
                for v in bits(frontier):
                    nxt |= adj[v]
                nxt &= ~seen
                seen |= nxt
                frontier = nxt
            out.append(seen)
            rest &= ~seen
        return out

    def is_connected(self) -> bool:
        return len(self.component_masks()) == 1

    def induced_edge_count(self, mask: int) -> int:
        adj = self.adjacency
        return sum((adj[v] & mask).bit_count() for v in bits(mask)) // 2

    def induced(self, mask: int) -> "SimpleGraph":
        """Induced subgraph, relabelled to ``1..|mask|`` in ascending order."""
        pos = {v: k for k, v in enumerate(bits(mask))}
        return SimpleGraph(
            len(pos),
            frozenset((pos[i - 1] + 1, pos[j - 1] + 1) for i, j in self.edges if (i - 1) in pos and (j - 1) in pos),
        )

    def relabel(self, perm: list[int]) -> "SimpleGraph":
        """``perm`` maps 0-based node ``v`` to ``perm[v]``."""
        return SimpleGraph.from_edges(self.nodes, ((perm[i - 1] + 1, perm[j - 1] + 1) for i, j in self.edges))


def graphical_building_set(g: SimpleGraph) -> BuildingSet:
    """All nonempty node subsets inducing a connected subgraph."""
    family = [m for m in range(1, 1 << g.nodes) if g.is_induced_connected(m)]
    return BuildingSet(g.vertex_mask, tuple(sorted(family, key=mask_key)))


# --- nested sets -----------------------------------------------------------


def _disjoint_union_hits(members: frozenset[int], partial: list[int], new: int) -> bool:
    """True if some union of ``new`` with >=1 pairwise disjoint sets of ``partial`` lies in ``members``.

    ``partial`` must already be pairwise disjoint from ``new``.
    """

    def rec(start: int, acc: int) -> bool:
        for k in range(start, len(partial)):
            s = partial[k]
            if s & acc:
                continue
            u = acc | s
            if u in members or rec(k + 1, u):
                return True
        return False

    return rec(0, new)


def _compatible(members: frozenset[int], current: list[int], new: int) -> bool:
    disjoint = []
    for s in current:
        inter = s & new
        if inter == 0:
            disjoint.append(s)
        elif inter != s and inter != new:
            return False
    return not _disjoint_union_hits(members, disjoint, new)


def is_nested(b: BuildingSet, n: Iterable[int]) -> bool:
    """Both nested-set conditions, checked over every family of pairwise disjoint members."""
    ms = list(dict.fromkeys(n))
    top = set(b.maximal)
    for s in ms:
        if s not in b.members:
            raise MemberNotInB(f"{to_elements(s)} is not in B")
        if s in top:
            raise MemberIsBMax(f"{to_elements(s)} is a B-component")
    for a, c in itertools.combinations(ms, 2):
        inter = a & c
        if inter and inter != a and inter != c:
            return False
    # any family of >= 2 pairwise disjoint members
    def rec(start, acc, count):
        for k in range(start, len(ms)):
            s = ms[k]
            if s & acc:
                continue
            u = acc | s
            if count >= 1 and u in b.members:
                return True
            if rec(k + 1, u, count + 1):
                return True
        return False

    return not rec(0, 0, 0)


def nested_complex(b: BuildingSet) -> list[frozenset[int]]:
    """All nested sets, by depth-first extension in canonical order."""
    cand = b.proper
    members = b.members
    out: list[frozenset[int]] = []

    def rec(start: int, current: list[int]):
        out.append(frozenset(current))
        for k in range(start, len(cand)):
            x = cand[k]
            if _compatible(members, current, x):
                current.append(x)
                rec(k + 1, current)
                current.pop()

    rec(0, [])
    return out


def _mns_connected(b: BuildingSet, c: int, memo: dict[int, list[frozenset[int]]]) -> list[frozenset[int]]:
    """Maximal nested sets of the connected restriction ``B|_c``, without ``c`` itself."""
    if c in memo:
        return memo[c]
    if c.bit_count() == 1:
        memo[c] = [frozenset()]
        return memo[c]
    out = []
    for i in bits(c):
        comps = b.max_within(c & ~(1 << i))
        subs = [_mns_connected(b, k, memo) for k in comps]
        base = frozenset(comps)
        for combo in itertools.product(*subs):
            out.append(base.union(*combo))
    memo[c] = out
    return out


def nested_sort_key(n: Iterable[int]) -> tuple:
    return tuple(sorted(mask_key(s) for s in n))


def maximal_nested_sets(b: BuildingSet) -> list[frozenset[int]]:
    """The inclusion-maximal nested sets.

    Each node of a maximal nested set (together with its B-component) owns
    exactly one element; removing it splits the node into B-components of the
    remainder, which are the children.  Recursing over that choice yields each
    maximal nested set exactly once.
    """
    memo: dict[int, list[frozenset[int]]] = {}
    per_component = [_mns_connected(b, c, memo) for c in b.maximal]
    out = [frozenset().union(*combo) for combo in itertools.product(*per_component)]
    return sorted(out, key=nested_sort_key)


def maximal_nested_sets_bruteforce(b: BuildingSet) -> list[frozenset[int]]:
    """Maximal faces of :func:`nested_complex`; independent of the recursion above."""
    faces = nested_complex(b)
    faceset = set(faces)
    out = [f for f in faces if not any((f | {x}) in faceset for x in b.proper if x not in f)]
    return sorted(out, key=nested_sort_key)


# --- isomorphism -----------------------------------------------------------


def _element_profile(b: BuildingSet, i: int) -> tuple[int, ...]:
    return tuple(sorted(s.bit_count() for s in b.sets if s >> i & 1))


def are_isomorphic(b1: BuildingSet, b2: BuildingSet) -> bool:
    """Backtracking search for a ground-set bijection carrying one family onto the other."""
    if b1.size != b2.size or len(b1.sets) != len(b2.sets):
        return False
    if sorted(s.bit_count() for s in b1.sets) != sorted(s.bit_count() for s in b2.sets):
        return False
    src = list(bits(b1.ground))
    dst = list(bits(b2.ground))
    prof1 = {i: _element_profile(b1, i) for i in src}
    prof2 = {j: _element_profile(b2, j) for j in dst}
    if sorted(prof1.values()) != sorted(prof2.values()):
        return False
    # most constrained elements first
    src.sort(key=lambda i: (sum(1 for j in dst if prof2[j] == prof1[i]), i))
    mapping: dict[int, int] = {}
    used = 0
    mapped_src = 0

    def image(mask):
        out = 0
        for i in bits(mask):
            out |= 1 << mapping[i]
        return out

    def consistent(new_src):
        for s in b1.sets:
            if s >> new_src & 1 and s & ~mapped_src == 0:
                if image(s) not in b2.members:
                    return False
        return True

    def rec(k):
        nonlocal used, mapped_src
        if k == len(src):
            return True
        i = src[k]
        for j in dst:
            if used >> j & 1 or prof2[j] != prof1[i]:
                continue
            mapping[i] = j
            used |= 1 << j
            mapped_src |= 1 << i
            if consistent(i) and rec(k + 1):
                return True
            used &= ~(1 << j)
            mapped_src &= ~(1 << i)
            del mapping[i]
        return False

    return rec(0)


def disjoint_union(parts: Iterable[BuildingSet]) -> BuildingSet:
    """Place building sets on consecutive blocks of a fresh ground set."""
    offset = 0
    ground = 0
    family: list[int] = []
    for b in parts:
        perm = {i: offset + k for k, i in enumerate(bits(b.ground))}
        moved = b.relabel(perm)
        ground |= moved.ground
        family.extend(moved.sets)
        offset += b.size
    if offset > MAX_GROUND:
        raise GroundSetTooLarge("disjoint union too large")
    return BuildingSet(ground, tuple(sorted(family, key=mask_key)))


def normalize_ground(b: BuildingSet) -> BuildingSet:
    """Relabel the ground set to ``{1..|S|}`` preserving order."""
    return b.relabel({i: k for k, i in enumerate(bits(b.ground))})
