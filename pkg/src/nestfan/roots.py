"""Cartan data and Weyl chamber fans.

The coweight lattice is coordinatized by the fundamental coweights, so the
fundamental chamber is the positive orthant and every chamber is the image of
it under an integral Weyl matrix.  Cartan entries follow
``a_ij = 2(alpha_i, alpha_j) / (alpha_j, alpha_j)`` with Bourbaki numbering.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import IndexOutOfRange, InvalidCartanMatrix, InvalidInput, OrbitTooLarge
from .fan import Fan

ORBIT_LIMIT = 10**6
MAX_WEYL_RANK = 6


@dataclass(frozen=True)
class RootDatum:
    cartan: tuple[tuple[int, ...], ...]
    type_name: str | None = None

    def __post_init__(self):
        validate_cartan(self.cartan)

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @classmethod
    def from_matrix(cls, matrix, type_name=None) -> "RootDatum":
        return cls(tuple(tuple(int(x) for x in row) for row in matrix), type_name)

    @classmethod
    def from_type(cls, name: str) -> "RootDatum":
        return root_datum(name)

    def blocks(self) -> list[list[int]]:
        """Index sets (0-based) of the irreducible components."""
        n = self.rank
        seen: set[int] = set()
        out = []
        for s in range(n):
            if s in seen:
                continue
            comp, stack = [], [s]
            seen.add(s)
            while stack:
                i = stack.pop()
                comp.append(i)
                for j in range(n):
                    if j not in seen and self.cartan[i][j] != 0:
                        seen.add(j)
                        stack.append(j)
            out.append(sorted(comp))
        return out

    def to_json(self) -> dict:
        out = {"cartan": [list(r) for r in self.cartan]}
        if self.type_name:
            out["type"] = self.type_name
        return out


def validate_cartan(m) -> None:
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise InvalidCartanMatrix("Cartan matrix must be square and nonempty")
    for i in range(n):
        if m[i][i] != 2:
            raise InvalidCartanMatrix(f"diagonal entry ({i + 1},{i + 1}) is not 2")
        for j in range(n):
            if i == j:
                continue
            if m[i][j] > 0:
                raise InvalidCartanMatrix(f"off-diagonal entry ({i + 1},{j + 1}) is positive")
            if (m[i][j] == 0) != (m[j][i] == 0):
                raise InvalidCartanMatrix(f"entries ({i + 1},{j + 1}) and ({j + 1},{i + 1}) disagree on zero")
            if m[i][j] * m[j][i] not in (0, 1, 2, 3):
                raise InvalidCartanMatrix(f"product at ({i + 1},{j + 1}) is not crystallographic")


def _bourbaki_gram(letter: str, n: int) -> tuple[list[Fraction], dict[tuple[int, int], Fraction]]:
    """Squared lengths and nonzero off-diagonal inner products of the simple roots."""
    one, half = Fraction(1), Fraction(1, 2)
    if letter == "A" and n >= 1:
        return [Fraction(2)] * n, {(i, i + 1): -one for i in range(n - 1)}
    if letter == "B" and n >= 2:
        return [Fraction(2)] * (n - 1) + [one], {(i, i + 1): -one for i in range(n - 1)}
    if letter == "C" and n >= 2:
        edges = {(i, i + 1): -half for i in range(n - 2)}
        edges[(n - 2, n - 1)] = -one
        return [one] * (n - 1) + [Fraction(2)], edges
    if letter == "D" and n >= 4:
        edges = {(i, i + 1): -one for i in range(n - 2)}
        edges[(n - 3, n - 1)] = -one
        return [Fraction(2)] * n, edges
    if letter == "E" and n in (6, 7, 8):
        edges = {(0, 2): -one, (1, 3): -one, (2, 3): -one}
        for i in range(3, n - 1):
            edges[(i, i + 1)] = -one
        return [Fraction(2)] * n, edges
    if letter == "F" and n == 4:
        return [Fraction(2), Fraction(2), one, one], {(0, 1): -one, (1, 2): -one, (2, 3): -half}
    if letter == "G" and n == 2:
        return [one, Fraction(3)], {(0, 1): Fraction(-3, 2)}
    raise InvalidInput(f"unknown root system type {letter}{n}")


def cartan_of_type(letter: str, n: int) -> tuple[tuple[int, ...], ...]:
    lengths, edges = _bourbaki_gram(letter.upper(), n)

    def inner(i, j):
        if i == j:
            return lengths[i]
        return edges.get((min(i, j), max(i, j)), Fraction(0))

    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            a = 2 * inner(i, j) / lengths[j]
            if a.denominator != 1:
                raise AssertionError("non-integral Cartan entry")
            row.append(int(a))
        rows.append(tuple(row))
    return tuple(rows)


_TYPE_RE = re.compile(r"^\s*([A-Ga-g])_?(\d+)\s*$")


def root_datum(name: str) -> RootDatum:
    """Parse ``"A2"``, ``"B3"``, ``"A2xB3"`` (direct sums with ``x``/``+``)."""
    parts = [p for p in re.split(r"[x+×*]", name.strip()) if p.strip()]
    if not parts:
        raise InvalidInput(f"empty root system name {name!r}")
    blocks = []
    for p in parts:
        m = _TYPE_RE.match(p)
        if not m:
            raise InvalidInput(f"cannot parse root system {p!r}")
        blocks.append(cartan_of_type(m.group(1), int(m.group(2))))
    n = sum(len(b) for b in blocks)
    mat = [[0] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                mat[off + i][off + j] = x
        off += len(b)
    canonical = "x".join(f"{_TYPE_RE.match(p).group(1).upper()}{_TYPE_RE.match(p).group(2)}" for p in parts)
    return RootDatum.from_matrix(mat, canonical)


@dataclass(frozen=True)
class WeylElement:
    """Integral matrix on coweight coordinates (columns are images of the fundamental coweights)."""

    matrix: tuple[tuple[int, ...], ...]

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        a, b = self.matrix, other.matrix
        n = len(a)
        return WeylElement(
            tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))
        )

    def apply(self, v) -> tuple[int, ...]:
        return tuple(sum(row[k] * v[k] for k in range(len(v))) for row in self.matrix)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.matrix)

    @classmethod
    def identity(cls, n: int) -> "WeylElement":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))


def simple_reflection(r: RootDatum, j: int) -> WeylElement:
    """``s_j`` fixes the coweights ``w_i`` (i != j) and sends ``w_j`` to
    ``-w_j - sum_{i != j} a_ij w_i``.  ``j`` is 1-based."""
    n = r.rank
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"reflection index {j} outside 1..{n}")
    jj = j - 1
    m = [[int(i == k) for k in range(n)] for i in range(n)]
    for i in range(n):
        m[i][jj] = -1 if i == jj else -r.cartan[i][jj]
    return WeylElement(tuple(tuple(row) for row in m))


def cartan_column_degrees(r: RootDatum) -> list[int]:
    n = r.rank
    return [sum(r.cartan[i][j] for i in range(n)) for j in range(n)]


def weyl_chambers(r: RootDatum, limit: int = ORBIT_LIMIT) -> list[WeylElement]:
    """Breadth-first orbit of the fundamental chamber under the simple reflections."""
    if r.rank > MAX_WEYL_RANK:
        raise OrbitTooLarge(f"rank {r.rank} exceeds {MAX_WEYL_RANK}")
    gens = [simple_reflection(r, j) for j in range(1, r.rank + 1)]
    start = WeylElement.identity(r.rank)
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        w = queue.popleft()
        for s in gens:
            nxt = w @ s
            if nxt not in seen:
                if len(seen) >= limit:
                    raise OrbitTooLarge(f"Weyl orbit exceeds {limit} chambers")
                seen.add(nxt)
                order.append(nxt)
                queue.append(nxt)
    return order


def weyl_fan(r: RootDatum, limit: int = ORBIT_LIMIT) -> Fan:
    chambers = weyl_chambers(r, limit)
    index: dict[tuple[int, ...], int] = {}
    rays = []
    cones = []
    for w in chambers:
        cone = []
        for j in range(r.rank):
            v = w.column(j)
            if v not in index:
                index[v] = len(rays)
                rays.append(v)
            cone.append(index[v])
        cones.append(cone)
    labels = [_coweight_label(v) for v in rays]
    return Fan.make(r.rank, rays, cones, labels)


def _coweight_label(v) -> str:
    terms = []
    for i, x in enumerate(v):
        if x == 0:
            continue
        coef = "" if abs(x) == 1 else str(abs(x))
        terms.append(("-" if x < 0 else "+") + f"{coef}w{i + 1}")
    s = "".join(terms)
    return s[1:] if s.startswith("+") else s
