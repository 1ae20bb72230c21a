"""Second Chern character on torus-invariant surfaces and the 2-Fano test.

For a torus-invariant subvariety ``Y`` the polynomial ``I_Y`` records the
intersection numbers of ``Y`` with monomials in the toric divisors: curves give
linear forms read off wall relations, surfaces symmetric quadratic forms whose
``X_i^2`` coefficient is ``(D_i^2 . Y)``.  Since ``ch2 = sum(D_i^2) / 2``, the
pairing with a surface is half the trace.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .combinatorics import BuildingSet, bits, maximal_elements, maximal_nested_sets, to_elements
from .errors import InvalidInput, NotACone, NotFano, UnsupportedStar
from .fan import Fan, Wall, fan_of_building_set, walls


class IntersectionPolynomial:
    """Integer polynomial of degree <= 2 in variables ``X_r`` (r = ray index).

    Keys are ``(r,)`` for linear and ``(r, s)`` with ``r <= s`` for quadratic terms.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, ...], int] | None = None):
        clean = {}
        for k, v in (terms or {}).items():
            key = tuple(sorted(k))
            if len(key) not in (1, 2):
                raise InvalidInput(f"bad monomial {k}")
            clean[key] = clean.get(key, 0) + int(v)
        self.terms = {k: v for k, v in sorted(clean.items()) if v}

    @classmethod
    def linear(cls, coeffs: Mapping[int, int]) -> "IntersectionPolynomial":
        return cls({(r,): c for r, c in coeffs.items()})

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def __eq__(self, other) -> bool:
        return isinstance(other, IntersectionPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def __add__(self, other: "IntersectionPolynomial") -> "IntersectionPolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return IntersectionPolynomial(out)

    def __neg__(self):
        return IntersectionPolynomial({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntersectionPolynomial({k: other * v for k, v in self.terms.items()})
        if self.degree > 1 or other.degree > 1:
            raise InvalidInput("product would exceed degree 2")
        out: dict[tuple[int, ...], int] = {}
        for (a,), x in self.terms.items():
            for (b,), y in other.terms.items():
                key = (min(a, b), max(a, b))
                out[key] = out.get(key, 0) + x * y
        return IntersectionPolynomial(out)

    __rmul__ = __mul__

    def diagonal_sum(self) -> int:
        return sum(v for k, v in self.terms.items() if len(k) == 2 and k[0] == k[1])

    def format(self, labels: Iterable[str] | None = None) -> str:
        names = list(labels) if labels is not None else None

        def var(r):
            return f"X[{names[r]}]" if names else f"X{r}"

        parts = []
        for k, v in self.terms.items():
            mono = "*".join(var(r) for r in k) if len(k) == 1 or k[0] != k[1] else f"{var(k[0])}^2"
            parts.append(f"{'-' if v < 0 else '+'} {'' if abs(v) == 1 else f'{abs(v)}*'}{mono}")
        s = " ".join(parts)
        return (s[2:] if s.startswith("+ ") else s) or "0"

    def __repr__(self):
        return f"IntersectionPolynomial({self.format()})"


def curve_polynomial(w: Wall) -> IntersectionPolynomial:
    """``X_v + X_v' + sum a_i X_{g_i}`` for the relation ``v + v' + sum a_i g_i = 0``."""
    coeffs = {w.sides[0]: 1, w.sides[1]: 1}
    for g, a in zip(w.generators, w.relation):
        coeffs[g] = coeffs.get(g, 0) + a
    return IntersectionPolynomial.linear(coeffs)


# --- surface stars -------------------------------------------------------------------


@dataclass(frozen=True)
class SurfaceStar:
    """Star of an (n-2)-cone ``tau``: the complete 2-D fan of the surface ``V(tau)``."""

    tau: tuple[int, ...]
    link: tuple[int, ...]  # counter-clockwise in the quotient lattice
    projected: tuple[tuple[int, int], ...]
    self_intersections: tuple[int, ...]
    kind: str  # "ProjectivePlane" | "Hirzebruch" | "Other"
    a: int | None = None
    neg: int | None = None  # link ray whose curve is the negative section
    fib: int | None = None  # link ray whose curve is a fiber
    fan: Fan | None = field(default=None, compare=False, repr=False)

    def to_json(self) -> dict:
        out = {"tau": list(self.tau), "link": list(self.link), "kind": self.kind}
        if self.kind == "Hirzebruch":
            out.update(a=self.a, neg=self.neg, fib=self.fib)
        return out


def _angle_cmp(p, q) -> int:
    def half(v):
        return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1

    hp, hq = half(p), half(q)
    if hp != hq:
        return hp - hq
    cross = p[0] * q[1] - p[1] * q[0]
    return -1 if cross > 0 else (1 if cross < 0 else 0)


def _star_cones(f: Fan, tau: tuple[int, ...]) -> list[tuple[int, ...]]:
    t = set(tau)
    return [c for c in f.max_cones if t.issubset(c)]


def classify_surface_star(f: Fan, tau: Iterable[int]) -> SurfaceStar:
    tau = tuple(sorted(set(tau)))
    if len(tau) != f.dim - 2:
        raise NotACone(f"tau has {len(tau)} rays; surfaces need {f.dim - 2}")
    cones = _star_cones(f, tau)
    if not cones:
        raise NotACone(f"{list(tau)} is not a cone of the fan")
    link = sorted({r for c in cones for r in c if r not in tau})
    # quotient coordinates from one containing cone's basis (tau first)
    first = cones[0]
    rest = [r for r in first if r not in tau]
    basis = [list(f.rays[r]) for r in list(tau) + rest]
    inv = linalg.integer_inverse(basis)
    n = f.dim

    def project(v):
        x = [sum(v[i] * inv[i][k] for i in range(n)) for k in range(n)]
        return (x[n - 2], x[n - 1])

    proj = {r: project(f.rays[r]) for r in link}
    order = sorted(link, key=functools.cmp_to_key(lambda a, b: _angle_cmp(proj[a], proj[b])))
    k = len(order)
    selfs = []
    for i, r in enumerate(order):
        u, left, right = proj[r], proj[order[i - 1]], proj[order[(i + 1) % k]]
        s = (left[0] + right[0], left[1] + right[1])
        # s = c * u for the unimodular 2-D fan
        c = s[0] // u[0] if u[0] else s[1] // u[1]
        if (c * u[0], c * u[1]) != s:
            raise NotACone("star is not a smooth complete 2-D fan")
        selfs.append(-c)
    common = dict(
        tau=tau,
        link=tuple(order),
        projected=tuple(proj[r] for r in order),
        self_intersections=tuple(selfs),
        fan=f,
    )
    if k == 3:
        return SurfaceStar(kind="ProjectivePlane", **common)
    if k == 4:
        lo = min(selfs)
        i = min((j for j in range(4) if selfs[j] == lo), key=lambda j: order[j])
        nbrs = [order[i - 1], order[(i + 1) % 4]]
        return SurfaceStar(kind="Hirzebruch", a=-lo, neg=order[i], fib=min(nbrs), **common)
    return SurfaceStar(kind="Other", **common)


def _curve(s: SurfaceStar, ray: int) -> IntersectionPolynomial:
    key = tuple(sorted(s.tau + (ray,)))
    w = s.fan.wall_index.get(key)
    if w is None:
        raise NotACone(f"{list(key)} is not a wall")
    return curve_polynomial(w)


def surface_polynomial(s: SurfaceStar) -> IntersectionPolynomial:
    if s.kind == "Hirzebruch":
        fib, neg = _curve(s, s.fib), _curve(s, s.neg)
        return s.a * (fib * fib) + 2 * (fib * neg)
    if s.kind == "ProjectivePlane":
        polys = {_curve(s, r) * _curve(s, r) for r in s.link}
        if len(polys) != 1:
            raise AssertionError("line classes disagree on a projective plane")
        return polys.pop()
    raise UnsupportedStar(f"star with {len(s.link)} link rays")


def ch2_dot_surface(s: SurfaceStar) -> Fraction:
    return Fraction(surface_polynomial(s).diagonal_sum(), 2)


def surface_intersection_matrix(f: Fan, tau: Iterable[int]) -> dict[tuple[int, int], int]:
    """``(D_i . D_j . V(tau))`` computed independently of the wall polynomials.

    Restrictions of link divisors use the 2-D fan of the star; a divisor in
    ``tau`` is first moved off the surface by a character ``m`` with
    ``<m, t> = [t == g]`` on ``tau``.  Returns nonzero entries with ``i <= j``.
    """
    s = classify_surface_star(f, tau)
    k = len(s.link)
    local = {}
    for i, r in enumerate(s.link):
        local[(r, r)] = s.self_intersections[i]
        for j in (i - 1, (i + 1) % k):
            q = s.link[j]
            local[(min(r, q), max(r, q))] = 1
    n = f.dim
    cone = _star_cones(f, s.tau)[0]
    basis = [list(f.rays[r]) for r in list(s.tau) + [r for r in cone if r not in s.tau]]
    inv = linalg.integer_inverse(basis)
    # restriction of every divisor meeting S, as a combination of link divisors
    restr: dict[int, dict[int, int]] = {r: {r: 1} for r in s.link}
    for p, g in enumerate(s.tau):
        m = [inv[i][p] for i in range(n)]  # <m, basis row q> = [q == p]
        restr[g] = {r: -sum(a * b for a, b in zip(m, f.rays[r])) for r in s.link}

    def pair(x, y):
        return sum(
            cx * cy * local.get((min(a, b), max(a, b)), 0) for a, cx in restr[x].items() for b, cy in restr[y].items()
        )

    keys = sorted(restr)
    out = {}
    for i, x in enumerate(keys):
        for y in keys[i:]:
            v = pair(x, y)
            if v:
                out[(x, y)] = v
    return out


def ch2_dot_surface_oracle(f: Fan, tau: Iterable[int]) -> Fraction:
    m = surface_intersection_matrix(f, tau)
    return Fraction(sum(v for (i, j), v in m.items() if i == j), 2)


def surface_stars(f: Fan) -> list[tuple[int, ...]]:
    """All (n-2)-cones, in sorted order."""
    if f.dim < 2:
        return []
    out = set()
    for c in f.max_cones:
        for drop in ((i, j) for i in range(len(c)) for j in range(i + 1, len(c))):
            out.add(tuple(r for p, r in enumerate(c) if p not in drop))
    return sorted(out)


# --- 2-Fano ---------------------------------------------------------------------------


def is_projective_space(b: BuildingSet) -> bool:
    """Connected with only the singletons and the ground set."""
    if not b.is_connected:
        return False
    singles = {1 << i for i in bits(b.ground)}
    return set(b.sets) == singles | {b.ground}


@dataclass(frozen=True)
class TwoFanoReport:
    two_fano: bool
    reason: str
    witness_tau: tuple[int, ...] | None = None
    witness_labels: tuple[str, ...] | None = None
    ch2_dot_s: Fraction | None = None
    kind: str | None = None
    scanned: int = 0
    skipped: int = 0

    def to_json(self) -> dict:
        return {
            "two_fano": self.two_fano,
            "reason": self.reason,
            "witness_tau": list(self.witness_labels) if self.witness_labels is not None else None,
            "ch2_dot_s": None if self.ch2_dot_s is None else str(self.ch2_dot_s),
            "kind": self.kind,
            "scanned": self.scanned,
            "skipped": self.skipped,
        }


def two_fano_report(b: BuildingSet) -> TwoFanoReport:
    from .criteria import building_set_fano

    if not building_set_fano(b).fano:
        raise NotFano("2-Fano is only decided for Fano building sets")
    if is_projective_space(b):
        return TwoFanoReport(True, "projective space")
    if not b.is_connected:
        return TwoFanoReport(False, "product")
    f = fan_of_building_set(b)
    walls(f)  # smooth/complete guard
    best = None
    scanned = skipped = 0
    for tau in surface_stars(f):
        s = classify_surface_star(f, tau)
        if s.kind == "Other":
            skipped += 1
            continue
        scanned += 1
        v = ch2_dot_surface(s)
        if best is None or v < best[0]:
            best = (v, s)
    reason = "surface" if f.dim == 2 else "witness"
    if best is None or best[0] > 0:
        return TwoFanoReport(False, reason, scanned=scanned, skipped=skipped)
    v, s = best
    return TwoFanoReport(
        False,
        reason,
        witness_tau=s.tau,
        witness_labels=tuple(f.label(r) for r in s.tau),
        ch2_dot_s=v,
        kind=s.kind if s.kind != "Hirzebruch" else f"Hirzebruch({s.a})",
        scanned=scanned,
        skipped=skipped,
    )


def is_two_fano(b: BuildingSet) -> bool:
    return two_fano_report(b).two_fano


# --- the surfaces used in the necessity argument ------------------------------------


@dataclass(frozen=True)
class ProofSurface:
    case: str  # "1.1", "1.2" or "2"
    nested: frozenset[int]  # N, as building-set masks
    I: int
    K: tuple[int, ...]
    L: tuple[int, ...] = ()
    top: int = 0  # the singleton {n+1} (case 1)
    extra: int = 0  # the singleton {n} (case 1.2)


def _proper_maximal(b: BuildingSet, c: int) -> tuple[int, ...]:
    return maximal_elements(s for s in b.sets if s & ~c == 0 and s != c)


def _max_nested(b: BuildingSet, c: int) -> frozenset[int]:
    return maximal_nested_sets(b.restriction(c))[0]


def proof_surface(b: BuildingSet) -> ProofSurface:
    """The (n-2)-nested set ``N`` whose surface carries ``ch2 <= 0``.

    Needs a connected Fano building set on at least 4 elements that is not
    a projective space.
    """
    from .criteria import building_set_fano

    if not b.is_connected or b.size < 4:
        raise InvalidInput("needs a connected building set on >= 4 elements")
    if not building_set_fano(b).fano:
        raise NotFano("building set is not Fano")
    if is_projective_space(b):
        raise InvalidInput("projective spaces have no such surface")
    S = b.ground
    singles = {1 << i for i in bits(S)}
    rest = [s for s in b.sets if s not in singles and s != S]
    tops = maximal_elements(rest)
    small = [i for i in tops if i.bit_count() <= b.size - 2]
    if small:
        I = small[0]
        K = _proper_maximal(b, I)
        comp = S & ~I
        L = maximal_elements(s for s in b.sets if s & ~comp == 0 and s != comp)
        nested = set(K[2:]) | set(L[2:]) | {I}
        for c in K + L:
            nested |= _max_nested(b, c)
        return ProofSurface("2", frozenset(nested), I, K, L)
    I = tops[0]
    top = S & ~I
    through = [j for j in tops if j & top]
    if not through:
        K = _proper_maximal(b, I)
        nested = set(K[2:])
        for c in K:
            nested |= _max_nested(b, c)
        return ProofSurface("1.1", frozenset(nested), I, K, top=top)
    J = through[0]
    core = I & J
    extra = I & ~J
    K = _proper_maximal(b, core)
    nested = set(K[2:]) | {extra}
    for c in K:
        nested |= _max_nested(b, c)
    return ProofSurface("1.2", frozenset(nested), I, K, top=top, extra=extra)


def proof_polynomial(f: Fan, ps: ProofSurface) -> IntersectionPolynomial:
    """The displayed closed form for ``I_{V(N)}``, in the ray indexing of ``f``."""
    idx = {m: i for i, m in enumerate(f.ray_masks)}
    X = lambda m: IntersectionPolynomial.linear({idx[m]: 1})  # noqa: E731
    ksum = IntersectionPolynomial()
    for k in ps.K:
        ksum = ksum + X(k)
    if ps.case == "2":
        lsum = IntersectionPolynomial()
        for l in ps.L:
            lsum = lsum + X(l)
        return 2 * ((lsum + X(ps.I)) * (ksum - X(ps.I)))
    fib = X(ps.I) + X(ps.top)
    neg = ksum - X(ps.I)
    if ps.case == "1.2":
        neg = neg + X(ps.extra)
    return fib * fib + 2 * (fib * neg)


def proof_tau(f: Fan, ps: ProofSurface) -> tuple[int, ...]:
    idx = {m: i for i, m in enumerate(f.ray_masks)}
    return tuple(sorted(idx[m] for m in ps.nested))


def describe_nested(ps: ProofSurface) -> list[list[int]]:
    return [to_elements(m) for m in sorted(ps.nested)]


__all__ = [
    "IntersectionPolynomial",
    "SurfaceStar",
    "TwoFanoReport",
    "ProofSurface",
    "curve_polynomial",
    "classify_surface_star",
    "surface_polynomial",
    "ch2_dot_surface",
    "surface_intersection_matrix",
    "ch2_dot_surface_oracle",
    "surface_stars",
    "is_projective_space",
    "two_fano_report",
    "is_two_fano",
    "proof_surface",
    "proof_polynomial",
    "proof_tau",
]
