"""Enumeration up to isomorphism and the table / cross-validation drivers."""

from __future__ import annotations

import itertools
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .combinatorics import (
    BuildingSet,
    SimpleGraph,
    disjoint_union,
    full_mask,
    graphical_building_set,
    mask_key,
    validate_building_set,
)
from .criteria import (
    building_set_fano,
    building_set_weak_fano,
    cubeahedron_fano,
    cubeahedron_weak_fano,
    graph_fano,
    graph_weak_fano,
    root_system_fano_weak_fano,
)
from .errors import GroundSetTooLarge, InvalidInput, SearchBudgetExceeded
from .fan import Fan, fan_of_building_set, is_fano_oracle, is_weak_fano_oracle, product_fan

MAX_GRAPH_NODES = 8
MAX_UNFILTERED = 5
MAX_FANO_FILTERED = 6
DEFAULT_BUDGET = 10**8
EXTENDED_BUDGET = 10**9


@dataclass(frozen=True)
class Row:
    param: int
    total: int
    positive: int

    def __post_init__(self):
        if self.positive > self.total:
            raise ValueError("positive exceeds total")


@dataclass
class EnumerationReport:
    name: str
    rows: list[Row]
    provenance: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "table": self.name,
            "rows": [{"param": r.param, "total": r.total, "positive": r.positive} for r in self.rows],
            "provenance": self.provenance,
        }

    def to_text(self) -> str:
        head = {"table1": ("nodes", "connected graphs", "weak Fano"),
                "table3": ("nodes", "connected graphs", "weak Fano cubeahedra"),
                "table2": ("dim", "Fano building sets", "distinct varieties")}.get(self.name, ("param", "total", "positive"))
        lines = ["\t".join(head)]
        lines += [f"{r.param}\t{r.total}\t{r.positive}" for r in self.rows]
        return "\n".join(lines)


# --- graphs -------------------------------------------------------------------------


def _vertex_invariant(g: SimpleGraph, v: int) -> tuple:
    adj = g.adjacency
    return (g.degree(v), tuple(sorted(adj[u].bit_count() for u in range(g.nodes) if adj[v] >> u & 1)))


def graph_canonical_form(g: SimpleGraph) -> tuple[int, int]:
    """``(n, code)`` minimized over relabelings that respect a vertex-invariant ordering."""
    n = g.nodes
    if n > MAX_GRAPH_NODES:
        raise GroundSetTooLarge(f"{n} nodes exceeds {MAX_GRAPH_NODES}")
    adj = g.adjacency
    inv = [_vertex_invariant(g, v) for v in range(n)]
    classes = [sorted(v for v in range(n) if inv[v] == key) for key in sorted(set(inv))]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    best = None
    for parts in itertools.product(*(itertools.permutations(c) for c in classes)):
        order = [v for p in parts for v in p]
        code = 0
        for bit, (i, j) in enumerate(pairs):
            if adj[order[i]] >> order[j] & 1:
                code |= 1 << bit
        if best is None or code < best:
            best = code
    return n, best or 0


def _graph_from_code(n: int, code: int) -> SimpleGraph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return SimpleGraph.from_edges(n, [(i + 1, j + 1) for bit, (i, j) in enumerate(pairs) if code >> bit & 1])


@lru_cache(maxsize=None)
def _connected_codes(n: int) -> tuple[int, ...]:
    if n == 1:
        return (0,)
    found = set()
    for code in _connected_codes(n - 1):
        base = _graph_from_code(n - 1, code)
        edges = [tuple(e) for e in base.edges]
        # every connected graph has a vertex whose deletion keeps it connected
        for nbrs in range(1, 1 << (n - 1)):
            extra = [(i + 1, n) for i in range(n - 1) if nbrs >> i & 1]
            found.add(graph_canonical_form(SimpleGraph.from_edges(n, edges + extra))[1])
    return tuple(sorted(found))


def enumerate_connected_graphs(n: int) -> list[SimpleGraph]:
    if not 1 <= n <= MAX_GRAPH_NODES:
        raise GroundSetTooLarge(f"graph enumeration supports 1..{MAX_GRAPH_NODES} nodes")
    return [_graph_from_code(n, c) for c in _connected_codes(n)]


# --- building sets ----------------------------------------------------------------------


def _candidates(n: int) -> list[int]:
    S = full_mask(n)
    return sorted((m for m in range(1, S) if m.bit_count() >= 2), key=mask_key)


def _connected_labeled(n: int, fano: bool, budget: int) -> Iterable[tuple[int, ...]]:
    """Connected building sets on ``{1..n}``, depth first over the candidates.

    Unions forced by a new member are added immediately; a forced union that
    was already rejected kills the branch.  With ``fano`` an overlapping pair
    whose union is not ``S`` prunes (the union is fixed once both are in).
    """
    S = full_mask(n)
    cands = _candidates(n)
    pos = {c: k for k, c in enumerate(cands)}
    base = [1 << i for i in range(n)] + ([S] if n > 1 else [])
    steps = 0

    def close(fam: set[int], new: int, k: int) -> list[int] | None:
        added = [new]
        queue = [new]
        present = fam | {new}
        while queue:
            x = queue.pop()
            for y in list(present):
                inter = x & y
                if not inter or inter == x or inter == y:
                    continue
                u = x | y
                if fano and u != S:
                    return None
                if u in present:
                    continue
                if pos.get(u, len(cands)) < k:
                    return None
                present.add(u)
                added.append(u)
                queue.append(u)
        return added

    def rec(k: int, fam: set[int]):
        nonlocal steps
        steps += 1
        if steps > budget:
            raise SearchBudgetExceeded(f"building-set enumeration exceeded {budget} steps")
        while k < len(cands) and cands[k] in fam:
            k += 1
        if k == len(cands):
            yield tuple(sorted(fam, key=mask_key))
            return
        c = cands[k]
        yield from rec(k + 1, fam)
        added = close(fam, c, k)
        if added is not None:
            yield from rec(k + 1, fam | set(added))

    if n == 1:
        yield (1,)
        return
    yield from rec(0, set(base))


@lru_cache(maxsize=None)
def _perm_table(n: int) -> np.ndarray:
    """``T[p, m]`` = image of subset ``m`` under the ``p``-th permutation."""
    perms = list(itertools.permutations(range(n)))
    T = np.zeros((len(perms), 1 << n), dtype=np.int64)
    for p, perm in enumerate(perms):
        for m in range(1 << n):
            T[p, m] = sum(1 << perm[i] for i in range(n) if m >> i & 1)
    return T


def family_canonical_key(n: int, family: Sequence[int]) -> int:
    """Least characteristic vector (over ``2^S``) of the family over all relabelings."""
    T = _perm_table(n)
    imgs = T[:, np.asarray(family, dtype=np.int64)]
    if n <= 6:
        words = np.bitwise_or.reduce(np.left_shift(np.uint64(1), imgs.astype(np.uint64)), axis=1)
        return int(words.min())
    return min(sum(1 << int(x) for x in row) for row in imgs)


@lru_cache(maxsize=None)
def _connected_classes(n: int, fano: bool) -> tuple[BuildingSet, ...]:
    limit = MAX_FANO_FILTERED if fano else MAX_UNFILTERED
    if n > limit:
        raise SearchBudgetExceeded(f"building-set enumeration on {n} elements exceeds the supported range")
    budget = EXTENDED_BUDGET if n >= 6 else DEFAULT_BUDGET
    seen: dict[int, tuple[int, ...]] = {}
    for fam in _connected_labeled(n, fano, budget):
        key = family_canonical_key(n, fam)
        if key not in seen:
            seen[key] = fam
    out = []
    for key in sorted(seen):
        b = validate_building_set(full_mask(n), seen[key], ground_is_mask=True)
        if fano and not building_set_fano(b).fano:
            continue
        out.append(b)
    return tuple(out)


def connected_building_sets(n: int, fano_filter: bool = False) -> list[BuildingSet]:
    """Connected classes on exactly ``n`` elements."""
    if n < 1:
        raise InvalidInput("n must be positive")
    return list(_connected_classes(n, fano_filter))


def _multisets(total: int, parts_by_size: dict[int, Sequence[BuildingSet]], min_parts: int = 2):
    """Multisets of connected classes whose sizes sum to ``total``."""
    catalog = [(s, i) for s in sorted(parts_by_size) for i in range(len(parts_by_size[s]))]

    def rec(start, remaining, acc):
        if remaining == 0:
            if len(acc) >= min_parts:
                yield list(acc)
            return
        for k in range(start, len(catalog)):
            s, i = catalog[k]
            if s > remaining:
                continue
            acc.append(parts_by_size[s][i])
            yield from rec(k, remaining - s, acc)
            acc.pop()

    yield from rec(0, total, [])


def building_sets_of_size(n: int, connected_only: bool = False, fano_filter: bool = False) -> list[BuildingSet]:
    """Classes on exactly ``n`` elements."""
    out = connected_building_sets(n, fano_filter)
    if connected_only:
        return out
    parts = {m: connected_building_sets(m, fano_filter) for m in range(1, n)}
    out += [disjoint_union(ms) for ms in _multisets(n, parts)]
    return out


def enumerate_building_sets(n: int, connected_only: bool = False, fano_filter: bool = False) -> list[BuildingSet]:
    """One representative per isomorphism class, over ground sets of size ``1..n``."""
    limit = MAX_FANO_FILTERED if fano_filter else MAX_UNFILTERED
    if n > limit:
        raise SearchBudgetExceeded(f"n={n} exceeds {limit} for this enumeration")
    out = []
    for m in range(1, n + 1):
        out += building_sets_of_size(m, connected_only, fano_filter)
    return out


def labeled_building_sets(n: int) -> int:
    """Number of building sets on the labeled ground set ``{1..n}`` (any connectivity)."""
    if n > 4:
        raise SearchBudgetExceeded("labeled counts are only tabulated for n <= 4")
    S = full_mask(n)
    cands = [m for m in range(1, S + 1) if m.bit_count() >= 2]
    count = 0
    for choice in range(1 << len(cands)):
        fam = {1 << i for i in range(n)} | {c for k, c in enumerate(cands) if choice >> k & 1}
        if all(not (a & c) or (a | c) in fam for a in fam for c in fam):
            count += 1
    return count


# --- tables ----------------------------------------------------------------------------------


def table1(max_nodes: int = 6) -> EnumerationReport:
    rows = []
    for n in range(1, max_nodes + 1):
        gs = enumerate_connected_graphs(n)
        rows.append(Row(n, len(gs), sum(graph_weak_fano(g).weak_fano for g in gs)))
    return EnumerationReport("table1", rows, {"criterion": "graph weak Fano (forbidden proper induced cycles/diamonds)"})


def table3(max_nodes: int = 6) -> EnumerationReport:
    rows = []
    for n in range(1, max_nodes + 1):
        gs = enumerate_connected_graphs(n)
        rows.append(Row(n, len(gs), sum(cubeahedron_weak_fano(g).weak_fano for g in gs)))
    return EnumerationReport("table3", rows, {"criterion": "cubeahedron weak Fano (no induced cycle/diamond/claw)"})


def _nf_of_fan(f: Fan) -> str:
    from .polytopes import normal_form, smooth_fano_polytope_of_fan

    return normal_form(smooth_fano_polytope_of_fan(f)).decode()


def _nf_of_building_set(lists_and_size) -> str:
    size, lists = lists_and_size
    return _nf_of_fan(fan_of_building_set(BuildingSet.from_lists(size, lists)))


def _nf_of_product(lists_parts) -> str:
    fans = [fan_of_building_set(BuildingSet.from_lists(size, lists)) for size, lists in lists_parts]
    return _nf_of_fan(product_fan(fans))


def _map(fn: Callable, items: list, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


def _as_payload(b: BuildingSet) -> tuple[int, list[list[int]]]:
    return b.size, [list(x) for x in b.to_lists()]


def _load_checkpoint(path: str | None) -> dict:
    if path and os.path.exists(path):
        with open(path) as fh:
            return json.load(fh)
    return {}


def _save_checkpoint(path: str | None, state: dict) -> None:
    if not path:
        return
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(state, fh, sort_keys=True)
    os.replace(tmp, path)


def table2(max_dim: int = 4, extended: bool = False, checkpoint: str | None = None, jobs: int = 1) -> EnumerationReport:
    """Distinct toric Fano varieties from building sets, per dimension.

    A Fano building set of dimension ``d`` is a product of connected Fano
    ones; the connected classes live on ``d+1`` elements.  Varieties are
    counted by the normal form of their smooth Fano polytope.
    """
    if max_dim < 1:
        raise InvalidInput("max_dim must be >= 1")
    if max_dim >= 5 and not extended:
        raise SearchBudgetExceeded("dimension 5 is an extended run (enable with --extended)")
    if max_dim > 5:
        raise SearchBudgetExceeded("table2 supports dimensions up to 5")
    state = _load_checkpoint(checkpoint)
    connected: dict[int, dict[str, list]] = {int(k): v for k, v in state.get("connected", {}).items()}
    rows_done = {int(k): v for k, v in state.get("rows", {}).items()}
    rows = []
    for d in range(1, max_dim + 1):
        if d not in connected:
            classes = connected_building_sets(d + 1, fano_filter=True)
            payload = [_as_payload(b) for b in classes]
            nfs = _map(_nf_of_building_set, payload, jobs)
            reps: dict[str, list] = {}
            for nf, p in zip(nfs, payload):
                reps.setdefault(nf, p)
            connected[d] = {nf: reps[nf] for nf in sorted(reps)}
            state["connected"] = {str(k): v for k, v in connected.items()}
            _save_checkpoint(checkpoint, state)
        if d in rows_done:
            rows.append(Row(d, *rows_done[d]))
            continue
        varieties = set(connected[d])
        # products: multisets of connected varieties with dimensions summing to d
        by_dim = {k: sorted(connected[k].values()) for k in range(1, d)}
        combos = list(_dim_multisets(d, by_dim))
        varieties |= set(_map(_nf_of_product, combos, jobs))
        total = len(connected_building_sets(d + 1, fano_filter=True)) + len(combos)
        rows_done[d] = [total, len(varieties)]
        state["rows"] = {str(k): v for k, v in rows_done.items()}
        _save_checkpoint(checkpoint, state)
        rows.append(Row(d, total, len(varieties)))
    return EnumerationReport(
        "table2",
        rows,
        {"criterion": "building-set Fano pair condition", "dedup": "smooth Fano polytope normal form", "extended": extended},
    )


def _dim_multisets(d: int, by_dim: dict[int, list]):
    catalog = [(k, rep) for k in sorted(by_dim) for rep in by_dim[k]]

    def rec(start, remaining, acc):
        if remaining == 0:
            if len(acc) >= 2:
                yield [tuple(x) for x in acc]
            return
        for i in range(start, len(catalog)):
            k, rep = catalog[i]
            if k <= remaining:
                acc.append(rep)
                yield from rec(i, remaining - k, acc)
                acc.pop()

    yield from rec(0, d, [])


# --- cross validation ---------------------------------------------------------------------------

CORPORA = ("graphs<=5", "building-sets<=4", "cubeahedra<=4", "roots<=3")
ROOT_TYPES = ("A1", "A2", "A3", "B2", "B3", "C3", "G2", "A1xA1", "A1xB2")


def _check_graph(edges_n) -> dict | None:
    n, edges = edges_n
    g = SimpleGraph.from_edges(n, edges)
    f = fan_of_building_set(graphical_building_set(g))
    direct = (graph_fano(g), graph_weak_fano(g).weak_fano)
    oracle = (is_fano_oracle(f), is_weak_fano_oracle(f))
    return None if direct == oracle else {"graph": [n, edges], "criterion": direct, "oracle": oracle}


def _check_cube(edges_n) -> dict | None:
    from .cubeahedra import cubeahedron_fan

    n, edges = edges_n
    g = SimpleGraph.from_edges(n, edges)
    f = cubeahedron_fan(g)
    direct = (cubeahedron_fano(g), cubeahedron_weak_fano(g).weak_fano)
    oracle = (is_fano_oracle(f), is_weak_fano_oracle(f))
    return None if direct == oracle else {"graph": [n, edges], "criterion": direct, "oracle": oracle}


def _check_building_set(payload) -> dict | None:
    size, lists = payload
    b = BuildingSet.from_lists(size, lists)
    f = fan_of_building_set(b)
    direct = (building_set_fano(b).fano, building_set_weak_fano(b).weak_fano)
    oracle = (is_fano_oracle(f), is_weak_fano_oracle(f))
    return None if direct == oracle else {"building_set": lists, "criterion": direct, "oracle": oracle}


def _check_root(name: str) -> dict | None:
    from .roots import root_datum, weyl_fan

    r = root_datum(name)
    f = weyl_fan(r)
    c = root_system_fano_weak_fano(r)
    direct = (c.fano, c.weak_fano)
    oracle = (is_fano_oracle(f), is_weak_fano_oracle(f))
    return None if direct == oracle else {"type": name, "criterion": direct, "oracle": oracle}


def _graph_payloads(max_nodes: int) -> list:
    return [(g.nodes, [list(e) for e in g.edges]) for n in range(1, max_nodes + 1) for g in enumerate_connected_graphs(n)]


def cross_validate(corpus: str, jobs: int = 1) -> dict:
    """Run the direct criteria against the wall-degree oracle on a corpus."""
    if corpus == "graphs<=5":
        items, fn = _graph_payloads(5), _check_graph
    elif corpus == "cubeahedra<=4":
        items, fn = _graph_payloads(4), _check_cube
    elif corpus == "building-sets<=4":
        items, fn = [_as_payload(b) for b in enumerate_building_sets(4)], _check_building_set
    elif corpus == "roots<=3":
        items, fn = list(ROOT_TYPES), _check_root
    else:
        raise InvalidInput(f"unknown corpus {corpus!r}; choose from {', '.join(CORPORA)}")
    results = _map(fn, items, jobs)
    bad = [r for r in results if r is not None]
    return {"corpus": corpus, "checked": len(items), "disagreements": bad}


__all__ = [
    "EnumerationReport",
    "Row",
    "graph_canonical_form",
    "enumerate_connected_graphs",
    "connected_building_sets",
    "building_sets_of_size",
    "enumerate_building_sets",
    "labeled_building_sets",
    "family_canonical_key",
    "table1",
    "table2",
    "table3",
    "cross_validate",
    "CORPORA",
]
