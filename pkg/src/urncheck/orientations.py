"""Orientation counting on ordered multigraphs and its recurrence calculus.

A multigraph has ordered vertices v_1..v_n and ordered edges e_1..e_m (loops
and parallel edges allowed); X denotes the indices of edges incident to the
last vertex.  For S within X, the counts of interest are the orientations
whose out-edges at v_n are exactly the S-indexed ones and in-edges the rest,
subject to either
  * prefix admissibility: v_1..v_d each have indegree and outdegree >= 1, or
  * exact degrees: v_i has indegree = outdegree = a_i for i <= d.
A loop carries no usable direction: it contributes one in- and one out-edge
at its vertex either way, so enumeration assigns bits to non-loop edges only
(a loop at v_n forces every count to zero).

Counts are computed two ways: brute enumeration over all orientations (the
oracle; hot loop in the compiled kernel) and a recurrence engine that
removes one edge at a time via deletion, contraction, and vertex splitting,
with explicit remaps carrying S-indices through the relabelings.  The table
functions return all S at once, indexed by bitmask over sorted(X).

The bridge back to urn measures: the complement-product weights of the
conditional ball-set measures decompose over these counts (endpoint-product
weights p_G), and the two-level subset graph of X weighted by any of the
counts admits an exact flow certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import _kernels
from .bipartite import (
    FlowCertificate,
    WeightedBipartiteGraph,
    find_flow_certificate,
    middle_levels_graph,
    validate_certificate,
)
from .measures import SetMeasure
from .properties import FAIL, INCONCLUSIVE, PASS, PropertyReport
from .rationals import format_rational
from .upsets import EnumerationCapError, point_index, upset_masks
from .urns import (
    UrnModel,
    ball_set_measure_ball,
    ball_set_measure_occ,
    conditioning_probability_ball,
    conditioning_probability_occ,
)

DEFAULT_ORIENTATION_BUDGET = 1 << 22


class OrientationBudgetError(RuntimeError):
    pass


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        for a, b in self.edges:
            if not (1 <= a <= b <= self.n):
                raise ValueError(f"bad edge ({a}, {b}) for n = {self.n}")

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        deg = 0
        for a, b in self.edges:
            deg += (a == v) + (b == v)
        return deg

    def x_set(self) -> frozenset[int]:
        """Indices (1-based) of edges incident to the last vertex."""
        return frozenset(
            j + 1 for j, (a, b) in enumerate(self.edges) if b == self.n
        )

    def x_order(self) -> tuple[int, ...]:
        return tuple(sorted(self.x_set()))

    def loops(self) -> tuple[int, ...]:
        return tuple(
            j + 1 for j, (a, b) in enumerate(self.edges) if a == b
        )

    def endpoints(self, j: int) -> tuple[int, int]:
        return self.edges[j - 1]

    def to_json_dict(self) -> dict:
        return {"vertices": self.n, "edges": [list(e) for e in self.edges]}

    @staticmethod
    def from_json_dict(data) -> "MultiGraph":
        edges = tuple(tuple(sorted((int(a), int(b)))) for a, b in data["edges"])
        return MultiGraph(int(data["vertices"]), edges)


def smask_of(x_order: tuple[int, ...], subset) -> int:
    subset = frozenset(subset)
    if not subset <= set(x_order):
        raise ValueError(f"{sorted(subset)} is not a subset of X = {list(x_order)}")
    return sum(1 << x_order.index(j) for j in subset)


def subset_of_smask(x_order: tuple[int, ...], smask: int) -> frozenset[int]:
    return frozenset(j for pos, j in enumerate(x_order) if (smask >> pos) & 1)


# ---------------------------------------------------------------------------
# explicit orientations (clarity-first oracle; kernels do the bulk counting)


@dataclass(frozen=True)
class Orientation:
    graph: MultiGraph
    bits: tuple[int, ...]  # bit j-1 = 1: e_j points at its larger endpoint

    def __post_init__(self):
        if len(self.bits) != self.graph.m:
            raise ValueError("one bit per edge required")
        for j, (a, b) in enumerate(self.graph.edges):
            if a == b and self.bits[j]:
                raise ValueError("loop bits are canonically 0")

    def out_edges(self, v: int) -> tuple[int, ...]:
        out = []
        for j, (a, b) in enumerate(self.graph.edges):
            if a == b:
                if a == v:
                    out.append(j + 1)
            elif (self.bits[j] and a == v) or (not self.bits[j] and b == v):
                out.append(j + 1)
        return tuple(out)

    def in_edges(self, v: int) -> tuple[int, ...]:
        out = []
        for j, (a, b) in enumerate(self.graph.edges):
            if a == b:
                if a == v:
                    out.append(j + 1)
            elif (self.bits[j] and b == v) or (not self.bits[j] and a == v):
                out.append(j + 1)
        return tuple(out)

    def outdeg(self, v: int) -> int:
        return len(self.out_edges(v))

    def indeg(self, v: int) -> int:
        return len(self.in_edges(v))


def iter_orientations(g: MultiGraph, budget: int | None = None):
    """All orientations; loops carry no choice."""
    free = [j for j, (a, b) in enumerate(g.edges) if a != b]
    limit = DEFAULT_ORIENTATION_BUDGET if budget is None else budget
    if 2 ** len(free) > limit:
        raise OrientationBudgetError(
            f"2^{len(free)} orientations exceed budget {limit}"
        )
    for combo in itertools.product((0, 1), repeat=len(free)):
        bits = [0] * g.m
        for pos, j in enumerate(free):
            bits[j] = combo[pos]
        yield Orientation(g, tuple(bits))


# ---------------------------------------------------------------------------
# brute-force counting (kernel-backed)


def _kernel_args(g: MultiGraph):
    x_order = g.x_order()
    xbit = [-1] * g.m
    for pos, j in enumerate(x_order):
        xbit[j - 1] = pos
    ends_a = [a - 1 for a, _ in g.edges]
    ends_b = [b - 1 for _, b in g.edges]
    return x_order, ends_a, ends_b, xbit


def _check_orientation_budget(g: MultiGraph, budget: int | None):
    limit = DEFAULT_ORIENTATION_BUDGET if budget is None else budget
    free = sum(1 for a, b in g.edges if a != b)
    if 2**free > limit:
        raise OrientationBudgetError(f"2^{free} orientations exceed budget {limit}")


def brute_occ_tables(g: MultiGraph, budget: int | None = None) -> list[list[int]]:
    """tables[d][smask] by exhaustive orientation enumeration, d = 0..n-1."""
    _check_orientation_budget(g, budget)
    x_order, ends_a, ends_b, xbit = _kernel_args(g)
    tables = _kernels.orient_occ_tables(g.n, ends_a, ends_b, xbit, len(x_order))
    return tables[: g.n]


def brute_ball_table(g: MultiGraph, a: tuple[int, ...], budget: int | None = None):
    _check_orientation_budget(g, budget)
    x_order, ends_a, ends_b, xbit = _kernel_args(g)
    return _kernels.orient_ball_table(
        g.n, ends_a, ends_b, xbit, len(x_order), list(a)
    )


def brute_M_occ(g: MultiGraph, d: int, subset, budget: int | None = None) -> int:
    if not 0 <= d <= g.n - 1:
        raise ValueError(f"d must be in 0..n-1, got {d}")
    return brute_occ_tables(g, budget)[d][smask_of(g.x_order(), subset)]


def brute_M_ball(g: MultiGraph, a, subset, budget: int | None = None) -> int:
    a = tuple(int(v) for v in a)
    if len(a) > g.n - 1:
        raise ValueError("a may constrain at most the first n-1 vertices")
    return brute_ball_table(g, a, budget)[smask_of(g.x_order(), subset)]


# ---------------------------------------------------------------------------
# graph transforms with explicit remaps


def permute_vertices(g: MultiGraph, perm: dict[int, int]) -> MultiGraph:
    """Relabel vertices by a bijection; edge order is unchanged."""
    if sorted(perm) != list(range(1, g.n + 1)) or sorted(perm.values()) != list(
        range(1, g.n + 1)
    ):
        raise ValueError("perm must be a bijection on 1..n")
    edges = tuple(
        tuple(sorted((perm[a], perm[b]))) for a, b in g.edges
    )
    return MultiGraph(g.n, edges)


def swap_vertices(g: MultiGraph, u: int, v: int) -> MultiGraph:
    if u == v:
        return g
    perm = {k: k for k in range(1, g.n + 1)}
    perm[u], perm[v] = v, u
    return permute_vertices(g, perm)


def swap_edges(g: MultiGraph, j1: int, j2: int):
    """Exchange two edge positions; remap maps old indices to new ones."""
    remap = {j: j for j in range(1, g.m + 1)}
    if j1 == j2:
        return g, remap
    edges = list(g.edges)
    edges[j1 - 1], edges[j2 - 1] = edges[j2 - 1], edges[j1 - 1]
    remap[j1], remap[j2] = j2, j1
    return MultiGraph(g.n, tuple(edges)), remap


def delete_edge(g: MultiGraph, idx: int):
    """Remove edge idx: it is first swapped into the last position, so the
    old last edge inherits index idx.  Returns (graph, index remap)."""
    if not 1 <= idx <= g.m:
        raise ValueError(f"edge index {idx} out of range")
    m = g.m
    edges = list(g.edges)
    remap = {j: j for j in range(1, m) if j != idx}
    if idx != m:
        edges[idx - 1] = edges[m - 1]
        remap[m] = idx
    del edges[m - 1]
    return MultiGraph(g.n, tuple(edges)), remap


def contract_edge(g: MultiGraph, idx: int):
    """Contract edge idx (not a loop): merged vertex keeps the smaller
    endpoint label, larger labels shift down.  Returns
    (graph, edge remap, vertex remap)."""
    a, b = g.endpoints(idx)
    if a == b:
        raise ValueError("cannot contract a loop")
    g1, remap = delete_edge(g, idx)
    vmap = {}
    for k in range(1, g.n + 1):
        vmap[k] = k if k < b else (a if k == b else k - 1)
    edges = tuple(
        tuple(sorted((vmap[u], vmap[v]))) for u, v in g1.edges
    )
    return MultiGraph(g.n - 1, edges), remap, vmap


def remove_isolated_vertex(g: MultiGraph, v: int):
    if g.degree(v) != 0:
        raise ValueError(f"vertex {v} is not isolated")
    vmap = {k: (k if k < v else k - 1) for k in range(1, g.n + 1) if k != v}
    edges = tuple(
        tuple(sorted((vmap[a], vmap[b]))) for a, b in g.edges
    )
    return MultiGraph(g.n - 1, edges), vmap


def incident_edges(g: MultiGraph, v: int) -> tuple[int, ...]:
    return tuple(
        j + 1 for j, (a, b) in enumerate(g.edges) if v in (a, b)
    )


def perfect_matchings(items):
    """All pairings of an even collection, as tuples of increasing pairs
    sorted by first element (the smallest remaining item anchors each pair)."""
    items = sorted(items)
    if len(items) % 2:
        raise ValueError("cannot pair an odd collection")

    def rec(rest):
        if not rest:
            yield ()
            return
        first = rest[0]
        for i in range(1, len(rest)):
            partner = rest[i]
            for tail in rec(rest[1:i] + rest[i + 1:]):
                yield ((first, partner),) + tail

    return rec(tuple(items))


def split_vertex(g: MultiGraph, v: int, pairing) -> MultiGraph:
    """Replace v by one new vertex per matched pair of its incident edges.

    New vertices are inserted at positions v..v+a-1 (a = number of pairs),
    assigned to pairs in order of their smaller edge index; larger vertex
    labels shift up.  Edge labels are preserved.  Requires no loops at v and
    an even degree, with the pairing a partition of the incident edges.
    """
    inc = incident_edges(g, v)
    if any(g.endpoints(j) == (v, v) for j in inc):
        raise ValueError("cannot split a vertex carrying a loop")
    pairs = sorted(tuple(sorted(p)) for p in pairing)
    flat = sorted(j for p in pairs for j in p)
    if flat != sorted(inc) or len(set(flat)) != len(flat):
        raise ValueError("pairing must partition the incident edges")
    a = len(pairs)
    if a == 0:
        raise ValueError("cannot split an isolated vertex")
    new_vertex = {}
    for rank, (j1, j2) in enumerate(pairs):
        new_vertex[j1] = v + rank
        new_vertex[j2] = v + rank

    def vmap(k: int) -> int:
        return k if k < v else k + a - 1

    edges = []
    for j, (x, y) in enumerate(g.edges, start=1):
        if j in new_vertex:
            other = y if x == v else x
            edges.append(tuple(sorted((new_vertex[j], vmap(other)))))
        else:
            edges.append(tuple(sorted((vmap(x), vmap(y)))))
    return MultiGraph(g.n + a - 1, tuple(edges))


# ---------------------------------------------------------------------------
# recurrence engine


def _translate_table(child_table, parent_x, child_x, remap):
    """Parent table from a child table when X survives an edge remap."""
    positions = []
    for j in parent_x:
        positions.append(child_x.index(remap[j]))
    size = 1 << len(parent_x)
    out = [0] * size
    for sp in range(size):
        sc = 0
        for p, cpos in enumerate(positions):
            if (sp >> p) & 1:
                sc |= 1 << cpos
        out[sp] = child_table[sc]
    return out


@lru_cache(maxsize=1 << 18)
def rec_occ_table(g: MultiGraph, d: int) -> tuple[int, ...]:
    """Prefix-admissible counts for all S, computed by the recurrence.

    Case order: loops first (satisfied, neutral, or fatal at the last
    vertex); then the lowest-index edge not touching v_n, split by where its
    endpoints sit relative to the prefix (delete/contract inside the prefix,
    delete with both prefix depths at the boundary, delete doubling beyond);
    finally the all-edges-at-v_n star, where the count is the indicator that
    S splits every prefix star nontrivially.
    """
    if not 0 <= d <= g.n - 1:
        raise ValueError(f"d must be in 0..n-1, got {d}")
    x_order = g.x_order()
    size = 1 << len(x_order)

    loops = g.loops()
    if loops:
        j = loops[0]
        v = g.endpoints(j)[0]
        if v == g.n:
            return (0,) * size
        if v <= d:
            g1 = swap_vertices(g, v, d)
            g2, remap = delete_edge(g1, j)
            child = rec_occ_table(g2, d - 1)
        else:
            g2, remap = delete_edge(g, j)
            child = rec_occ_table(g2, d)
        return tuple(_translate_table(child, x_order, g2.x_order(), remap))

    inner = [
        j for j, (a, b) in enumerate(g.edges, start=1) if b < g.n
    ]
    if inner:
        j = inner[0]
        a, b = g.endpoints(j)
        if b <= d:
            if g.degree(a) < 2 or g.degree(b) < 2:
                return (0,) * size
            g_del, r_del = delete_edge(g, j)
            t_del = _translate_table(
                rec_occ_table(g_del, d), x_order, g_del.x_order(), r_del
            )
            g_con, r_con, _ = contract_edge(g, j)
            t_con = _translate_table(
                rec_occ_table(g_con, d - 1), x_order, g_con.x_order(), r_con
            )
            # contraction turns each parallel copy of the edge into a loop;
            # loops carry no direction, so the lost bits must be restored
            parallels = sum(
                1
                for jj, ee in enumerate(g.edges, start=1)
                if jj != j and ee == (a, b)
            )
            factor = 1 << parallels
            return tuple(x + factor * y for x, y in zip(t_del, t_con))
        if a <= d:
            if g.degree(a) < 2:
                return (0,) * size
            g1 = swap_vertices(g, a, d)
            g_del, r_del = delete_edge(g1, j)
            child_x = g_del.x_order()
            t_hi = _translate_table(rec_occ_table(g_del, d), x_order, child_x, r_del)
            t_lo = _translate_table(
                rec_occ_table(g_del, d - 1), x_order, child_x, r_del
            )
            return tuple(x + y for x, y in zip(t_hi, t_lo))
        g_del, r_del = delete_edge(g, j)
        child = _translate_table(
            rec_occ_table(g_del, d), x_order, g_del.x_order(), r_del
        )
        return tuple(2 * x for x in child)

    # star base: every edge joins some vertex to v_n, no loops remain
    star_masks = []
    for i in range(1, d + 1):
        mask = 0
        for pos, j in enumerate(x_order):
            if g.endpoints(j)[0] == i:
                mask |= 1 << pos
        star_masks.append(mask)
    table = []
    for s in range(size):
        ok = all((s & bm) != 0 and (s & bm) != bm for bm in star_masks)
        table.append(1 if ok else 0)
    return tuple(table)


@lru_cache(maxsize=1 << 18)
def rec_ball_table(g: MultiGraph, a: tuple[int, ...]) -> tuple[int, ...]:
    """Exact-degree counts for all S, computed by the recurrence.

    Order: degree feasibility and the fatal last-vertex loop; drop satisfied
    (isolated, a_i = 0) prefix vertices; consume prefix loops; split the last
    prefix vertex over all pairings of its edges when a_d >= 2 (dividing by
    a_d!, which must be exact); with a_d = 1 resolve its two edges by the
    position of their other endpoints: contract one of them, or delete both
    (doubling, with the shared prefix requirement decremented), or consume
    an S-bit pair at the last vertex.
    """
    d = len(a)
    if d > g.n - 1:
        raise ValueError("a may constrain at most the first n-1 vertices")
    if any(v < 0 for v in a):
        raise ValueError("a must be nonnegative")
    x_order = g.x_order()
    size = 1 << len(x_order)
    zeros = (0,) * size

    for i in range(1, d + 1):
        if g.degree(i) != 2 * a[i - 1]:
            return zeros
    if any(g.endpoints(j) == (g.n, g.n) for j in g.loops()):
        return zeros

    satisfied = [i for i in range(1, d + 1) if a[i - 1] == 0]
    if satisfied:
        v = satisfied[-1]
        g2, _ = remove_isolated_vertex(g, v)
        a2 = a[: v - 1] + a[v:]
        return rec_ball_table(g2, a2)  # edge indices unchanged

    if d == 0:
        free = sum(
            1 for j, (x, y) in enumerate(g.edges, start=1)
            if x != y and y != g.n
        )
        return (2**free,) * size

    prefix_loops = [
        (j, g.endpoints(j)[0]) for j in g.loops() if g.endpoints(j)[0] <= d
    ]
    if prefix_loops:
        j, v = prefix_loops[0]
        g1 = swap_vertices(g, v, d)
        a1 = list(a)
        a1[v - 1], a1[d - 1] = a1[d - 1], a1[v - 1]
        g2, remap = delete_edge(g1, j)
        a2 = tuple(a1[:-1]) + (a1[-1] - 1,)
        child = rec_ball_table(g2, a2)
        return tuple(_translate_table(child, x_order, g2.x_order(), remap))

    if a[d - 1] >= 2:
        pair_edges = incident_edges(g, d)
        total = [0] * size
        a2 = a[: d - 1] + (1,) * a[d - 1]
        for pairing in perfect_matchings(pair_edges):
            child = rec_ball_table(split_vertex(g, d, pairing), a2)
            for s in range(size):
                total[s] += child[s]
        divisor = factorial(a[d - 1])
        if any(v % divisor for v in total):
            raise AssertionError(
                "splitting sum not divisible by a_d! (implementation bug)"
            )
        return tuple(v // divisor for v in total)

    # a_d == 1: exactly two edge slots at v_d, no loops there
    p, q = incident_edges(g, d)
    other = {}
    for j in (p, q):
        x, y = g.endpoints(j)
        other[j] = y if x == d else x
    if other[p] != other[q] and other[q] == g.n:
        e_idx, f_idx = q, p
    else:
        e_idx, f_idx = p, q
    m = g.m
    g1, r1 = swap_edges(g, f_idx, m)
    e_pos = r1[e_idx]
    g2, r2 = swap_edges(g1, e_pos, m - 1)
    remap = {j: r2[r1[j]] for j in range(1, m + 1)}
    x2 = g2.x_order()

    w = other[f_idx]
    if other[p] != other[q]:
        g_con, r_con, _ = contract_edge(g2, m)
        child = rec_ball_table(g_con, a[: d - 1])
        table2 = _translate_table(child, x2, g_con.x_order(), r_con)
    elif w == g.n:
        g_d1, _ = delete_edge(g2, m)
        g_d2, _ = delete_edge(g_d1, m - 1)
        child = rec_ball_table(g_d2, a[: d - 1])
        pos_m1 = x2.index(m - 1)
        pos_m = x2.index(m)
        keep = [pos for pos in range(len(x2)) if pos not in (pos_m1, pos_m)]
        table2 = [0] * (1 << len(x2))
        for sp in range(1 << len(x2)):
            hits = ((sp >> pos_m1) & 1) + ((sp >> pos_m) & 1)
            if hits != 1:
                continue
            sc = 0
            for cpos, pos in enumerate(keep):
                if (sp >> pos) & 1:
                    sc |= 1 << cpos
            table2[sp] = child[sc]
    else:
        g_d1, _ = delete_edge(g2, m)
        g_d2, _ = delete_edge(g_d1, m - 1)
        if w < d:
            a2 = list(a[: d - 1])
            a2[w - 1] -= 1
            child = rec_ball_table(g_d2, tuple(a2))
        else:
            child = rec_ball_table(g_d2, a[: d - 1])
        table2 = [2 * v for v in child]

    return tuple(_translate_table(table2, x_order, x2, remap))


def rec_M_occ(g: MultiGraph, d: int, subset) -> int:
    return rec_occ_table(g, d)[smask_of(g.x_order(), subset)]


def rec_M_ball(g: MultiGraph, a, subset) -> int:
    return rec_ball_table(g, tuple(int(v) for v in a))[
        smask_of(g.x_order(), subset)
    ]


def occ_count_table(g: MultiGraph, d: int, method: str = "recurrence"):
    """S -> count as a dict keyed by frozensets of edge indices."""
    x_order = g.x_order()
    if method == "recurrence":
        table = rec_occ_table(g, d)
    elif method == "brute":
        table = brute_occ_tables(g)[d]
    else:
        raise ValueError(f"unknown method {method!r}")
    return {
        subset_of_smask(x_order, s): table[s] for s in range(1 << len(x_order))
    }


def ball_count_table(g: MultiGraph, a, method: str = "recurrence"):
    x_order = g.x_order()
    a = tuple(int(v) for v in a)
    if method == "recurrence":
        table = rec_ball_table(g, a)
    elif method == "brute":
        table = brute_ball_table(g, a)
    else:
        raise ValueError(f"unknown method {method!r}")
    return {
        subset_of_smask(x_order, s): table[s] for s in range(1 << len(x_order))
    }


# ---------------------------------------------------------------------------
# orientation counts as normalized-matching weights


def orientation_weight_graph(g: MultiGraph, spec) -> WeightedBipartiteGraph:
    """Two-level subset graph of X weighted by the orientation counts.

    spec is ("occ", d) or ("ball", a).  |X| must be odd.
    """
    x = g.x_set()
    if len(x) % 2 == 0:
        raise ValueError(f"|X| = {len(x)} must be odd")
    kind, arg = spec
    if kind == "occ":
        table = rec_occ_table(g, int(arg))
    elif kind == "ball":
        table = rec_ball_table(g, tuple(int(v) for v in arg))
    else:
        raise ValueError(f"unknown spec kind {kind!r}")
    x_order = g.x_order()
    k = (len(x) - 1) // 2
    weights = {}
    for r in (k, k + 1):
        for c in itertools.combinations(sorted(x), r):
            s = frozenset(c)
            weights[s] = Fraction(table[smask_of(x_order, s)])
    return middle_levels_graph(x, weights)


def verify_orientation_nmp(g: MultiGraph, spec) -> PropertyReport:
    """Certify that the orientation-count weights admit an exact flow."""
    graph = orientation_weight_graph(g, spec)
    cert, violator = find_flow_certificate(graph)
    if cert is None:
        return PropertyReport(
            "orientation-nmp",
            FAIL,
            witness={
                "kind": "hall",
                "graph": g.to_json_dict(),
                "spec": list(spec[1]) if spec[0] == "ball" else spec[1],
                "subset": [sorted(u) for u in violator],
            },
        )
    assert validate_certificate(graph, cert)
    return PropertyReport(
        "orientation-nmp",
        PASS,
        details={"edges_in_certificate": len(cert.omega)},
    )


# ---------------------------------------------------------------------------
# decomposition of measure products over graphs


def _endpoint_choices(n: int, in_x: bool):
    if in_x:
        return [(c, n) for c in range(1, n + 1)]
    return [
        (c, cp) for c in range(1, n) for cp in range(c, n)
    ]


def pg_decomposition_check(model: UrnModel, spec, x_subset) -> PropertyReport:
    """nu(S) nu(X-S) P(Q)^2 == sum over graphs of p_G M_G(S), for all S in X.

    Graphs range over all endpoint choices per edge slot (edge i inside X
    must touch the last vertex, others must not); p_G multiplies the two
    endpoint probabilities of each edge.  The identity pins the
    proportionality constant to P(Q)^-2 exactly.
    """
    m, n = model.balls, model.urns
    x = frozenset(int(j) for j in x_subset)
    if not x <= set(range(1, m + 1)):
        raise ValueError("X must be a set of edge/ball indices in 1..m")
    kind, arg = spec
    if kind == "occ":
        d = int(arg)
        nu = ball_set_measure_occ(model, d)
        pq = conditioning_probability_occ(model, d)
    elif kind == "ball":
        a = tuple(int(v) for v in arg)
        nu = ball_set_measure_ball(model, a)
        pq = conditioning_probability_ball(model, a)
    else:
        raise ValueError(f"unknown spec kind {kind!r}")

    x_order = tuple(sorted(x))
    size = 1 << len(x_order)
    sums = [Fraction(0)] * size
    choice_lists = [
        _endpoint_choices(n, (i in x)) for i in range(1, m + 1)
    ]
    graphs = 0
    for combo in itertools.product(*choice_lists):
        p_g = Fraction(1)
        for i, (c, cp) in enumerate(combo):
            p_g *= model.probs[i][c - 1] * model.probs[i][cp - 1]
        if p_g == 0:
            continue
        graphs += 1
        g = MultiGraph(n, tuple(combo))
        if kind == "occ":
            table = rec_occ_table(g, d)
        else:
            table = rec_ball_table(g, a)
        for s in range(size):
            if table[s]:
                sums[s] += p_g * table[s]

    mismatches = []
    for s in range(size):
        subset = subset_of_smask(x_order, s)
        lhs = nu.point(subset) * nu.point(x - subset) * pq * pq
        if lhs != sums[s]:
            mismatches.append(
                {
                    "subset": sorted(subset),
                    "lhs": format_rational(lhs),
                    "rhs": format_rational(sums[s]),
                }
            )
    details = {
        "graphs_with_mass": graphs,
        "constant": format_rational(1 / (pq * pq)),
        "subsets": size,
    }
    if mismatches:
        return PropertyReport(
            "pg-decomposition",
            FAIL,
            witness={"kind": "pg-decomposition", "mismatches": mismatches},
            details=details,
        )
    return PropertyReport("pg-decomposition", PASS, details=details)


# ---------------------------------------------------------------------------
# union/intersection block reduction of the level inequality


def level_reduction_check(
    nu: SetMeasure, k: int, cap: int | None = None
) -> PropertyReport:
    """Decompose the level-k dominance inequality into union/intersection
    blocks and certify each block.

    For every increasing family A, the global difference
        nu(A, |Z|=k+1) nu(|Z|=k) - nu(A, |Z|=k) nu(|Z|=k+1)
    is the exact sum over blocks (X = S union T, Y = S cap T) of
    complement-product-weighted indicator differences; each block reduces to
    a two-level instance on X minus Y whose flow certificate forces it to be
    nonnegative.  Verified exactly for every increasing A within the cap.
    """
    m = nu.ground
    box = (1,) * m
    try:
        event_masks = upset_masks(box, cap)
    except EnumerationCapError as exc:
        return PropertyReport(
            "level-reduction", INCONCLUSIVE, details={"reason": str(exc)}
        )

    def contains(mask: int, subset: frozenset) -> bool:
        pt = tuple(1 if i in subset else 0 for i in range(1, m + 1))
        return bool((mask >> point_index(box, pt)) & 1)

    # blocks: Y below X, |X| = 2k+1-|Y|
    blocks = []
    universe = list(range(1, m + 1))
    for ysize in range(0, k + 1):
        for y in itertools.combinations(universe, ysize):
            yset = frozenset(y)
            rest = [i for i in universe if i not in yset]
            xsize = 2 * k + 1 - ysize
            if xsize - ysize < 1 or xsize - ysize > len(rest):
                continue
            for extra in itertools.combinations(rest, xsize - ysize):
                blocks.append((frozenset(extra) | yset, yset))

    block_info = []
    cert_by_block = {}
    for xset, yset in blocks:
        xprime = sorted(xset - yset)
        reduced = {frozenset(r): nu.point(frozenset(r) | yset)
                   for size in range(len(xprime) + 1)
                   for r in itertools.combinations(xprime, size)}
        weights = {}
        kp = (len(xprime) - 1) // 2
        for r in (kp, kp + 1):
            for c in itertools.combinations(xprime, r):
                s = frozenset(c)
                weights[s] = reduced[s] * reduced[frozenset(xprime) - s]
        graph = middle_levels_graph(xprime, weights)
        cert, violator = find_flow_certificate(graph)
        cert_by_block[(xset, yset)] = cert
        block_info.append(
            {
                "x": sorted(xset),
                "y": sorted(yset),
                "certificate": cert is not None,
            }
        )
        if cert is None:
            return PropertyReport(
                "level-reduction",
                FAIL,
                witness={
                    "kind": "level-reduction-block",
                    "x": sorted(xset),
                    "y": sorted(yset),
                    "hall_violator": [sorted(u) for u in violator],
                },
                details={"blocks": block_info},
            )

    p_k = sum((w for s, w in nu.mass.items() if len(s) == k), Fraction(0))
    p_k1 = sum((w for s, w in nu.mass.items() if len(s) == k + 1), Fraction(0))
    level_k = [s for s in nu.mass if len(s) == k]
    level_k1 = [s for s in nu.mass if len(s) == k + 1]

    min_block = None
    for mask in event_masks:
        glob = Fraction(0)
        for t in level_k1:
            if contains(mask, t):
                glob += nu.point(t) * p_k
        for s in level_k:
            if contains(mask, s):
                glob -= nu.point(s) * p_k1
        block_total = Fraction(0)
        for xset, yset in blocks:
            xprime = sorted(xset - yset)
            kp = (len(xprime) - 1) // 2
            val = Fraction(0)
            for c in itertools.combinations(xprime, kp):
                s = frozenset(c) | yset
                t = (frozenset(xprime) - frozenset(c)) | yset
                w = nu.point(s) * nu.point(t)
                if w == 0:
                    continue
                val += (int(contains(mask, t)) - int(contains(mask, s))) * w
            if val < 0:
                return PropertyReport(
                    "level-reduction",
                    FAIL,
                    witness={
                        "kind": "level-reduction-negative-block",
                        "x": sorted(xset),
                        "y": sorted(yset),
                        "block_value": format_rational(val),
                    },
                    details={"blocks": block_info},
                )
            if min_block is None or val < min_block:
                min_block = val
            block_total += val
        if block_total != glob:
            return PropertyReport(
                "level-reduction",
                FAIL,
                witness={
                    "kind": "level-reduction-identity",
                    "global": format_rational(glob),
                    "block_sum": format_rational(block_total),
                },
                details={"blocks": block_info},
            )
    return PropertyReport(
        "level-reduction",
        PASS,
        details={
            "blocks": block_info,
            "events": len(event_masks),
            "min_block_value": format_rational(min_block or Fraction(0)),
        },
    )
