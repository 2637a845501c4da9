"""Ground-truth structure: vertex connectivity, minimum cuts, girth and the
maximal / super connectivity predicates."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .graph import Graph, components_within, iter_bits, set_to_bits

ENUMERATION_LIMIT = 16


class RegimeError(ValueError):
    """Exhaustive subset enumeration requested on a graph that is too large."""


@dataclass(frozen=True)
class CutWitness:
    cut: tuple[int, ...]
    components: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {"cut": list(self.cut), "components": [list(c) for c in self.components]}


def _witness(g: Graph, cut_mask: int) -> CutWitness:
    comps = components_within(g.adj, g.full_mask & ~cut_mask)
    parts = sorted((tuple(iter_bits(c)) for c in comps), key=lambda c: (len(c), c))
    return CutWitness(tuple(iter_bits(cut_mask)), tuple(parts))


def _local_cut(g: Graph, s: int, t: int, limit: int) -> tuple[int, int]:
    """Minimum s-t vertex separator size (capped at ``limit``) and one separator.

    Unit-capacity max flow on the split graph: vertex v becomes v_in -> v_out
    with capacity 1, each edge uv becomes v_out -> u_in and u_out -> v_in.
    Node ids: v_in = 2v, v_out = 2v + 1.
    """
    n = g.n
    cap: dict[tuple[int, int], int] = {}
    nbrs: list[list[int]] = [[] for _ in range(2 * n)]

    def arc(x: int, y: int, c: int) -> None:
        if (x, y) not in cap:
            nbrs[x].append(y)
            nbrs[y].append(x)
            cap.setdefault((y, x), 0)
        cap[(x, y)] = cap.get((x, y), 0) + c

    big = n + 1
    for v in range(n):
        arc(2 * v, 2 * v + 1, big if v in (s, t) else 1)
        for u in iter_bits(g.adj[v]):
            arc(2 * v + 1, 2 * u, big)
    src, sink = 2 * s + 1, 2 * t
    flow = 0
    while flow < limit:
        prev = {src: src}
        queue = deque([src])
        while queue and sink not in prev:
            x = queue.popleft()
            for y in nbrs[x]:
                if y not in prev and cap[(x, y)] > 0:
                    prev[y] = x
                    queue.append(y)
        if sink not in prev:
            break
        y = sink
        while y != src:
            x = prev[y]
            cap[(x, y)] -= 1
            cap[(y, x)] += 1
            y = x
        flow += 1
    # vertices whose in-node is reachable but out-node is not form the separator
    seen = {src}
    queue = deque([src])
    while queue:
        x = queue.popleft()
        for y in nbrs[x]:
            if y not in seen and cap[(x, y)] > 0:
                seen.add(y)
                queue.append(y)
    sep = set_to_bits(v for v in range(n) if 2 * v in seen and 2 * v + 1 not in seen)
    return flow, sep


def vertex_connectivity(g: Graph) -> tuple[int, CutWitness]:
    """kappa(G) with a minimum cut, via max flow between non-adjacent pairs.

    Complete graphs get kappa = n - 1 with the cut {1, ..., n-1} (leaving K_1);
    disconnected graphs get kappa = 0 with an empty cut.
    """
    n = g.n
    if n <= 1:
        return 0, CutWitness((), ((0,),) if n else ())
    if not g.is_connected():
        return 0, _witness(g, 0)
    if g.is_complete():
        return n - 1, _witness(g, g.full_mask & ~1)
    best, best_cut = n - 1, None
    # Even's scheme: some vertex among the first kappa+1 lies outside a minimum cut
    i = 0
    while i <= best and i < n:
        for j in range(i + 1, n):
            if g.has_edge(i, j):
                continue
            size, sep = _local_cut(g, i, j, best)
            if size < best or best_cut is None and size <= best:
                best, best_cut = size, sep
        i += 1
    return best, _witness(g, best_cut)


def _disconnects(g: Graph, cut: int) -> bool:
    return len(components_within(g.adj, g.full_mask & ~cut)) >= 2


def connectivity_by_subsets(g: Graph) -> int:
    """kappa by scanning vertex subsets in increasing size (small n only)."""
    if g.n > ENUMERATION_LIMIT:
        raise RegimeError(f"subset scan needs n <= {ENUMERATION_LIMIT}")
    if not g.is_connected():
        return 0
    for size in range(g.n - 1):
        for cut in combinations(range(g.n), size):
            if _disconnects(g, set_to_bits(cut)):
                return size
    return g.n - 1


def all_min_cuts(g: Graph) -> list[tuple[int, ...]]:
    """Every vertex set of size kappa whose removal disconnects G or leaves K_1."""
    if g.n > ENUMERATION_LIMIT:
        raise RegimeError(f"min-cut enumeration needs n <= {ENUMERATION_LIMIT}")
    if not g.is_connected():
        return []
    if g.is_complete():
        return [c for c in combinations(range(g.n), g.n - 1)]
    kappa, _ = vertex_connectivity(g)
    return [c for c in combinations(range(g.n), kappa) if _disconnects(g, set_to_bits(c))]


def girth(g: Graph) -> float:
    """Length of a shortest cycle, ``math.inf`` for forests."""
    best = math.inf
    for root in range(g.n):
        dist = {root: 0}
        parent = {root: -1}
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in iter_bits(g.adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def is_triangle_free(g: Graph) -> bool:
    for u, v in g.edges():
        if g.adj[u] & g.adj[v]:
            return False
    return True


def is_maximally_connected(g: Graph) -> bool:
    if not g.is_connected():
        return False
    return vertex_connectivity(g)[0] == g.min_degree


def is_super_kappa(g: Graph) -> bool:
    """Every minimum cut leaves a single vertex of minimum degree as a component."""
    if not g.is_connected():
        return False
    if g.is_complete():
        return True
    delta = g.min_degree
    for cut in all_min_cuts(g):
        cmask = set_to_bits(cut)
        comps = components_within(g.adj, g.full_mask & ~cmask)
        if not any(c & (c - 1) == 0 and g.degree(c.bit_length() - 1) == delta for c in comps):
            return False
    return True


@dataclass(frozen=True)
class StructureReport:
    n: int
    m: int
    min_degree: int
    girth: float
    kappa: int
    connected: bool
    triangle_free: bool
    maximally_connected: bool
    super_kappa: bool | None
    witness: CutWitness | None = field(default=None)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "delta": self.min_degree,
            "girth": None if math.isinf(self.girth) else int(self.girth),
            "kappa": self.kappa,
            "connected": self.connected,
            "triangle_free": self.triangle_free,
            "maximally_connected": self.maximally_connected,
            "super_kappa": self.super_kappa,
            "witness": self.witness.to_json() if self.witness else None,
        }


def structure_report(g: Graph) -> StructureReport:
    """All structural ground truth; super-kappa is ``None`` above the enumeration limit."""
    kappa, witness = vertex_connectivity(g)
    connected = g.is_connected()
    delta = g.min_degree
    maximal = connected and kappa == delta
    if not connected:
        sup = False
    elif g.n <= ENUMERATION_LIMIT:
        sup = is_super_kappa(g)
    else:
        sup = None
    return StructureReport(
        n=g.n,
        m=g.m,
        min_degree=delta,
        girth=girth(g),
        kappa=kappa,
        connected=connected,
        triangle_free=is_triangle_free(g),
        maximally_connected=maximal,
        super_kappa=sup,
        witness=witness if connected and kappa < g.n - 1 else None,
    )
