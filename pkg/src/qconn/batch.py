"""Vectorised ground truth for many small graphs at once.

A batch stores adjacency rows as an ``(n, N)`` integer array: ``rows[v, i]``
is the neighbour bitset of vertex ``v`` in graph ``i``.  Every quantity the
verifier needs (degrees, kappa by subset scan, super-kappa, girth class,
Q-index of the graph and of its complement) is computed column-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .graph import Graph, pairs_graph6_order, to_graph6
from .structure import girth as scalar_girth

MAX_BATCH_ORDER = 10


def _popcount_table(n: int) -> np.ndarray:
    return np.array([bin(x).count("1") for x in range(1 << n)], dtype=np.int16)


def _lowbit_table(n: int) -> np.ndarray:
    tab = np.zeros(1 << n, dtype=np.int16)
    for x in range(1, 1 << n):
        tab[x] = (x & -x).bit_length() - 1
    return tab


def rows_from_masks(n: int, masks: np.ndarray) -> np.ndarray:
    """Edge bitmasks (graph6 pair order) to adjacency rows."""
    rows = np.zeros((n, len(masks)), dtype=np.uint16)
    for b, (i, j) in enumerate(pairs_graph6_order(n)):
        bit = ((masks >> np.uint64(b)) & np.uint64(1)).astype(np.uint16)
        rows[i] |= bit << np.uint16(j)
        rows[j] |= bit << np.uint16(i)
    return rows


def rows_from_graphs(graphs: list[Graph]) -> np.ndarray:
    n = graphs[0].n
    rows = np.zeros((n, len(graphs)), dtype=np.uint16)
    for i, g in enumerate(graphs):
        if g.n != n:
            raise ValueError("a batch holds graphs of one order")
        rows[:, i] = g.adj
    return rows


def reach(rows: np.ndarray, start: np.ndarray, alive: int | np.ndarray) -> np.ndarray:
    """Vertices reachable from ``start`` inside ``alive`` (bitsets, column-wise)."""
    n = rows.shape[0]
    cur = start & alive
    while True:
        nxt = cur.copy()
        for v in range(n):
            hit = (cur >> np.uint16(v)) & np.uint16(1)
            if hit.any():
                nxt |= (rows[v] & alive) * hit
        if np.array_equal(nxt, cur):
            return cur
        cur = nxt


def connected_mask(rows: np.ndarray, alive: int | None = None) -> np.ndarray:
    n = rows.shape[0]
    full = (1 << n) - 1 if alive is None else alive
    start = np.full(rows.shape[1], full & -full, dtype=np.uint16)
    return reach(rows, start, full) == full


def complement_rows(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[0]
    full = (1 << n) - 1
    out = np.empty_like(rows)
    for v in range(n):
        out[v] = np.uint16(full) ^ rows[v] ^ np.uint16(1 << v)
    return out


def q_indices(rows: np.ndarray, degrees: np.ndarray) -> np.ndarray:
    """Largest signless-Laplacian eigenvalue of every graph (LAPACK, batched)."""
    n, count = rows.shape
    if n == 1:
        return np.zeros(count)
    q = np.zeros((count, n, n))
    for v in range(n):
        for u in range(n):
            if u != v:
                q[:, v, u] = (rows[v] >> np.uint16(u)) & np.uint16(1)
        q[:, v, v] = degrees[v]
    return np.linalg.eigvalsh(q)[:, -1]


@dataclass
class BatchFacts:
    """Column-wise invariants of N connected graphs on n vertices."""

    n: int
    rows: np.ndarray
    degrees: np.ndarray      # (n, N)
    m: np.ndarray
    delta: np.ndarray
    kappa: np.ndarray
    super_kappa: np.ndarray
    min_component: np.ndarray  # smallest component over all minimum cuts (n when complete)
    girth: np.ndarray          # float, inf for trees
    triangle_free: np.ndarray
    q: np.ndarray
    q_bar: np.ndarray
    complement_connected: np.ndarray

    @property
    def size(self) -> int:
        return self.rows.shape[1]

    def graph(self, i: int) -> Graph:
        return Graph(self.n, tuple(int(x) for x in self.rows[:, i]))

    def graph6(self, i: int) -> str:
        return to_graph6(self.graph(i))

    def sorted_degrees(self) -> np.ndarray:
        return np.sort(self.degrees, axis=0)


def _kappa_and_super(rows: np.ndarray, delta: np.ndarray, with_components: bool):
    n, count = rows.shape
    full = (1 << n) - 1
    pop = _popcount_table(n)
    low = _lowbit_table(n)
    kappa = np.full(count, -1, dtype=np.int16)
    sup = np.ones(count, dtype=bool)
    min_comp = np.full(count, n, dtype=np.int16)
    for s in range(n - 1):
        todo = np.nonzero(kappa < 0)[0]
        if todo.size == 0:
            break
        sub = rows[:, todo]
        level = []
        any_disc = np.zeros(todo.size, dtype=bool)
        for cut in combinations(range(n), s):
            cmask = sum(1 << v for v in cut)
            alive = full & ~cmask
            start = np.full(todo.size, alive & -alive, dtype=np.uint16)
            disc = reach(sub, start, alive) != alive
            if disc.any():
                level.append((cmask, disc))
                any_disc |= disc
        hit = todo[any_disc]
        kappa[hit] = s
        if not hit.size:
            continue
        subhit = rows[:, hit]
        mine = any_disc.nonzero()[0]
        for cmask, disc in level:
            d = disc[mine]
            if not d.any():
                continue
            alive = full & ~cmask
            isolated = np.zeros(hit.size, dtype=bool)
            for v in range(n):
                if alive >> v & 1:
                    isolated |= (subhit[v] & np.uint16(alive)) == 0
            sup[hit[d & ~isolated]] = False
            if with_components:
                idx = np.nonzero(d)[0]
                part = subhit[:, idx]
                remaining = np.full(idx.size, alive, dtype=np.uint16)
                smallest = np.full(idx.size, n, dtype=np.int16)
                while remaining.any():
                    live = remaining != 0
                    start = np.where(live, np.uint16(1) << low[remaining].astype(np.uint16), 0).astype(np.uint16)
                    comp = reach(part, start, remaining)
                    sizes = pop[comp]
                    smallest = np.where(live, np.minimum(smallest, sizes), smallest)
                    remaining = remaining & ~comp
                tgt = hit[idx]
                min_comp[tgt] = np.minimum(min_comp[tgt], smallest)
    complete = kappa < 0
    kappa[complete] = n - 1
    return kappa, sup, min_comp


def _girths(n: int, rows: np.ndarray, m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    count = rows.shape[1]
    pop = _popcount_table(n)
    tri = np.zeros(count, dtype=bool)
    c4 = np.zeros(count, dtype=bool)
    for i, j in combinations(range(n), 2):
        common = rows[i] & rows[j]
        edge = ((rows[i] >> np.uint16(j)) & np.uint16(1)).astype(bool)
        tri |= edge & (common != 0)
        c4 |= pop[common] >= 2
    g = np.full(count, math.inf)
    g[tri] = 3
    g[~tri & c4] = 4
    rest = np.nonzero(~tri & ~c4 & (m >= n))[0]
    for i in rest:
        g[i] = scalar_girth(Graph(n, tuple(int(x) for x in rows[:, i])))
    return g, ~tri


def analyze_batch(rows: np.ndarray, with_components: bool = True) -> BatchFacts:
    """Ground truth for a batch of connected graphs."""
    n = rows.shape[0]
    if n > MAX_BATCH_ORDER:
        raise ValueError(f"batch analysis supports n <= {MAX_BATCH_ORDER}")
    pop = _popcount_table(n)
    degrees = pop[rows]
    m = degrees.sum(axis=0) // 2
    delta = degrees.min(axis=0)
    kappa, sup, min_comp = _kappa_and_super(rows, delta, with_components)
    girth, tri_free = _girths(n, rows, m)
    crow = complement_rows(rows)
    cdeg = pop[crow]
    return BatchFacts(
        n=n,
        rows=rows,
        degrees=degrees,
        m=m.astype(np.int64),
        delta=delta.astype(np.int64),
        kappa=kappa.astype(np.int64),
        super_kappa=sup,
        min_component=min_comp,
        girth=girth,
        triangle_free=tri_free,
        q=q_indices(rows, degrees),
        q_bar=q_indices(crow, cdeg),
        complement_connected=connected_mask(crow),
    )
