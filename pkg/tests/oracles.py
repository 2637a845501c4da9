"""Independent reference implementations used only by the tests.

They deliberately avoid the package's own algorithms: plain edge sets,
exhaustive permutations and subsets, LAPACK eigenvalues.
"""

from __future__ import annotations

from itertools import combinations, permutations

import numpy as np


def edge_set(g) -> set[frozenset[int]]:
    return {frozenset(e) for e in g.edges()}


def connected_on(n: int, edges: set[frozenset[int]], alive: set[int]) -> bool:
    if not alive:
        return True
    start = next(iter(alive))
    seen, stack = {start}, [start]
    while stack:
        u = stack.pop()
        for e in edges:
            if u in e:
                (w,) = e - {u}
                if w in alive and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return seen == alive


def kappa(g) -> int:
    """Smallest vertex set whose removal disconnects (n - 1 for complete graphs)."""
    n, edges = g.n, edge_set(g)
    if not connected_on(n, edges, set(range(n))):
        return 0
    for size in range(n - 1):
        for cut in combinations(range(n), size):
            if not connected_on(n, edges, set(range(n)) - set(cut)):
                return size
    return n - 1


def min_cuts(g) -> list[set[int]]:
    n, edges = g.n, edge_set(g)
    k = kappa(g)
    if k == n - 1:
        return [set(c) for c in combinations(range(n), n - 1)]
    return [set(c) for c in combinations(range(n), k)
            if not connected_on(n, edges, set(range(n)) - set(c))]


def super_kappa(g) -> bool:
    n, edges = g.n, edge_set(g)
    degs = [sum(1 for e in edges if v in e) for v in range(n)]
    delta = min(degs)
    for cut in min_cuts(g):
        rest = set(range(n)) - cut
        isolated = [v for v in rest if not any(v in e and not (e - {v}) <= cut for e in edges)]
        if not any(degs[v] == delta for v in isolated):
            return False
    return True


def isomorphic(g, h) -> bool:
    if g.n != h.n or g.m != h.m:
        return False
    eg, eh = edge_set(g), edge_set(h)
    return any({frozenset(p[v] for v in e) for e in eg} == eh for p in permutations(range(g.n)))


def q_index(g) -> float:
    n = g.n
    if n == 1:
        return 0.0
    a = np.zeros((n, n))
    for u, v in g.edges():
        a[u, v] = a[v, u] = 1
    return float(np.linalg.eigvalsh(np.diag(a.sum(axis=1)) + a)[-1])


def girth(g) -> float:
    """Shortest cycle by testing every vertex sequence (tiny n only)."""
    n, edges = g.n, edge_set(g)
    for length in range(3, n + 1):
        for cyc in permutations(range(n), length):
            if cyc[0] != min(cyc) or cyc[1] > cyc[-1]:
                continue
            if all(frozenset((cyc[i], cyc[(i + 1) % length])) in edges for i in range(length)):
                return length
    return float("inf")


def graph6_from_mask(n: int, mask: int) -> str:
    """graph6 for n <= 62 straight from upper-triangle bits in column order."""
    bits = [(mask >> b) & 1 for b in range(n * (n - 1) // 2)]
    bits += [0] * (-len(bits) % 6)
    body = "".join(chr(63 + int("".join(map(str, bits[i:i + 6])), 2)) for i in range(0, len(bits), 6))
    return chr(63 + n) + body
