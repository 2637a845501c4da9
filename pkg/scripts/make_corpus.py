"""Generate graph6 corpora of connected graphs up to isomorphism.

Every connected graph on n vertices has a vertex whose removal leaves it
connected, so extending each class on n - 1 vertices by one new vertex joined
to every non-empty neighbour set reaches every class on n vertices.  With
``--triangle-free`` the neighbour set must be independent.

    python scripts/make_corpus.py --nmax 8 --triangle-free > tests/data/triangle_free_connected.g6
"""

from __future__ import annotations

import argparse
import sys
from collections import defaultdict
from itertools import combinations

from qconn.graph import Graph, is_isomorphic, to_graph6


def _invariant(g: Graph) -> tuple:
    colours = [g.degree(v) for v in range(g.n)]
    for _ in range(3):
        colours = [hash((colours[v], tuple(sorted(colours[u] for u in g.neighbors(v))))) for v in range(g.n)]
    return g.m, tuple(sorted(colours))


def _independent(g: Graph, verts: tuple[int, ...]) -> bool:
    return all(not g.has_edge(u, v) for u, v in combinations(verts, 2))


def extend(classes: list[Graph], triangle_free: bool) -> list[Graph]:
    buckets: dict[tuple, list[Graph]] = defaultdict(list)
    out: list[Graph] = []
    for g in classes:
        n = g.n
        for size in range(1, n + 1):
            for nbrs in combinations(range(n), size):
                if triangle_free and not _independent(g, nbrs):
                    continue
                h = Graph.from_edges(n + 1, list(g.edges()) + [(v, n) for v in nbrs])
                bucket = buckets[_invariant(h)]
                if not any(is_isomorphic(h, other) for other in bucket):
                    bucket.append(h)
                    out.append(h)
    return out


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--nmin", type=int, default=2)
    ap.add_argument("--triangle-free", action="store_true")
    args = ap.parse_args(argv)
    level = [Graph.from_edges(2, [(0, 1)])]
    for n in range(2, args.nmax + 1):
        if n > 2:
            level = extend(level, args.triangle_free)
        print(f"n={n}: {len(level)} classes", file=sys.stderr)
        if n >= args.nmin:
            for g in sorted(level, key=to_graph6):
                print(to_graph6(g))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
