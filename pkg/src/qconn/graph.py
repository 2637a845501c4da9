"""Simple undirected graphs on at most 512 vertices.

A :class:`Graph` is an immutable vertex count plus one neighbour bitset per
vertex (a Python ``int``).  The module also holds graph6 I/O, the usual
operators (complement, join, disjoint union, vertex deletion), the extremal
families that show up as exceptions in the connectivity theorems, and a small
backtracking isomorphism test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

MAX_VERTICES = 512


class GraphCapacityError(ValueError):
    """Raised when an operation would produce more than ``MAX_VERTICES`` vertices."""


class Graph6Error(ValueError):
    """Malformed graph6 input; ``offset`` is the index of the offending byte."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ConstructionError(ValueError):
    """A family was requested with parameters outside its valid range."""


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise GraphCapacityError(f"order {self.n} outside 0..{MAX_VERTICES}")
        if len(self.adj) != self.n:
            raise ValueError("need exactly one adjacency bitset per vertex")
        full = (1 << self.n) - 1
        for v, row in enumerate(self.adj):
            if row & ~full or row >> v & 1:
                raise ValueError(f"bad adjacency row for vertex {v}")
            w = row
            while w:
                u = (w & -w).bit_length() - 1
                if not self.adj[u] >> v & 1:
                    raise ValueError(f"adjacency not symmetric at ({v}, {u})")
                w &= w - 1

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        if n > MAX_VERTICES:
            raise GraphCapacityError(f"order {n} exceeds {MAX_VERTICES}")
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(n, tuple(rows))

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [row.bit_count() for row in self.adj]

    @property
    def min_degree(self) -> int:
        return min(self.degrees()) if self.n else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees()) if self.n else 0

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def neighbors(self, v: int) -> list[int]:
        return list(iter_bits(self.adj[v]))

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for v in range(self.n) for u in iter_bits(self.adj[v] & ((1 << v) - 1))]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def is_complete(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def with_edge(self, u: int, v: int) -> Graph:
        return Graph.from_edges(self.n, self.edges() + [(u, v)])

    def without_edge(self, u: int, v: int) -> Graph:
        if not self.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        rows = list(self.adj)
        rows[u] &= ~(1 << v)
        rows[v] &= ~(1 << u)
        return Graph(self.n, tuple(rows))

    def relabel(self, perm: Sequence[int]) -> Graph:
        """Vertex ``v`` becomes ``perm[v]``."""
        return Graph.from_edges(self.n, ((perm[u], perm[v]) for u, v in self.edges()))

    def components(self) -> list[int]:
        """Connected components as vertex bitsets, ordered by lowest vertex."""
        return components_within(self.adj, self.full_mask)

    def is_connected(self) -> bool:
        return self.n > 0 and len(self.components()) == 1

    def induced(self, keep: int) -> Graph:
        """Induced subgraph on the vertex bitset ``keep``, relabelled in order."""
        verts = list(iter_bits(keep))
        index = {v: i for i, v in enumerate(verts)}
        rows = []
        for v in verts:
            rows.append(sum(1 << index[u] for u in iter_bits(self.adj[v] & keep)))
        return Graph(len(verts), tuple(rows))

    def __str__(self) -> str:
        return to_graph6(self)


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def set_to_bits(vertices: Iterable[int]) -> int:
    out = 0
    for v in vertices:
        out |= 1 << v
    return out


def components_within(adj: Sequence[int], alive: int) -> list[int]:
    comps = []
    rest = alive
    while rest:
        seen = rest & -rest
        frontier = seen
        while frontier:
            reach = 0
            for v in iter_bits(frontier):
                reach |= adj[v]
            frontier = reach & rest & ~seen
            seen |= frontier
        comps.append(seen)
        rest &= ~seen
    return comps


# graph6 ---------------------------------------------------------------------

def _encode_order(n: int) -> str:
    if n <= 62:
        return chr(n + 63)
    if n <= 258047:
        return "~" + "".join(chr(((n >> s) & 63) + 63) for s in (12, 6, 0))
    return "~~" + "".join(chr(((n >> s) & 63) + 63) for s in (30, 24, 18, 12, 6, 0))


def to_graph6(g: Graph) -> str:
    bits = []
    for j in range(1, g.n):
        row = g.adj[j]
        for i in range(j):
            bits.append(row >> i & 1)
    bits.extend([0] * (-len(bits) % 6))
    body = []
    for p in range(0, len(bits), 6):
        chunk = bits[p:p + 6]
        val = 0
        for b in chunk:
            val = val << 1 | b
        body.append(chr(val + 63))
    return _encode_order(g.n) + "".join(body)


def from_graph6(text: str) -> Graph:
    s = text.strip("\r\n")
    if s.startswith(">>graph6<<"):
        s = s[10:]
        base = 10
    else:
        base = 0
    for i, ch in enumerate(s):
        if not 63 <= ord(ch) <= 126:
            raise Graph6Error(f"character {ch!r} outside graph6 range 63..126", base + i)
    if not s:
        raise Graph6Error("empty graph6 string", base)
    if s[0] != "~":
        n, pos = ord(s[0]) - 63, 1
    elif len(s) >= 2 and s[1] == "~":
        if len(s) < 8:
            raise Graph6Error("truncated 8-byte order header", base + len(s))
        n = 0
        for ch in s[2:8]:
            n = n << 6 | (ord(ch) - 63)
        pos = 8
    else:
        if len(s) < 4:
            raise Graph6Error("truncated 4-byte order header", base + len(s))
        n = 0
        for ch in s[1:4]:
            n = n << 6 | (ord(ch) - 63)
        pos = 4
    if n > MAX_VERTICES:
        raise Graph6Error(f"order {n} exceeds {MAX_VERTICES}", base)
    nbits = n * (n - 1) // 2
    need = -(-nbits // 6)
    body = s[pos:]
    if len(body) < need:
        raise Graph6Error(f"truncated body: expected {need} bytes, got {len(body)}", base + len(s))
    if len(body) > need:
        raise Graph6Error("trailing bytes after graph6 body", base + pos + need)
    if need and nbits % 6:
        pad = (ord(body[-1]) - 63) & ((1 << (6 * need - nbits)) - 1)
        if pad:
            raise Graph6Error("nonzero padding bits", base + pos + need - 1)
    rows = [0] * n
    k = 0
    for j in range(1, n):
        for i in range(j):
            byte = ord(body[k // 6]) - 63
            if byte >> (5 - k % 6) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
            k += 1
    return Graph(n, tuple(rows))


def read_graph6_lines(lines: Iterable[str]) -> Iterator[Graph]:
    """Parse one graph per non-blank line; parse errors report the line number."""
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line:
            continue
        try:
            yield from_graph6(line)
        except Graph6Error as exc:
            raise Graph6Error(f"line {lineno}: {exc}", exc.offset) from None


# operators ------------------------------------------------------------------

def complement(g: Graph) -> Graph:
    full = g.full_mask
    return Graph(g.n, tuple(full & ~row & ~(1 << v) for v, row in enumerate(g.adj)))


def disjoint_union(g: Graph, h: Graph) -> Graph:
    n = g.n + h.n
    if n > MAX_VERTICES:
        raise GraphCapacityError(f"union order {n} exceeds {MAX_VERTICES}")
    return Graph(n, g.adj + tuple(row << g.n for row in h.adj))


def join(g: Graph, h: Graph) -> Graph:
    n = g.n + h.n
    if n > MAX_VERTICES:
        raise GraphCapacityError(f"join order {n} exceeds {MAX_VERTICES}")
    hside = ((1 << h.n) - 1) << g.n
    gside = g.full_mask
    rows = [row | hside for row in g.adj]
    rows += [(row << g.n) | gside for row in h.adj]
    return Graph(n, tuple(rows))


def induced_delete(g: Graph, drop: Iterable[int]) -> Graph:
    """G - drop, survivors relabelled contiguously in their original order."""
    dmask = set_to_bits(drop)
    keep = g.full_mask & ~dmask
    if not keep:
        raise ValueError("cannot delete every vertex")
    return g.induced(keep)


# named graphs ---------------------------------------------------------------

def complete(n: int) -> Graph:
    full = (1 << n) - 1
    return Graph(n, tuple(full & ~(1 << v) for v in range(n)))


def empty(n: int) -> Graph:
    return Graph(n, (0,) * n)


def complete_bipartite(a: int, b: int) -> Graph:
    return join(empty(a), empty(b))


def star(n: int) -> Graph:
    """K_{1,n-1}."""
    return complete_bipartite(1, n - 1)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def path(n: int) -> Graph:
    return Graph.from_edges(n, ((i, i + 1) for i in range(n - 1)))


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


# extremal families ----------------------------------------------------------

FAMILY_PARAMS = {
    "join-cliques": ("k", "a", "b"),
    "join-cliques-minus-edge": ("delta", "n"),
    "complete-bipartite": ("a", "b"),
    "complete": ("n",),
    "empty": ("n",),
    "triangle-free-extremal": ("n", "delta", "k"),
}


@dataclass(frozen=True)
class FamilySpec:
    """A named extremal family with integer parameters.

    ``join-cliques`` is K_k v (K_a u K_b); ``join-cliques-minus-edge`` is
    (K_delta v (K_2 u K_{n-delta-2})) - xy with x in the K_2 part and y a join
    vertex; ``triangle-free-extremal`` is the X u C u Y graph with |C| = k-1.
    For the triangle-free family ``side`` picks which half of the Y-block
    bipartition holds C ("ceil" or "floor"); both have the same edge count.
    """

    family: str
    params: tuple[tuple[str, int], ...]
    side: str = field(default="ceil", compare=True)

    @classmethod
    def of(cls, family: str, side: str = "ceil", **params: int) -> FamilySpec:
        if family not in FAMILY_PARAMS:
            raise ConstructionError(f"unknown family {family!r}")
        missing = set(FAMILY_PARAMS[family]) - set(params)
        extra = set(params) - set(FAMILY_PARAMS[family])
        if missing or extra:
            raise ConstructionError(
                f"{family} takes parameters {', '.join(FAMILY_PARAMS[family])}"
            )
        ordered = tuple((name, int(params[name])) for name in FAMILY_PARAMS[family])
        if side not in ("ceil", "floor"):
            raise ConstructionError("side must be 'ceil' or 'floor'")
        return cls(family, ordered, side)

    @classmethod
    def parse(cls, text: str) -> FamilySpec:
        """Parse ``"join-cliques:k=1,a=3,b=3"`` style strings."""
        family, _, rest = text.partition(":")
        params: dict[str, int] = {}
        side = "ceil"
        for item in filter(None, (p.strip() for p in rest.split(","))):
            key, eq, val = item.partition("=")
            if not eq:
                raise ConstructionError(f"expected key=value, got {item!r}")
            key = key.strip().replace("δ", "delta").replace("κ", "k")
            if key == "side":
                side = val.strip()
                continue
            try:
                params[key] = int(val)
            except ValueError:
                raise ConstructionError(f"parameter {key} must be an integer") from None
        return cls.of(family.strip(), side=side, **params)

    def get(self, name: str) -> int:
        return dict(self.params)[name]

    def __str__(self) -> str:
        body = ",".join(f"{k}={v}" for k, v in self.params)
        if self.family == "triangle-free-extremal" and self.side != "ceil":
            body += f",side={self.side}"
        return f"{self.family}:{body}"

    def to_json(self) -> dict:
        out = {"family": self.family, **dict(self.params)}
        if self.family == "triangle-free-extremal":
            out["side"] = self.side
        return out


def join_cliques(k: int, a: int, b: int) -> Graph:
    return construct(FamilySpec.of("join-cliques", k=k, a=a, b=b))


def construct(spec: FamilySpec) -> Graph:
    p = dict(spec.params)
    fam = spec.family
    if fam == "join-cliques":
        k, a, b = p["k"], p["a"], p["b"]
        if k < 0:
            raise ConstructionError("join-cliques needs k >= 0")
        if a < 1 or b < 1:
            raise ConstructionError("join-cliques needs a >= 1 and b >= 1")
        return join(complete(k), disjoint_union(complete(a), complete(b)))
    if fam == "join-cliques-minus-edge":
        d, n = p["delta"], p["n"]
        if d < 1:
            raise ConstructionError("join-cliques-minus-edge needs delta >= 1")
        if n - d - 2 < 1:
            raise ConstructionError("join-cliques-minus-edge needs n >= delta + 3")
        g = join(complete(d), disjoint_union(complete(2), complete(n - d - 2)))
        # vertex d is in the K_2 part (degree delta+1), vertex 0 is a join vertex
        return g.without_edge(d, 0)
    if fam == "complete-bipartite":
        a, b = p["a"], p["b"]
        if a < 0 or b < 0:
            raise ConstructionError("complete-bipartite needs a, b >= 0")
        return complete_bipartite(a, b)
    if fam == "complete":
        if p["n"] < 0:
            raise ConstructionError("complete needs n >= 0")
        return complete(p["n"])
    if fam == "empty":
        if p["n"] < 0:
            raise ConstructionError("empty needs n >= 0")
        return empty(p["n"])
    if fam == "triangle-free-extremal":
        return _triangle_free_extremal(p["n"], p["delta"], p["k"], spec.side)
    raise ConstructionError(f"unknown family {fam!r}")


def _triangle_free_extremal(n: int, delta: int, k: int, side: str) -> Graph:
    if k - 1 < 1:
        raise ConstructionError("triangle-free-extremal needs k - 1 >= 1")
    if delta < k - 1:
        raise ConstructionError("triangle-free-extremal needs delta >= k - 1")
    if n < 2 * delta + 1:
        raise ConstructionError("triangle-free-extremal needs n >= 2*delta + 1")
    c = k - 1
    s = n - 2 * delta + c
    lo, hi = s // 2, s - s // 2
    c_part = hi if side == "ceil" else lo
    if c_part < c:
        raise ConstructionError(
            "triangle-free-extremal needs the Y-block side holding C to have at least k - 1 vertices"
        )
    # layout: C | X_A (delta - c) | X_B (delta) | Y_A (c_part - c) | Y_B (s - c_part)
    C = list(range(c))
    XA = list(range(c, delta))
    XB = list(range(delta, 2 * delta))
    YA = list(range(2 * delta, 2 * delta + c_part - c))
    YB = list(range(2 * delta + c_part - c, n))
    edges = [(u, v) for u in C + XA for v in XB]
    edges += [(u, v) for u in C + YA for v in YB]
    return Graph.from_edges(n, edges)


# isomorphism ----------------------------------------------------------------

def _joint_refine(g: Graph, h: Graph) -> tuple[list[int], list[int]] | None:
    """Refine both graphs with a shared palette so colours are comparable."""
    cg = [0] * g.n
    ch = [0] * h.n
    while True:
        sg = [(cg[v], tuple(sorted(cg[u] for u in iter_bits(g.adj[v])))) for v in range(g.n)]
        sh = [(ch[v], tuple(sorted(ch[u] for u in iter_bits(h.adj[v])))) for v in range(h.n)]
        if sorted(sg) != sorted(sh):
            return None
        palette = {s: i for i, s in enumerate(sorted(set(sg)))}
        ng = [palette[s] for s in sg]
        nh = [palette[s] for s in sh]
        if len(palette) == len(set(cg)):
            return ng, nh
        cg, ch = ng, nh


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return False
    refined = _joint_refine(g, h)
    if refined is None:
        return False
    cg, ch = refined
    # map the most constrained vertices first
    class_size: dict[int, int] = {}
    for c in cg:
        class_size[c] = class_size.get(c, 0) + 1
    order = sorted(range(g.n), key=lambda v: (class_size[cg[v]], -g.degree(v), v))
    mapping = [-1] * g.n
    used = 0

    def extend(i: int) -> bool:
        nonlocal used
        if i == g.n:
            return True
        v = order[i]
        for w in range(h.n):
            if used >> w & 1 or ch[w] != cg[v]:
                continue
            ok = True
            for u in order[:i]:
                if g.has_edge(u, v) != h.has_edge(mapping[u], w):
                    ok = False
                    break
            if not ok:
                continue
            mapping[v] = w
            used |= 1 << w
            if extend(i + 1):
                return True
            used &= ~(1 << w)
            mapping[v] = -1
        return False

    return extend(0)


def pairs_graph6_order(n: int) -> list[tuple[int, int]]:
    """Vertex pairs (i, j), i < j, in graph6 bit order (column-major upper triangle)."""
    return [(i, j) for j in range(1, n) for i in range(j)]


def from_mask(n: int, mask: int) -> Graph:
    """Graph whose edge set is the bitmask over :func:`pairs_graph6_order`."""
    return Graph.from_edges(n, (pr for b, pr in enumerate(pairs_graph6_order(n)) if mask >> b & 1))


def to_mask(g: Graph) -> int:
    mask = 0
    for b, (i, j) in enumerate(pairs_graph6_order(g.n)):
        if g.has_edge(i, j):
            mask |= 1 << b
    return mask
