"""Signless Laplacian spectra and the characteristic cubics of K_k v (K_a u K_b).

The Q-index is computed with a cyclic Jacobi eigensolver run component by
component.  The cubics are kept in exact integers; their largest real root is
isolated with a Sturm sequence evaluated in rational arithmetic, so repeated
roots (e.g. the triple root of K_a u K_a) come out as accurately as simple ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import Graph, complement, iter_bits

EPS = 1e-9
CROSS_CHECK_TOL = 1e-8


class BracketError(ValueError):
    """The supplied bracket does not contain the largest real root."""


def signless_laplacian(g: Graph) -> np.ndarray:
    """Q = D + A as an integer matrix."""
    q = np.zeros((g.n, g.n), dtype=np.int64)
    for v, row in enumerate(g.adj):
        for u in iter_bits(row):
            q[v, u] = 1
        q[v, v] = row.bit_count()
    return q


def _round_robin(n: int) -> list[list[tuple[int, int]]]:
    """Disjoint pair schedules covering every pair once (circle method)."""
    slots = list(range(n)) + ([-1] if n % 2 else [])
    size = len(slots)
    rounds = []
    for _ in range(size - 1):
        pairs = []
        for i in range(size // 2):
            p, q = slots[i], slots[size - 1 - i]
            if p >= 0 and q >= 0:
                pairs.append((min(p, q), max(p, q)))
        rounds.append(pairs)
        slots = [slots[0], slots[-1]] + slots[1:-1]
    return rounds


def jacobi_eigenvalues(a: np.ndarray, tol: float = 1e-12, max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs so a round is applied as one vectorised update.  Sweeps stop
    once the off-diagonal Frobenius norm drops below ``tol * ||A||_F``.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n <= 1:
        return np.diag(a).copy()
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(n)
    rounds = [(np.array([p for p, _ in r]), np.array([q for _, q in r])) for r in _round_robin(n)]
    for _ in range(max_sweeps):
        off = math.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0))
        if off < tol * scale:
            break
        for P, Q in rounds:
            apq = a[P, Q]
            active = np.abs(apq) > 1e-300
            if not active.any():
                continue
            P, Q, apq = P[active], Q[active], apq[active]
            app, aqq = a[P, P], a[Q, Q]
            theta = (aqq - app) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[P, :].copy(), a[Q, :].copy()
            a[P, :] = c[:, None] * rp - s[:, None] * rq
            a[Q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, P].copy(), a[:, Q].copy()
            a[:, P] = cp * c - cq * s
            a[:, Q] = cp * s + cq * c
    return np.sort(np.diag(a))


def _component_q(g: Graph, comp: int) -> float:
    verts = list(iter_bits(comp))
    if len(verts) == 1:
        return 0.0
    if len(verts) == 2:
        return 2.0
    sub = g.induced(comp)
    if sub.is_complete():
        return 2.0 * (sub.n - 1)
    return float(jacobi_eigenvalues(signless_laplacian(sub))[-1])


def q_index(g: Graph) -> float:
    """Largest eigenvalue of Q(G); for disconnected G the maximum over components."""
    if g.n <= 1:
        return 0.0
    return max(_component_q(g, c) for c in g.components())


@dataclass(frozen=True)
class SpectralReport:
    q: float
    q_bar: float
    lower_bound: float
    upper_bound: float
    tolerance: float = EPS

    def to_json(self) -> dict:
        return {
            "q": fmt(self.q),
            "q_bar": fmt(self.q_bar),
            "lower_bound_4m_over_n": fmt(self.lower_bound),
            "upper_bound_2m_over_n_minus_1_plus_n_minus_2": fmt(self.upper_bound),
            "tolerance": self.tolerance,
        }


def fmt(x: float | None) -> float | None:
    """Round to 12 significant digits for stable JSON output."""
    if x is None:
        return None
    if isinstance(x, float) and math.isinf(x):
        return x
    return float(f"{float(x):.12g}")


def spectral_report(g: Graph) -> SpectralReport:
    n, m = g.n, g.m
    upper = 2 * m / (n - 1) + n - 2 if n > 1 else 0.0
    return SpectralReport(
        q=q_index(g),
        q_bar=q_index(complement(g)),
        lower_bound=4 * m / n if n else 0.0,
        upper_bound=upper,
    )


# cubics ---------------------------------------------------------------------

@dataclass(frozen=True)
class Cubic:
    """p(x) = x^3 - c2 x^2 + c1 x - c0 with integer coefficients.

    ``bracket`` optionally records an interval known to contain the largest
    root; for the join family it is [n - 2, 2(n - 1)].
    """

    c2: int
    c1: int
    c0: int
    bracket: tuple[int, int] | None = None

    def __call__(self, x):
        return ((x - self.c2) * x + self.c1) * x - self.c0

    def coefficients(self) -> tuple[int, int, int]:
        return self.c2, self.c1, self.c0


def join_cubic(n: int, k: int, a: int, b: int) -> Cubic:
    """Cubic whose largest root is q(K_k v (K_a u K_b))."""
    if k + a + b != n:
        raise ValueError(f"need k + a + b = n, got {k}+{a}+{b} != {n}")
    if a < 1 or b < 1 or k < 0:
        raise ValueError("need a, b >= 1 and k >= 0")
    ab = a * b
    c2 = 3 * n + k - 6
    c1 = 2 * n * n - 12 * n + 3 * n * k - 4 * k + 12 + 4 * ab
    c0 = (
        4 * ab * (n - 2)
        + (n - k) * (2 * n - k) * (k - 2)
        + (3 * n - 2 * k) * (k - 2) ** 2
        + (k - 2) ** 3
    )
    return Cubic(c2, c1, c0, bracket=(n - 2, 2 * (n - 1)))


def q0_cubic(n: int, delta: int, k: int) -> Cubic:
    """q(K_{k-1} v (K_{delta-k+2} u K_{n-delta-1}))."""
    if not delta >= k >= 2:
        raise ValueError("q0 needs delta >= k >= 2")
    if n - delta - 1 < 1:
        raise ValueError("q0 needs n >= delta + 2")
    return join_cubic(n, k - 1, delta - k + 2, n - delta - 1)


def q1_cubic(n: int, delta: int) -> Cubic:
    """q(K_{delta-1} v (K_2 u K_{n-delta-1}))."""
    if delta < 2:
        raise ValueError("q1 needs delta >= 2")
    if n - delta - 1 < 1:
        raise ValueError("q1 needs n >= delta + 2")
    return join_cubic(n, delta - 1, 2, n - delta - 1)


def q2_cubic(n: int, delta: int) -> Cubic:
    """q(K_delta v (K_2 u K_{n-delta-2}))."""
    if delta < 2:
        raise ValueError("q2 needs delta >= 2")
    if n - delta - 2 < 1:
        raise ValueError("q2 needs n >= delta + 3")
    return join_cubic(n, delta, 2, n - delta - 2)


def printed_q0_cubic(n: int, delta: int, k: int) -> Cubic:
    """The q0 polynomial written out directly in (n, delta, k)."""
    ab = (delta - k + 2) * (n - delta - 1)
    return Cubic(
        3 * n + k - 7,
        2 * n * n - 15 * n + 3 * n * k - 4 * k + 16 + 4 * ab,
        4 * ab * (n - 2)
        + (n - k + 1) * (2 * n - k + 1) * (k - 3)
        + (3 * n - 2 * k + 2) * (k - 3) ** 2
        + (k - 3) ** 3,
    )


def printed_q1_cubic(n: int, delta: int) -> Cubic:
    d = delta
    return Cubic(
        3 * n + d - 7,
        2 * n * n - 7 * n + 3 * n * d - 12 * d + 8,
        8 * (n - d - 1) * (n - 2)
        + (n - d + 1) * (d - 3) * (2 * n - d + 1)
        + (3 * n - 2 * d + 2) * (d - 3) ** 2
        + (d - 3) ** 3,
    )


def printed_q2_cubic(n: int, delta: int) -> Cubic:
    d = delta
    return Cubic(
        3 * n + d - 6,
        2 * n * n - 4 * n + 3 * n * d - 12 * d - 4,
        8 * (n - d - 2) * (n - 2)
        + (n - d) * (2 * n - d) * (d - 2)
        + (3 * n - 2 * d) * (d - 2) ** 2
        + (d - 2) ** 3,
    )


def _poly_rem(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    """Remainder of polynomial division; coefficients highest degree first."""
    num = list(num)
    while len(num) >= len(den) and any(num):
        if num[0] == 0:
            num.pop(0)
            continue
        f = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= f * den[i]
        num.pop(0)
    while num and num[0] == 0:
        num.pop(0)
    return num


def _sturm_chain(c: Cubic) -> list[list[Fraction]]:
    p = [Fraction(1), Fraction(-c.c2), Fraction(c.c1), Fraction(-c.c0)]
    dp = [Fraction(3), Fraction(-2 * c.c2), Fraction(c.c1)]
    chain = [p, dp]
    while len(chain[-1]) > 1:
        r = _poly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append([-x for x in r])
    return chain


def _right_sign(poly: list[Fraction], x: Fraction) -> int:
    """Sign of ``poly`` just to the right of ``x`` (first nonzero derivative)."""
    cur = list(poly)
    while cur:
        v = Fraction(0)
        for coef in cur:
            v = v * x + coef
        if v:
            return 1 if v > 0 else -1
        deg = len(cur) - 1
        cur = [coef * (deg - i) for i, coef in enumerate(cur[:-1])]
    return 0


def _sign_changes(chain: list[list[Fraction]], x: Fraction) -> int:
    """Sign changes of the Sturm chain at x+, i.e. distinct real roots above x minus those above +inf."""
    signs = [s for s in (_right_sign(poly, x) for poly in chain) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def largest_real_root(c: Cubic, rel_tol: float = 1e-15) -> float:
    """Largest real root of a monic integer cubic.

    The root is isolated by bisection on the number of distinct real roots to
    the right of the midpoint (Sturm's theorem, exact arithmetic), then
    polished by Newton steps that are kept only while they stay inside the
    final bracket and reduce the residual.  If the cubic carries a bracket the
    root must lie in it, otherwise :class:`BracketError` is raised.
    """
    chain = _sturm_chain(c)
    bound = 1 + max(abs(c.c2), abs(c.c1), abs(c.c0))
    lo, hi = Fraction(-bound), Fraction(bound)
    v_hi = _sign_changes(chain, hi)
    if _sign_changes(chain, lo) == v_hi:
        raise ValueError("cubic has no real root inside its Cauchy bound")
    if c.c2 == c.c1 == c.c0 == 0:
        return 0.0
    while hi - lo > rel_tol * max(1, abs(hi)):
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) > v_hi:
            lo = mid
        else:
            hi = mid
    root = float((lo + hi) / 2)
    lo_f, hi_f = float(lo), float(hi)
    for _ in range(3):
        d = (3 * root - 2 * c.c2) * root + c.c1
        if d == 0:
            break
        step = root - c(root) / d
        if not lo_f <= step <= hi_f or abs(c(step)) >= abs(c(root)):
            break
        root = step
    if c.bracket is not None:
        blo, bhi = c.bracket
        if not blo - EPS <= root <= bhi + EPS:
            raise BracketError(
                f"largest root {root} outside bracket [{blo}, {bhi}]; supply an explicit bracket"
            )
    return root


def power_iteration_q(g: Graph, iters: int = 20000, tol: float = 1e-13) -> float:
    """Independent Perron-value estimate for connected graphs (test oracle).

    Shifting by the identity keeps the iteration away from -q when G is bipartite.
    """
    q = signless_laplacian(g).astype(float) + np.eye(g.n)
    x = np.ones(g.n) / math.sqrt(g.n)
    lam = 0.0
    for _ in range(iters):
        y = q @ x
        new = float(np.linalg.norm(y))
        x = y / new
        if abs(new - lam) < tol * new:
            lam = new
            break
        lam = new
    return float(x @ q @ x) - 1.0
