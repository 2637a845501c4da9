"""Threshold formulas for every sufficient condition, addressable by rule id.

Rational formulas are evaluated with :class:`fractions.Fraction` and floor
terms on integers, so comparisons against integer edge counts are exact.  The
girth-dependent bounds raise to the power 1 + 1/t and are returned as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .spectral import largest_real_root, q0_cubic, q1_cubic, q2_cubic

K_CONNECTED = "k-connected"
MAXIMALLY_CONNECTED = "maximally-connected"
SUPER_KAPPA = "super-kappa"
PROPERTIES = (K_CONNECTED, MAXIMALLY_CONNECTED, SUPER_KAPPA)

SIDE_Q = "q>="
SIDE_QBAR = "qbar<="
SIDE_EDGES = "m>="

CLASS_ANY = "girth>=3"
CLASS_TRIANGLE_FREE = "triangle-free"
CLASS_GIRTH = "girth=g"


class RuleRangeError(ValueError):
    """The parameter point lies outside a rule's hypothesis."""


@dataclass(frozen=True)
class Rule:
    id: str
    property: str
    graph_class: str
    side: str
    formula: str
    exceptional: str | None = None
    biconditional: bool = False
    needs_connected_complement: bool = False
    k_equals_delta: bool = False

    def to_json(self) -> dict:
        return {
            "rule": self.id,
            "property": self.property,
            "class": self.graph_class,
            "side": self.side,
            "formula": self.formula,
            "exceptional": self.exceptional,
            "biconditional": self.biconditional,
            "complement_connected": self.needs_connected_complement,
        }


_T41_FAMILY = "K_{k-1} v (K_{delta-k+2} u K_{n-delta-1})"

RULES: dict[str, Rule] = {r.id: r for r in [
    Rule("L3.1-edge", K_CONNECTED, CLASS_GIRTH, SIDE_EDGES,
         "odd g: (nu+k-1)^(1+1/t)/2 + (n-nu)^(1+1/t)/2 + (n+k-1)/2; "
         "even g: 2^-(1+1/t)[(nu+k-1)^(1+1/t) + (n-nu)^(1+1/t)] + (n+k-1)/2"),
    Rule("T3.2-q", K_CONNECTED, CLASS_GIRTH, SIDE_Q,
         "[(nu+k-1)^(1+1/t) + (n-nu)^(1+1/t)] / (s(n-1)) + k/(n-1) + n-1, s = 1 (odd g) or 2^(1/t) (even g)"),
    Rule("T3.3-qbar", K_CONNECTED, CLASS_GIRTH, SIDE_QBAR,
         "2(n-1) - 2/(n s)[(nu+k-1)^(1+1/t) + (n-nu)^(1+1/t)] - 2(n+k-1)/n, s = 1 (odd g) or 2^(1/t) (even g)"),
    Rule("T4.1-q0", K_CONNECTED, CLASS_ANY, SIDE_Q,
         "q0 = q(K_{k-1} v (K_{delta-k+2} u K_{n-delta-1}))", _T41_FAMILY, biconditional=True),
    Rule("T4.2-edge", K_CONNECTED, CLASS_ANY, SIDE_EDGES,
         "n(n-1)/2 - (delta-k+2)(n-delta-1)", _T41_FAMILY),
    Rule("C4.3-q", K_CONNECTED, CLASS_ANY, SIDE_Q,
         "2(n-delta+k-3) + 2 delta (delta-k+2)/(n-1)"),
    Rule("T4.4-qbar", K_CONNECTED, CLASS_ANY, SIDE_QBAR,
         "n-k+1", "K_{k-1} v (K_a u K_{n-k+1-a}), delta-k+2 <= a <= n-delta-1", biconditional=True),
    Rule("C4.5-q1", MAXIMALLY_CONNECTED, CLASS_ANY, SIDE_Q,
         "q1 = q(K_{delta-1} v (K_2 u K_{n-delta-1}))", "K_{delta-1} v (K_2 u K_{n-delta-1})",
         biconditional=True, k_equals_delta=True),
    Rule("C4.6-q", MAXIMALLY_CONNECTED, CLASS_ANY, SIDE_Q,
         "2(n-3) + 4 delta/(n-1)", k_equals_delta=True),
    Rule("C4.7-qbar", MAXIMALLY_CONNECTED, CLASS_ANY, SIDE_QBAR,
         "n-delta+1", "K_{delta-1} v (K_a u K_{n-delta+1-a}), 2 <= a <= n-delta-1",
         biconditional=True, k_equals_delta=True),
    Rule("T4.8-q2", SUPER_KAPPA, CLASS_ANY, SIDE_Q,
         "q2 = q(K_delta v (K_2 u K_{n-delta-2}))"),
    Rule("T4.9-edge", SUPER_KAPPA, CLASS_ANY, SIDE_EDGES,
         "(n-2)(n-3)/2 + 2 delta", "(K_delta v (K_2 u K_{n-delta-2})) - xy, d(x) = delta+1, d(y) = n-1"),
    Rule("C4.10-q", SUPER_KAPPA, CLASS_ANY, SIDE_Q,
         "2(n-3) + (4 delta + 2)/(n-1)"),
    Rule("T4.11-qbar", SUPER_KAPPA, CLASS_ANY, SIDE_QBAR, "n-delta"),
    Rule("T5.1-edge", K_CONNECTED, CLASS_TRIANGLE_FREE, SIDE_EDGES,
         "delta^2 + floor((n-2 delta+k-1)^2/4)",
         "X u C u Y: G[C] edgeless, |C| = k-1, G[X u C] = K_{delta,delta}, "
         "G[Y u C] = K_{floor(s/2),ceil(s/2)}, s = n-2 delta+k-1"),
    Rule("C5.2-q", K_CONNECTED, CLASS_TRIANGLE_FREE, SIDE_Q,
         "n+k-2 delta-2 + 2 delta^2/(n-1) + floor((n-1 + (k-2 delta)^2/(n-1))/2)"),
    Rule("T5.3-qbar", K_CONNECTED, CLASS_TRIANGLE_FREE, SIDE_QBAR,
         "2(n-1) - 4 delta^2/n - floor((n-2 delta+k-1)^2/n)", needs_connected_complement=True),
    Rule("C5.4-q", MAXIMALLY_CONNECTED, CLASS_TRIANGLE_FREE, SIDE_Q,
         "n-delta-2 + 2 delta^2/(n-1) + floor((n-1 + delta^2/(n-1))/2)", k_equals_delta=True),
    Rule("C5.5-qbar", MAXIMALLY_CONNECTED, CLASS_TRIANGLE_FREE, SIDE_QBAR,
         "2(n-1) - 4 delta^2/n - floor((n-delta-1)^2/n)", needs_connected_complement=True,
         k_equals_delta=True),
    Rule("T5.6-edge", SUPER_KAPPA, CLASS_TRIANGLE_FREE, SIDE_EDGES,
         "delta^2 + floor((n-delta)^2/4)"),
    Rule("C5.6-q", SUPER_KAPPA, CLASS_TRIANGLE_FREE, SIDE_Q,
         "n-delta-1 + 2 delta^2/(n-1) + floor((n-1 + (delta-1)^2/(n-1))/2)"),
    Rule("T5.7-qbar", SUPER_KAPPA, CLASS_TRIANGLE_FREE, SIDE_QBAR,
         "2(n-1) - 4 delta^2/n - floor((n-delta)^2/n)", needs_connected_complement=True),
    # general-girth maximal connectivity through the k = delta specialisation
    Rule("T3.2@k=delta", MAXIMALLY_CONNECTED, CLASS_GIRTH, SIDE_Q,
         "T3.2-q evaluated at k = delta", k_equals_delta=True),
    Rule("T3.3@k=delta", MAXIMALLY_CONNECTED, CLASS_GIRTH, SIDE_QBAR,
         "T3.3-qbar evaluated at k = delta", k_equals_delta=True),
]}

RULE_ALIASES = {r.split("-")[0]: r for r in RULES if "@" not in r}
RULE_ALIASES.update({"T3.2@k=δ": "T3.2@k=delta", "T3.3@k=δ": "T3.3@k=delta"})


def resolve_rule(name: str) -> Rule:
    key = RULE_ALIASES.get(name, name)
    if key not in RULES:
        raise KeyError(f"unknown rule {name!r}; known: {', '.join(RULES)}")
    return RULES[key]


@dataclass(frozen=True)
class ThresholdValue:
    value: Fraction | float
    exact: bool

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self):
        if self.exact and isinstance(self.value, Fraction):
            v = self.value
            return {"value": float(f"{float(v):.12g}"), "exact": f"{v.numerator}/{v.denominator}"}
        return {"value": float(f"{float(self.value):.12g}"), "exact": None}


@dataclass(frozen=True)
class ThresholdContext:
    """(n, delta, g, k); g is the graph's exact girth, only needed by the L3.1/T3.x rules."""

    n: int
    delta: int
    k: int = 2
    g: float = 3

    @property
    def t(self) -> int:
        return (int(self.g) - 1) // 2

    @property
    def nu(self) -> int:
        return nu(self.delta, int(self.g), self.k - 1)


def nu(delta: int, g: int, kappa: int) -> int:
    """Lower bound on the order of a component left by a kappa-cut (girth g, min degree delta)."""
    if delta < 2 or g < 3 or not 0 <= kappa <= delta:
        raise RuleRangeError(f"nu needs delta >= 2, g >= 3, 0 <= kappa <= delta; got {delta}, {g}, {kappa}")
    t = (g - 1) // 2
    geom = sum((delta - 1) ** i for i in range(t))
    if g == 2 * t + 1:
        return 1 + (delta - kappa) * geom
    if delta >= 3:
        return 2 + (2 * delta - 2 - kappa) * geom
    return 2 * t + 1


def girth_edge_bound(n: int, g: int) -> float:
    """Strict upper bound on the size of a graph of order n and girth g."""
    t = (g - 1) // 2
    p = 1 + 1 / t
    if g % 2:
        return 0.5 * n ** p + 0.5 * n
    return n ** p / 2 ** p + 0.5 * n


def _floor_div(num: int, den: int) -> int:
    return num // den


def _floor_frac(x: Fraction) -> int:
    return math.floor(x)


def _require(cond: bool, rule: str, why: str) -> None:
    if not cond:
        raise RuleRangeError(f"{rule}: hypothesis violated ({why})")


def _girth_pieces(ctx: ThresholdContext, rule: str) -> tuple[float, float, int]:
    """(A + B, even-girth scale, t) where A, B are the two power terms."""
    _require(ctx.delta >= ctx.k >= 2, rule, "delta >= k >= 2")
    _require(math.isfinite(ctx.g) and ctx.g >= 3, rule, "finite girth g >= 3")
    v = ctx.nu
    t = ctx.t
    _require(ctx.n - v >= 0, rule, "n >= nu")
    p = 1 + 1 / t
    power_sum = (v + ctx.k - 1) ** p + (ctx.n - v) ** p
    scale = 1.0 if int(ctx.g) % 2 else 2 ** (1 / t)
    return power_sum, scale, t


def edge_threshold(rule: str, ctx: ThresholdContext) -> ThresholdValue:
    """Minimum size m that triggers an edge-count rule."""
    rid = resolve_rule(rule).id
    n, d, k = ctx.n, ctx.delta, ctx.k
    if rid == "L3.1-edge":
        power_sum, scale, _ = _girth_pieces(ctx, rid)
        return ThresholdValue(power_sum / (2 * scale) + 0.5 * (n + k - 1), False)
    if rid == "T4.2-edge":
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        return ThresholdValue(Fraction(n * (n - 1), 2) - (d - k + 2) * (n - d - 1), True)
    if rid == "T4.9-edge":
        _require(d >= 1, rid, "delta >= 1")
        return ThresholdValue(Fraction((n - 2) * (n - 3), 2) + 2 * d, True)
    if rid == "T5.1-edge":
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        return ThresholdValue(Fraction(d * d + _floor_div((n - 2 * d + k - 1) ** 2, 4)), True)
    if rid == "T5.6-edge":
        _require(d >= 2, rid, "delta >= 2")
        return ThresholdValue(Fraction(d * d + _floor_div((n - d) ** 2, 4)), True)
    raise RuleRangeError(f"{rid} is not an edge-count rule")


@lru_cache(maxsize=None)
def _cubic_root(which: str, n: int, delta: int, k: int) -> float:
    if which == "q0":
        return largest_real_root(q0_cubic(n, delta, k))
    if which == "q1":
        return largest_real_root(q1_cubic(n, delta))
    return largest_real_root(q2_cubic(n, delta))


def q_threshold(rule: str, ctx: ThresholdContext) -> ThresholdValue:
    """Lower threshold on q(G) for rules of the form q(G) >= threshold."""
    rid = resolve_rule(rule).id
    n, d, k = ctx.n, ctx.delta, ctx.k
    if rid in ("T3.2-q", "T3.2@k=delta"):
        if rid == "T3.2@k=delta":
            ctx = ThresholdContext(n, d, d, ctx.g)
            k = d
        power_sum, scale, _ = _girth_pieces(ctx, rid)
        return ThresholdValue(power_sum / (scale * (n - 1)) + k / (n - 1) + (n - 1), False)
    if rid == "T4.1-q0":
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        _require(n - d - 1 >= 1, rid, "n >= delta + 2")
        return ThresholdValue(_cubic_root("q0", n, d, k), False)
    if rid == "C4.3-q":
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        return ThresholdValue(2 * (n - d + k - 3) + Fraction(2 * d * (d - k + 2), n - 1), True)
    if rid == "C4.5-q1":
        _require(d >= 2, rid, "delta >= 2")
        _require(n - d - 1 >= 1, rid, "n >= delta + 2")
        return ThresholdValue(_cubic_root("q1", n, d, 0), False)
    if rid == "C4.6-q":
        _require(d >= 2, rid, "delta >= 2")
        return ThresholdValue(2 * (n - 3) + Fraction(4 * d, n - 1), True)
    if rid == "T4.8-q2":
        _require(d >= 2, rid, "delta >= 2")
        _require(n - d - 2 >= 1, rid, "n >= delta + 3")
        return ThresholdValue(_cubic_root("q2", n, d, 0), False)
    if rid == "C4.10-q":
        _require(d >= 1, rid, "delta >= 1")
        return ThresholdValue(2 * (n - 3) + Fraction(4 * d + 2, n - 1), True)
    if rid in ("C5.2-q", "C5.4-q"):
        if rid == "C5.4-q":
            k = d
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        inner = Fraction(n - 1) + Fraction((k - 2 * d) ** 2, n - 1)
        return ThresholdValue(n + k - 2 * d - 2 + Fraction(2 * d * d, n - 1) + _floor_frac(inner / 2), True)
    if rid == "C5.6-q":
        _require(d >= 2, rid, "delta >= 2")
        inner = Fraction(n - 1) + Fraction((d - 1) ** 2, n - 1)
        return ThresholdValue(n - d - 1 + Fraction(2 * d * d, n - 1) + _floor_frac(inner / 2), True)
    raise RuleRangeError(f"{rid} is not a q(G) >= rule")


def q_complement_threshold(rule: str, ctx: ThresholdContext) -> ThresholdValue:
    """Upper threshold on q(complement of G) for rules of the form q(Gbar) <= threshold."""
    rid = resolve_rule(rule).id
    n, d, k = ctx.n, ctx.delta, ctx.k
    if rid in ("T3.3-qbar", "T3.3@k=delta"):
        if rid == "T3.3@k=delta":
            ctx = ThresholdContext(n, d, d, ctx.g)
            k = d
        power_sum, scale, _ = _girth_pieces(ctx, rid)
        return ThresholdValue(2 * (n - 1) - 2 * power_sum / (n * scale) - 2 * (n + k - 1) / n, False)
    if rid == "T4.4-qbar":
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        _require(d - k + 2 <= n - d - 1, rid, "some a with delta-k+2 <= a <= n-delta-1")
        return ThresholdValue(Fraction(n - k + 1), True)
    if rid == "C4.7-qbar":
        _require(d >= 2, rid, "delta >= 2")
        return ThresholdValue(Fraction(n - d + 1), True)
    if rid == "T4.11-qbar":
        return ThresholdValue(Fraction(n - d), True)
    if rid in ("T5.3-qbar", "C5.5-qbar"):
        if rid == "C5.5-qbar":
            k = d
        _require(d >= k >= 2, rid, "delta >= k >= 2")
        return ThresholdValue(
            2 * (n - 1) - Fraction(4 * d * d, n) - _floor_div((n - 2 * d + k - 1) ** 2, n), True
        )
    if rid == "T5.7-qbar":
        _require(d >= 2, rid, "delta >= 2")
        return ThresholdValue(2 * (n - 1) - Fraction(4 * d * d, n) - _floor_div((n - d) ** 2, n), True)
    raise RuleRangeError(f"{rid} is not a q(Gbar) <= rule")


def threshold(rule: str, ctx: ThresholdContext) -> ThresholdValue:
    """Dispatch on the rule's comparison side."""
    r = resolve_rule(rule)
    if r.side == SIDE_EDGES:
        return edge_threshold(r.id, ctx)
    if r.side == SIDE_Q:
        return q_threshold(r.id, ctx)
    return q_complement_threshold(r.id, ctx)


def rules_for(property_name: str) -> list[Rule]:
    return [r for r in RULES.values() if r.property == property_name]


def catalog_rows() -> list[dict]:
    return [r.to_json() for r in RULES.values()]
