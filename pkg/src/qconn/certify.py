"""Evaluate every applicable rule on a concrete graph and emit a Certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

from .graph import (
    ConstructionError,
    FamilySpec,
    Graph,
    complement,
    construct,
    is_isomorphic,
    iter_bits,
    to_graph6,
)
from .spectral import EPS, SpectralReport, fmt, spectral_report
from .structure import StructureReport, structure_report
from .thresholds import (
    CLASS_GIRTH,
    CLASS_TRIANGLE_FREE,
    K_CONNECTED,
    MAXIMALLY_CONNECTED,
    PROPERTIES,
    RULES,
    SIDE_EDGES,
    SIDE_Q,
    Rule,
    RuleRangeError,
    ThresholdContext,
    ThresholdValue,
    resolve_rule,
    threshold,
)

NEAR_FACTOR = 10

CERTIFIED = "certified"
NOT_CERTIFIED = "not-certified-by-these-rules"

FIRED = "fired"
BOUNDARY_EXCEPTIONAL = "boundary-exceptional"
NOT_SATISFIED = "hypothesis-not-satisfied"
INAPPLICABLE = "inapplicable"


class DisconnectedGraphError(ValueError):
    def __init__(self, components: list[list[int]]):
        super().__init__(f"graph is disconnected; components: {components}")
        self.components = components


def analyze(g: Graph) -> tuple[StructureReport, SpectralReport]:
    if not g.is_connected():
        raise DisconnectedGraphError([list(iter_bits(c)) for c in g.components()])
    return structure_report(g), spectral_report(g)


# exceptional families -------------------------------------------------------

def family_specs(rule: str, n: int, delta: int, k: int) -> list[FamilySpec]:
    """Every admissible parameterisation of a rule's exceptional family."""
    rid = resolve_rule(rule).id
    specs: list[FamilySpec] = []
    if rid in ("T4.1-q0", "T4.2-edge"):
        if n - delta - 1 >= 1 and delta - k + 2 >= 1 and k >= 1:
            specs.append(FamilySpec.of("join-cliques", k=k - 1, a=delta - k + 2, b=n - delta - 1))
    elif rid == "T4.4-qbar":
        for a in range(delta - k + 2, n - delta):
            b = n - k + 1 - a
            if a >= 1 and b >= 1:
                specs.append(FamilySpec.of("join-cliques", k=k - 1, a=a, b=b))
    elif rid == "C4.5-q1":
        if n - delta - 1 >= 1 and delta >= 1:
            specs.append(FamilySpec.of("join-cliques", k=delta - 1, a=2, b=n - delta - 1))
    elif rid == "C4.7-qbar":
        for a in range(2, n - delta):
            b = n - delta + 1 - a
            if b >= 1 and delta >= 1:
                specs.append(FamilySpec.of("join-cliques", k=delta - 1, a=a, b=b))
    elif rid == "T4.9-edge":
        if n >= delta + 3 and delta >= 1:
            specs.append(FamilySpec.of("join-cliques-minus-edge", delta=delta, n=n))
    elif rid == "T5.1-edge":
        for side in ("ceil", "floor"):
            specs.append(FamilySpec.of("triangle-free-extremal", side=side, n=n, delta=delta, k=k))
    return specs


@lru_cache(maxsize=4096)
def family_templates(rule: str, n: int, delta: int, k: int) -> tuple[tuple[FamilySpec, Graph], ...]:
    """Constructible templates, deduplicated up to isomorphism."""
    out: list[tuple[FamilySpec, Graph]] = []
    for spec in family_specs(rule, n, delta, k):
        try:
            g = construct(spec)
        except ConstructionError:
            continue
        if g.n != n or any(is_isomorphic(g, h) for _, h in out):
            continue
        out.append((spec, g))
    return tuple(out)


def exceptional_match(g: Graph, rule: str, ctx: ThresholdContext) -> FamilySpec | None:
    degs = sorted(g.degrees())
    for spec, tmpl in family_templates(resolve_rule(rule).id, ctx.n, ctx.delta, ctx.k):
        if tmpl.m == g.m and sorted(tmpl.degrees()) == degs and is_isomorphic(g, tmpl):
            return spec
    return None


# rule evaluation ------------------------------------------------------------

def inapplicable_reason(
    rule: Rule,
    n: int,
    delta: int,
    k: int,
    girth: float,
    triangle_free: bool,
    complement_connected: bool,
) -> str | None:
    """Why a rule does not apply to a graph with these invariants, or None."""
    if rule.graph_class == CLASS_TRIANGLE_FREE and not triangle_free:
        return "graph has a triangle"
    if rule.graph_class == CLASS_GIRTH and not math.isfinite(girth):
        return "graph is acyclic"
    if rule.needs_connected_complement and not complement_connected:
        return "complement is disconnected"
    if rule.property == K_CONNECTED and delta < k:
        return "delta < k"
    return None


@lru_cache(maxsize=65536)
def rule_threshold(rule_id: str, n: int, delta: int, k: int, girth: float) -> ThresholdValue | str:
    """Threshold for a parameter point, or the range-violation message."""
    rule = RULES[rule_id]
    kk = delta if rule.k_equals_delta else k
    try:
        return threshold(rule_id, ThresholdContext(n, delta, kk, girth))
    except RuleRangeError as exc:
        return str(exc)


def compare(side: str, value: float, thr: ThresholdValue, eps: float = EPS) -> tuple[bool, float, bool]:
    """(hypothesis holds, margin, near boundary); margin >= 0 means satisfied."""
    if side == SIDE_EDGES:
        margin = value - thr.value
        if thr.exact:
            return margin >= 0, float(margin), False
        margin = float(margin)
        return margin >= -eps, margin, abs(margin) <= NEAR_FACTOR * eps
    if side == SIDE_Q:
        margin = value - float(thr.value)
    else:
        margin = float(thr.value) - value
    return margin >= -eps, margin, abs(margin) <= NEAR_FACTOR * eps


@dataclass(frozen=True)
class RuleResult:
    rule: str
    status: str
    applicable: bool
    hypothesis_value: float | int | None = None
    threshold: ThresholdValue | None = None
    hypothesis_holds: bool = False
    fired: bool = False
    margin: float | None = None
    near_boundary: bool = False
    exceptional_match: FamilySpec | None = None
    reason: str | None = None

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "status": self.status,
            "applicable": self.applicable,
            "hypothesis_value": fmt(self.hypothesis_value) if isinstance(self.hypothesis_value, float)
            else self.hypothesis_value,
            "threshold": self.threshold.to_json() if self.threshold else None,
            "hypothesis_holds": self.hypothesis_holds,
            "fired": self.fired,
            "margin": fmt(self.margin),
            "near_boundary": self.near_boundary,
            "exceptional_match": self.exceptional_match.to_json() if self.exceptional_match else None,
            "reason": self.reason,
        }


def evaluate_rule(
    rule: Rule,
    g: Graph,
    structure: StructureReport,
    spectra: SpectralReport,
    k: int,
    complement_connected: bool,
    eps: float = EPS,
) -> RuleResult:
    n, delta = g.n, structure.min_degree
    kk = delta if rule.k_equals_delta else k
    reason = inapplicable_reason(rule, n, delta, kk, structure.girth, structure.triangle_free,
                                 complement_connected)
    if reason is None:
        thr = rule_threshold(rule.id, n, delta, kk, structure.girth)
        if isinstance(thr, str):
            reason = thr
    if reason is not None:
        return RuleResult(rule.id, INAPPLICABLE, False, reason=reason)
    if rule.side == SIDE_EDGES:
        value: float | int = g.m
    elif rule.side == SIDE_Q:
        value = spectra.q
    else:
        value = spectra.q_bar
    holds, margin, near = compare(rule.side, value, thr, eps)
    match = None
    if holds and rule.exceptional:
        match = exceptional_match(g, rule.id, ThresholdContext(n, delta, kk, structure.girth))
    if not holds:
        status = NOT_SATISFIED
    elif match is not None:
        status = BOUNDARY_EXCEPTIONAL
    else:
        status = FIRED
    return RuleResult(
        rule.id, status, True, value, thr, holds, status == FIRED, margin, near, match
    )


def ground_truth(g: Graph, structure: StructureReport, prop: str, k: int) -> bool | None:
    if prop == K_CONNECTED:
        return structure.kappa >= k
    if prop == MAXIMALLY_CONNECTED:
        return structure.kappa == structure.min_degree
    return structure.super_kappa


@dataclass(frozen=True)
class Certificate:
    graph6: str
    property: str
    k: int | None
    structure: StructureReport
    spectra: SpectralReport
    rule_results: tuple[RuleResult, ...]
    verdict: str
    ground_truth: bool | None
    ground_truth_agrees: bool | None
    counterexample: bool = field(default=False)

    def fired_rules(self) -> list[str]:
        return [r.rule for r in self.rule_results if r.fired]

    def to_json(self) -> dict:
        return {
            "graph6": self.graph6,
            "property": self.property,
            "k": self.k,
            "verdict": self.verdict,
            "fired_rules": self.fired_rules(),
            "ground_truth": self.ground_truth,
            "ground_truth_agrees": self.ground_truth_agrees,
            "counterexample": self.counterexample,
            "structure": self.structure.to_json(),
            "spectra": self.spectra.to_json(),
            "rule_results": [r.to_json() for r in self.rule_results],
        }


def certify(g: Graph, prop: str, k: int | None = None, eps: float = EPS) -> Certificate:
    """Run every catalog rule for ``prop`` on ``g``; rules are never short-circuited."""
    if prop not in PROPERTIES:
        raise ValueError(f"property must be one of {PROPERTIES}")
    if prop == K_CONNECTED and (k is None or k < 2):
        raise ValueError("k-connected certification needs k >= 2")
    structure, spectra = analyze(g)
    kk = k if prop == K_CONNECTED else structure.min_degree
    cbar_connected = complement(g).is_connected()
    results = tuple(
        evaluate_rule(rule, g, structure, spectra, kk, cbar_connected, eps)
        for rule in RULES.values()
        if rule.property == prop
    )
    truth = ground_truth(g, structure, prop, kk)
    fired = any(r.fired for r in results)
    exceptional = any(r.status == BOUNDARY_EXCEPTIONAL for r in results)
    counterexample = bool(fired and truth is False)
    if truth is None:
        agrees = None
    else:
        agrees = not counterexample and not (exceptional and truth)
    return Certificate(
        graph6=to_graph6(g),
        property=prop,
        k=k if prop == K_CONNECTED else None,
        structure=structure,
        spectra=spectra,
        rule_results=results,
        verdict=CERTIFIED if fired else NOT_CERTIFIED,
        ground_truth=truth,
        ground_truth_agrees=agrees,
        counterexample=counterexample,
    )
