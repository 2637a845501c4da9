"""Exhaustive verification of the rule catalog on small connected graphs.

Labeled graphs on n <= 7 vertices are enumerated as edge bitmasks in graph6
pair order.  The mask space is cut into fixed chunks of ``2**CHUNK_BITS``
consecutive masks; chunk boundaries never depend on the worker count, and
partial results are folded in chunk order, so reports are reproducible under
any degree of parallelism.  Orders 8..10 come from graph6 corpus files.
"""

from __future__ import annotations

import math
import os
from collections.abc import Callable, Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .batch import MAX_BATCH_ORDER, BatchFacts, analyze_batch, connected_mask, rows_from_graphs, rows_from_masks
from .certify import family_specs, family_templates, rule_threshold
from .graph import (
    ConstructionError,
    FamilySpec,
    Graph,
    Graph6Error,
    complement,
    complete_bipartite,
    construct,
    from_graph6,
    is_isomorphic,
    to_graph6,
)
from .spectral import EPS, fmt, q_index
from .structure import RegimeError, is_super_kappa, is_triangle_free, vertex_connectivity
from .thresholds import (
    CLASS_GIRTH,
    CLASS_TRIANGLE_FREE,
    K_CONNECTED,
    MAXIMALLY_CONNECTED,
    RULES,
    SIDE_EDGES,
    SIDE_Q,
    SUPER_KAPPA,
    Rule,
    girth_edge_bound,
    nu,
    resolve_rule,
)

LABELED_LIMIT = 7
CHUNK_BITS = 16
CORPUS_CHUNK = 4096
SAMPLE_LIMIT = 20
TIGHT_TOL = 1e-8
HISTOGRAM_EDGES = (-math.inf, -8.0, -4.0, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 4.0, 8.0, math.inf)
WORKERS_ENV = "QCONN_WORKERS"


class CorpusError(ValueError):
    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = path
        self.line = line


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# enumeration -----------------------------------------------------------------

def mask_chunks(n: int) -> list[tuple[int, int]]:
    bits = n * (n - 1) // 2
    if bits <= CHUNK_BITS:
        return [(0, 1 << bits)]
    size = 1 << CHUNK_BITS
    return [(c * size, (c + 1) * size) for c in range(1 << (bits - CHUNK_BITS))]


def connected_rows(n: int, lo: int, hi: int) -> np.ndarray:
    rows = rows_from_masks(n, np.arange(lo, hi, dtype=np.uint64))
    return rows[:, connected_mask(rows)]


def enumerate_connected(
    n: int,
    predicate: Callable[[Graph], bool] | None = None,
    corpus: str | Path | None = None,
) -> Iterator[Graph]:
    """Every labeled connected graph on n vertices, in mask order.

    With ``corpus`` the graphs of order n are read from a graph6 file instead.
    """
    if corpus is not None:
        graphs = load_corpus(corpus).get(n, [])
        yield from (g for g in graphs if predicate is None or predicate(g))
        return
    if n > LABELED_LIMIT:
        raise RegimeError(f"labeled enumeration stops at n = {LABELED_LIMIT}; supply a graph6 corpus")
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        g = Graph(1, (0,))
        if predicate is None or predicate(g):
            yield g
        return
    for lo, hi in mask_chunks(n):
        rows = connected_rows(n, lo, hi)
        for i in range(rows.shape[1]):
            g = Graph(n, tuple(int(x) for x in rows[:, i]))
            if predicate is None or predicate(g):
                yield g


def load_corpus(path: str | Path) -> dict[int, list[Graph]]:
    """Connected graphs of a graph6 file grouped by order (file order kept)."""
    out: dict[int, list[Graph]] = {}
    text = Path(path).read_text(encoding="ascii", errors="strict")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        try:
            g = from_graph6(line)
        except Graph6Error as exc:
            raise CorpusError(str(path), lineno, str(exc)) from None
        if g.n > MAX_BATCH_ORDER:
            raise CorpusError(str(path), lineno, f"order {g.n} exceeds {MAX_BATCH_ORDER}")
        if g.n >= 2 and g.is_connected():
            out.setdefault(g.n, []).append(g)
    return out


# per-instance evaluation -----------------------------------------------------

@dataclass
class Instances:
    """All (graph, k) instances of one rule within one batch where the rule applies."""

    graph: np.ndarray       # batch column index
    k: np.ndarray
    margin: np.ndarray
    holds: np.ndarray
    exceptional: np.ndarray
    truth: np.ndarray
    complement_disconnected: np.ndarray


def _k_values(rule: Rule, n: int) -> list[int | None]:
    if rule.property == K_CONNECTED and not rule.k_equals_delta:
        return list(range(2, n))
    return [None]


def _match_templates(facts: BatchFacts, idx: np.ndarray, rule: Rule, delta: int, k: int) -> np.ndarray:
    out = np.zeros(idx.size, dtype=bool)
    templates = family_templates(rule.id, facts.n, delta, k)
    if not templates or not idx.size:
        return out
    sdeg = np.sort(facts.degrees[:, idx], axis=0)
    for _, tmpl in templates:
        tdeg = np.array(sorted(tmpl.degrees()))[:, None]
        cand = (facts.m[idx] == tmpl.m) & (sdeg == tdeg).all(axis=0) & ~out
        for j in np.nonzero(cand)[0]:
            out[j] = is_isomorphic(facts.graph(int(idx[j])), tmpl)
    return out


def evaluate_batch(rule: Rule, facts: BatchFacts, eps: float = EPS) -> Instances:
    n = facts.n
    base = np.ones(facts.size, dtype=bool)
    if rule.graph_class == CLASS_TRIANGLE_FREE:
        base &= facts.triangle_free
    elif rule.graph_class == CLASS_GIRTH:
        base &= np.isfinite(facts.girth)
    if rule.property == SUPER_KAPPA:
        # super-kappa of K_n is a convention, keep it out of the evidence
        base &= facts.m < n * (n - 1) // 2
    if rule.side == SIDE_EDGES:
        value = facts.m.astype(float)
    elif rule.side == SIDE_Q:
        value = facts.q
    else:
        value = facts.q_bar
    girth_key = np.where(np.isfinite(facts.girth), facts.girth, 0).astype(np.int64)
    if rule.graph_class != CLASS_GIRTH:
        girth_key[:] = 3
    parts: list[tuple] = []
    for k in _k_values(rule, n):
        kk = facts.delta if k is None else np.full(facts.size, k, dtype=np.int64)
        active = base & (facts.delta >= kk) if rule.property == K_CONNECTED else base.copy()
        idx = np.nonzero(active)[0]
        if not idx.size:
            continue
        keys = np.stack([facts.delta[idx], kk[idx], girth_key[idx]], axis=1)
        uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
        inverse = inverse.reshape(-1)
        thr = np.zeros(idx.size)
        ok = np.zeros(idx.size, dtype=bool)
        holds = np.zeros(idx.size, dtype=bool)
        margin = np.zeros(idx.size)
        vals = value[idx]
        for u, (d, kv, gk) in enumerate(uniq):
            sel = inverse == u
            tv = rule_threshold(rule.id, n, int(d), int(kv), float(gk))
            if isinstance(tv, str):
                continue
            ok[sel] = True
            if rule.side == SIDE_EDGES and tv.exact:
                num, den = tv.value.numerator, tv.value.denominator
                ms = facts.m[idx[sel]]
                holds[sel] = ms * den >= num
                margin[sel] = ms - float(tv.value)
                continue
            t = float(tv.value)
            thr[sel] = t
            margin[sel] = vals[sel] - t if rule.side in (SIDE_Q, SIDE_EDGES) else t - vals[sel]
            holds[sel] = margin[sel] >= -eps
        idx, margin, holds, kvals = idx[ok], margin[ok], holds[ok], kk[idx][ok]
        delta = facts.delta[idx]
        if rule.needs_connected_complement:
            cdisc = ~facts.complement_connected[idx]
        else:
            cdisc = np.zeros(idx.size, dtype=bool)
        exc = np.zeros(idx.size, dtype=bool)
        if rule.exceptional:
            cand = holds & ~cdisc
            for d, kv in {(int(a), int(b)) for a, b in zip(delta[cand], kvals[cand])}:
                sel = np.nonzero(cand & (delta == d) & (kvals == kv))[0]
                exc[sel] = _match_templates(facts, idx[sel], rule, d, kv)
        if rule.property == K_CONNECTED:
            truth = facts.kappa[idx] >= kvals
        elif rule.property == MAXIMALLY_CONNECTED:
            truth = facts.kappa[idx] == delta
        else:
            truth = facts.super_kappa[idx]
        parts.append((idx, kvals, margin, holds, exc, truth, cdisc))
    if not parts:
        e = np.zeros(0, dtype=np.int64)
        b = np.zeros(0, dtype=bool)
        return Instances(e, e, np.zeros(0), b, b, b, b)
    cols = list(zip(*parts))
    return Instances(*(np.concatenate(c) for c in cols))


# verification reports --------------------------------------------------------

def _best(a: tuple | None, b: tuple | None) -> tuple | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _extreme(facts: BatchFacts, inst: Instances, sel: np.ndarray, key: np.ndarray) -> tuple | None:
    """(key, graph6, k, margin) minimising key over ``sel``, ties broken by graph6 then k."""
    pos = np.nonzero(sel)[0]
    if not pos.size:
        return None
    kmin = key[pos].min()
    tied = pos[key[pos] == kmin]
    return min(
        (float(kmin), facts.graph6(int(inst.graph[j])), int(inst.k[j]), float(inst.margin[j]))
        for j in tied
    )


@dataclass
class RulePartial:
    """Mergeable per-rule tallies; ``merge`` is associative and order-insensitive."""

    scanned_by_n: dict[int, int] = field(default_factory=dict)
    instances_by_n: dict[int, int] = field(default_factory=dict)
    hypothesis_by_n: dict[int, int] = field(default_factory=dict)
    fired: int = 0
    counterexamples: list[tuple[str, int, float]] = field(default_factory=list)
    exceptional_hits: int = 0
    exceptional_samples: list[str] = field(default_factory=list)
    exceptional_with_property: list[tuple[str, int]] = field(default_factory=list)
    min_margin: tuple | None = None
    histogram: list[int] = field(default_factory=lambda: [0] * (len(HISTOGRAM_EDGES) - 1))
    bare_checked: int = 0
    bare_violations: list[tuple[str, int, float]] = field(default_factory=list)

    def merge(self, other: RulePartial) -> RulePartial:
        def add(a: dict, b: dict) -> dict:
            out = dict(a)
            for key, v in b.items():
                out[key] = out.get(key, 0) + v
            return out

        return RulePartial(
            scanned_by_n=add(self.scanned_by_n, other.scanned_by_n),
            instances_by_n=add(self.instances_by_n, other.instances_by_n),
            hypothesis_by_n=add(self.hypothesis_by_n, other.hypothesis_by_n),
            fired=self.fired + other.fired,
            counterexamples=sorted(self.counterexamples + other.counterexamples),
            exceptional_hits=self.exceptional_hits + other.exceptional_hits,
            exceptional_samples=sorted(set(self.exceptional_samples + other.exceptional_samples))[:SAMPLE_LIMIT],
            exceptional_with_property=sorted(self.exceptional_with_property + other.exceptional_with_property),
            min_margin=_best(self.min_margin, other.min_margin),
            histogram=[a + b for a, b in zip(self.histogram, other.histogram)],
            bare_checked=self.bare_checked + other.bare_checked,
            bare_violations=sorted(self.bare_violations + other.bare_violations),
        )


def rule_partial(rule: Rule, facts: BatchFacts, eps: float = EPS) -> RulePartial:
    inst = evaluate_batch(rule, facts, eps)
    n = facts.n
    main = ~inst.complement_disconnected
    hyp = inst.holds & main
    fired = hyp & ~inst.exceptional
    bad = fired & ~inst.truth
    exc = hyp & inst.exceptional
    bare = inst.complement_disconnected
    bare_bad = bare & inst.holds & ~inst.truth
    p = RulePartial(
        scanned_by_n={n: facts.size},
        instances_by_n={n: int(main.sum())},
        hypothesis_by_n={n: int(hyp.sum())},
        fired=int(fired.sum()),
        exceptional_hits=int(exc.sum()),
        bare_checked=int(bare.sum()),
    )
    g6 = facts.graph6
    p.counterexamples = sorted((g6(int(inst.graph[j])), int(inst.k[j]), float(inst.margin[j]))
                               for j in np.nonzero(bad)[0])
    p.exceptional_samples = sorted({g6(int(inst.graph[j])) for j in np.nonzero(exc)[0][:SAMPLE_LIMIT * 4]})[
        :SAMPLE_LIMIT]
    p.exceptional_with_property = sorted((g6(int(inst.graph[j])), int(inst.k[j]))
                                         for j in np.nonzero(exc & inst.truth)[0])
    p.bare_violations = sorted((g6(int(inst.graph[j])), int(inst.k[j]), float(inst.margin[j]))
                               for j in np.nonzero(bare_bad)[0])
    p.min_margin = _extreme(facts, inst, fired, inst.margin)
    counts, _ = np.histogram(inst.margin[main], bins=np.array(HISTOGRAM_EDGES))
    p.histogram = [int(c) for c in counts]
    return p


@dataclass(frozen=True)
class VerificationReport:
    rule: str
    n_range: tuple[int, int]
    provenance: str
    scanned: int
    scanned_by_n: dict[int, int]
    instances: int
    hypothesis_count: int
    hypothesis_by_n: dict[int, int]
    fired: int
    counterexamples: list[tuple[str, int, float]]
    boundary_exceptional: int
    boundary_samples: list[str]
    exceptional_with_property: list[tuple[str, int]]
    min_margin: float | None
    min_margin_witness: str | None
    min_margin_k: int | None
    histogram: list[int]
    complement_disconnected_checked: int | None
    complement_disconnected_violations: list[tuple[str, int, float]] | None

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    @property
    def vacuous(self) -> bool:
        return self.hypothesis_count == 0

    @property
    def biconditional_exact(self) -> bool | None:
        if not RULES[self.rule].biconditional:
            return None
        return not self.counterexamples and not self.exceptional_with_property

    def to_json(self) -> dict:
        rule = RULES[self.rule]
        out = {
            "rule": self.rule,
            "property": rule.property,
            "n_range": list(self.n_range),
            "provenance": self.provenance,
            "passed": self.passed,
            "scanned": self.scanned,
            "scanned_by_n": {str(k): v for k, v in sorted(self.scanned_by_n.items())},
            "instances": self.instances,
            "hypothesis_count": self.hypothesis_count,
            "hypothesis_by_n": {str(k): v for k, v in sorted(self.hypothesis_by_n.items())},
            "vacuous": self.vacuous,
            "fired": self.fired,
            "counterexamples": [{"graph6": g, "k": k, "margin": fmt(m)} for g, k, m in self.counterexamples],
            "boundary_exceptional": self.boundary_exceptional,
            "boundary_samples": self.boundary_samples,
            "exceptional_with_property": [{"graph6": g, "k": k} for g, k in self.exceptional_with_property],
            "biconditional_exact": self.biconditional_exact,
            "min_margin": fmt(self.min_margin),
            "min_margin_witness": self.min_margin_witness,
            "min_margin_k": self.min_margin_k,
            "margin_histogram": {
                "edges": [None if math.isinf(e) else e for e in HISTOGRAM_EDGES],
                "counts": self.histogram,
            },
        }
        if self.complement_disconnected_checked is not None:
            out["complement_disconnected"] = {
                "checked": self.complement_disconnected_checked,
                "bare_implication_violations": [
                    {"graph6": g, "k": k, "margin": fmt(m)} for g, k, m in self.complement_disconnected_violations
                ],
            }
        return out


def _report(rule: Rule, p: RulePartial, n_range: tuple[int, int], provenance: str) -> VerificationReport:
    mm = p.min_margin
    bare = rule.needs_connected_complement
    return VerificationReport(
        rule=rule.id,
        n_range=n_range,
        provenance=provenance,
        scanned=sum(p.scanned_by_n.values()),
        scanned_by_n=dict(sorted(p.scanned_by_n.items())),
        instances=sum(p.instances_by_n.values()),
        hypothesis_count=sum(p.hypothesis_by_n.values()),
        hypothesis_by_n=dict(sorted(p.hypothesis_by_n.items())),
        fired=p.fired,
        counterexamples=p.counterexamples,
        boundary_exceptional=p.exceptional_hits,
        boundary_samples=p.exceptional_samples,
        exceptional_with_property=p.exceptional_with_property,
        min_margin=mm[3] if mm else None,
        min_margin_witness=mm[1] if mm else None,
        min_margin_k=mm[2] if mm else None,
        histogram=p.histogram,
        complement_disconnected_checked=p.bare_checked if bare else None,
        complement_disconnected_violations=p.bare_violations if bare else None,
    )


# lemma suite -----------------------------------------------------------------

LEMMAS = ("quotient-lower", "quotient-upper", "triangle-free-size", "component-order", "girth-size")


@dataclass
class LemmaPartial:
    checked: dict[str, int] = field(default_factory=lambda: dict.fromkeys(LEMMAS, 0))
    violations: dict[str, list[str]] = field(default_factory=lambda: {k: [] for k in LEMMAS})
    equality: dict[str, int] = field(default_factory=lambda: dict.fromkeys(LEMMAS, 0))

    def merge(self, other: LemmaPartial) -> LemmaPartial:
        return LemmaPartial(
            {k: self.checked[k] + other.checked[k] for k in LEMMAS},
            {k: sorted(self.violations[k] + other.violations[k]) for k in LEMMAS},
            {k: self.equality[k] + other.equality[k] for k in LEMMAS},
        )


def lemma_partial(facts: BatchFacts, tol: float = EPS) -> LemmaPartial:
    n = facts.n
    p = LemmaPartial()
    g6 = facts.graph6
    m = facts.m.astype(float)
    regular = facts.degrees.max(axis=0) == facts.delta
    size = facts.size

    def flag(name: str, bad: np.ndarray, checked: int, eq: int = 0) -> None:
        p.checked[name] += checked
        p.equality[name] += eq
        p.violations[name] += [g6(int(i)) for i in np.nonzero(bad)[0]]

    # q >= 4m/n, equality exactly for regular graphs
    low = 4 * m / n
    eq = np.abs(facts.q - low) <= tol
    flag("quotient-lower", (facts.q < low - tol) | (eq != regular), size, int(eq.sum()))

    # q <= 2m/(n-1) + n - 2, equality exactly for K_n and K_{1,n-1}
    high = 2 * m / (n - 1) + n - 2
    eq = np.abs(facts.q - high) <= tol
    extremal = (facts.m == n * (n - 1) // 2) | ((facts.m == n - 1) & (facts.degrees.max(axis=0) == n - 1))
    flag("quotient-upper", (facts.q > high + tol) | (eq != extremal), size, int(eq.sum()))

    # triangle-free: m <= floor(n^2/4), equality only for the balanced complete bipartite graph
    tf = np.nonzero(facts.triangle_free)[0]
    cap = n * n // 4
    balanced = complete_bipartite(n // 2, n - n // 2)
    bad = np.zeros(size, dtype=bool)
    bad[tf] = facts.m[tf] > cap
    at_cap = tf[facts.m[tf] == cap]
    for i in at_cap:
        bad[i] |= not is_isomorphic(facts.graph(int(i)), balanced)
    flag("triangle-free-size", bad, int(tf.size), int(at_cap.size))

    # every component left by a minimum cut has at least nu(delta, g, kappa) vertices when kappa < delta
    sel = np.nonzero((facts.delta >= 2) & (facts.kappa < facts.delta))[0]
    bad = np.zeros(size, dtype=bool)
    for i in sel:
        bound = nu(int(facts.delta[i]), int(facts.girth[i]), int(facts.kappa[i]))
        bad[i] = facts.min_component[i] < bound
    flag("component-order", bad, int(sel.size))

    # strict girth-size bound
    cyc = np.nonzero(np.isfinite(facts.girth))[0]
    bad = np.zeros(size, dtype=bool)
    for g in {int(x) for x in facts.girth[cyc]}:
        grp = cyc[facts.girth[cyc] == g]
        bad[grp] = facts.m[grp] >= girth_edge_bound(n, g)
    flag("girth-size", bad, int(cyc.size))
    return p


@dataclass(frozen=True)
class LemmaReport:
    n_range: tuple[int, int]
    provenance: str
    checked: dict[str, int]
    equality_cases: dict[str, int]
    violations: dict[str, list[str]]

    @property
    def passed(self) -> bool:
        return not any(self.violations.values())

    def to_json(self) -> dict:
        return {
            "n_range": list(self.n_range),
            "provenance": self.provenance,
            "passed": self.passed,
            "checked": self.checked,
            "equality_cases": self.equality_cases,
            "violations": self.violations,
        }


# work distribution -----------------------------------------------------------

def _work_items(n_range: tuple[int, int], corpus: str | Path | None) -> tuple[list[tuple], str]:
    lo, hi = n_range
    if lo < 2 or hi < lo:
        raise ValueError(f"bad order range {n_range}")
    items: list[tuple] = []
    if corpus is not None:
        graphs = load_corpus(corpus)
        for n in range(lo, hi + 1):
            gs = graphs.get(n, [])
            for s in range(0, len(gs), CORPUS_CHUNK):
                items.append(("rows", n, rows_from_graphs(gs[s:s + CORPUS_CHUNK])))
        return items, f"corpus:{Path(corpus).name}"
    if hi > LABELED_LIMIT:
        raise RegimeError(f"labeled enumeration stops at n = {LABELED_LIMIT}; supply a graph6 corpus")
    for n in range(lo, hi + 1):
        items.extend(("masks", n, (a, b)) for a, b in mask_chunks(n))
    return items, "labeled-exhaustive"


def _facts(item: tuple, with_components: bool) -> BatchFacts | None:
    kind, n, payload = item
    rows = connected_rows(n, *payload) if kind == "masks" else payload
    if not rows.shape[1]:
        return None
    return analyze_batch(rows, with_components=with_components)


def _verify_work(args: tuple) -> tuple[list[RulePartial], LemmaPartial | None]:
    item, rule_ids, eps, lemmas = args
    facts = _facts(item, with_components=lemmas)
    if facts is None:
        return [RulePartial() for _ in rule_ids], (LemmaPartial() if lemmas else None)
    parts = [rule_partial(RULES[r], facts, eps) for r in rule_ids]
    return parts, (lemma_partial(facts) if lemmas else None)


def _run(fn: Callable, jobs: Sequence, workers: int) -> Iterable:
    if workers <= 1 or len(jobs) <= 1:
        return map(fn, jobs)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=1))


def verify_rules(
    rules: Iterable[str] | None = None,
    n_range: tuple[int, int] = (2, LABELED_LIMIT),
    corpus: str | Path | None = None,
    workers: int | None = None,
    eps: float = EPS,
    lemmas: bool = False,
) -> tuple[list[VerificationReport], LemmaReport | None]:
    """Scan every graph in range once and verify all requested rules on it."""
    ids = [resolve_rule(r).id for r in (rules if rules is not None else RULES)]
    items, provenance = _work_items(n_range, corpus)
    jobs = [(item, ids, eps, lemmas) for item in items]
    totals = [RulePartial() for _ in ids]
    lemma_total = LemmaPartial() if lemmas else None
    for parts, lp in _run(_verify_work, jobs, workers or default_workers()):
        totals = [a.merge(b) for a, b in zip(totals, parts)]
        if lemmas:
            lemma_total = lemma_total.merge(lp)
    reports = [_report(RULES[r], p, n_range, provenance) for r, p in zip(ids, totals)]
    lemma_report = None
    if lemma_total is not None:
        lemma_report = LemmaReport(n_range, provenance, lemma_total.checked, lemma_total.equality,
                                   lemma_total.violations)
    return reports, lemma_report


def verify_rule(
    rule: str,
    n_range: tuple[int, int] = (2, LABELED_LIMIT),
    corpus: str | Path | None = None,
    workers: int | None = None,
    eps: float = EPS,
) -> VerificationReport:
    return verify_rules([rule], n_range, corpus, workers, eps)[0][0]


def verify_lemmas(
    n_range: tuple[int, int] = (2, LABELED_LIMIT),
    corpus: str | Path | None = None,
    workers: int | None = None,
) -> LemmaReport:
    return verify_rules([], n_range, corpus, workers, lemmas=True)[1]


# margin sweep ----------------------------------------------------------------

SWEEP_COLUMNS = (
    "rule", "n", "delta", "k", "instances", "hypothesis_count", "min_margin", "max_margin",
    "mean_margin", "closest_non_template_margin", "closest_non_template_graph6",
)


@dataclass
class SweepCell:
    count: int = 0
    hyp: int = 0
    lo: float = math.inf
    hi: float = -math.inf
    total: float = 0.0
    closest: tuple | None = None

    def merge(self, other: SweepCell) -> SweepCell:
        return SweepCell(
            self.count + other.count, self.hyp + other.hyp, min(self.lo, other.lo), max(self.hi, other.hi),
            self.total + other.total, _best(self.closest, other.closest),
        )


def _sweep_work(args: tuple) -> dict[tuple[int, int, int], SweepCell]:
    item, rule_id, eps = args
    facts = _facts(item, with_components=False)
    out: dict[tuple[int, int, int], SweepCell] = {}
    if facts is None:
        return out
    inst = evaluate_batch(RULES[rule_id], facts, eps)
    main = ~inst.complement_disconnected
    delta = facts.delta[inst.graph]
    for d, k in sorted({(int(a), int(b)) for a, b in zip(delta[main], inst.k[main])}):
        sel = main & (delta == d) & (inst.k == k)
        mg = inst.margin[sel]
        near = sel & ~(inst.holds & inst.exceptional)
        out[(facts.n, d, k)] = SweepCell(
            count=int(sel.sum()),
            hyp=int((sel & inst.holds).sum()),
            lo=float(mg.min()),
            hi=float(mg.max()),
            total=float(mg.sum()),
            closest=_extreme(facts, inst, near, np.abs(inst.margin)),
        )
    return out


def margin_sweep(
    rule: str,
    n_range: tuple[int, int] = (2, LABELED_LIMIT),
    corpus: str | Path | None = None,
    workers: int | None = None,
    eps: float = EPS,
) -> list[dict]:
    """Per (n, delta, k): margin distribution and the closest non-template graph."""
    rid = resolve_rule(rule).id
    items, _ = _work_items(n_range, corpus)
    cells: dict[tuple[int, int, int], SweepCell] = {}
    for part in _run(_sweep_work, [(item, rid, eps) for item in items], workers or default_workers()):
        for key, cell in part.items():
            cells[key] = cells[key].merge(cell) if key in cells else cell
    rows = []
    for (n, d, k), c in sorted(cells.items()):
        rows.append({
            "rule": rid, "n": n, "delta": d, "k": k, "instances": c.count, "hypothesis_count": c.hyp,
            "min_margin": fmt(c.lo), "max_margin": fmt(c.hi), "mean_margin": fmt(c.total / c.count),
            "closest_non_template_margin": fmt(c.closest[3]) if c.closest else None,
            "closest_non_template_graph6": c.closest[1] if c.closest else None,
        })
    return rows


# tightness -------------------------------------------------------------------

@dataclass(frozen=True)
class TightnessPoint:
    n: int
    delta: int
    k: int
    family: FamilySpec | None
    graph6: str | None
    hypothesis_value: float | int | None
    threshold: float | None
    meets_threshold: bool
    kappa: int | None
    fails_property: bool
    triangle_free: bool | None
    note: str | None = None

    @property
    def passed(self) -> bool:
        return self.note is None and self.meets_threshold and self.fails_property and self.triangle_free is not False

    def to_json(self) -> dict:
        return {
            "n": self.n, "delta": self.delta, "k": self.k,
            "family": self.family.to_json() if self.family else None,
            "graph6": self.graph6,
            "hypothesis_value": fmt(self.hypothesis_value) if isinstance(self.hypothesis_value, float)
            else self.hypothesis_value,
            "threshold": fmt(self.threshold),
            "meets_threshold": self.meets_threshold,
            "kappa": self.kappa,
            "fails_property": self.fails_property,
            "triangle_free": self.triangle_free,
            "note": self.note,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class TightnessReport:
    rule: str
    points: list[TightnessPoint]

    @property
    def checked(self) -> list[TightnessPoint]:
        return [p for p in self.points if p.note is None]

    @property
    def passed(self) -> bool:
        return bool(self.checked) and all(p.passed for p in self.checked)

    def to_json(self) -> dict:
        return {"rule": self.rule, "passed": self.passed, "points": [p.to_json() for p in self.points]}


def _tight_point(rule: Rule, spec: FamilySpec, n: int, delta: int, k: int) -> TightnessPoint:
    kk = delta if rule.k_equals_delta or rule.property != K_CONNECTED else k
    try:
        g = construct(spec)
    except ConstructionError as exc:
        return TightnessPoint(n, delta, k, spec, None, None, None, False, None, False, None, str(exc))
    if g.n != n or g.min_degree != delta:
        return TightnessPoint(n, delta, k, spec, None, None, None, False, None, False, None,
                              f"template has order {g.n} and minimum degree {g.min_degree}")
    tv = rule_threshold(rule.id, n, delta, kk, 3.0)
    if isinstance(tv, str):
        return TightnessPoint(n, delta, k, spec, to_graph6(g),
                              None, None, False, None, False, None, tv)
    if rule.side == SIDE_EDGES:
        value: float | int = g.m
        meets = g.m == tv.value if tv.exact else abs(g.m - float(tv.value)) <= TIGHT_TOL
    elif rule.side == SIDE_Q:
        value = q_index(g)
        meets = abs(value - float(tv.value)) <= TIGHT_TOL
    else:
        value = q_index(complement(g))
        # the complement is complete bipartite plus isolated vertices: integer Q-index
        meets = abs(value - round(value)) <= EPS and round(value) == tv.value
    kappa = vertex_connectivity(g)[0]
    if rule.property == K_CONNECTED:
        fails = kappa < kk
    elif rule.property == MAXIMALLY_CONNECTED:
        fails = kappa < delta
    else:
        fails = not is_super_kappa(g)
    tf = is_triangle_free(g) if rule.graph_class == CLASS_TRIANGLE_FREE else None
    return TightnessPoint(n, delta, k, spec, to_graph6(g), value, float(tv.value), bool(meets), kappa, fails, tf)


def tightness(rule: str, grid: Iterable[tuple[int, int, int]]) -> TightnessReport:
    """Check every exceptional template on a grid of (n, delta, k) points."""
    r = resolve_rule(rule)
    if not r.exceptional:
        raise ValueError(f"{r.id} has no exceptional family")
    points: list[TightnessPoint] = []
    for n, delta, k in grid:
        specs = family_specs(r.id, n, delta, k)
        if not specs:
            points.append(TightnessPoint(n, delta, k, None, None, None, None, False, None, False, None,
                                         "no admissible family parameters"))
            continue
        points.extend(_tight_point(r, spec, n, delta, k) for spec in specs)
    return TightnessReport(r.id, points)

