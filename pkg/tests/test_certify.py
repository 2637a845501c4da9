from __future__ import annotations

import json
import math
import random

import pytest

from qconn.batch import analyze_batch, rows_from_graphs
from qconn.certify import (
    BOUNDARY_EXCEPTIONAL,
    CERTIFIED,
    FIRED,
    INAPPLICABLE,
    NOT_CERTIFIED,
    DisconnectedGraphError,
    analyze,
    certify,
    exceptional_match,
)
from qconn.graph import (
    FamilySpec,
    complete,
    construct,
    cycle,
    from_mask,
    is_isomorphic,
    join_cliques,
    petersen,
    star,
)
from qconn.harness import evaluate_batch
from qconn.thresholds import (
    K_CONNECTED,
    MAXIMALLY_CONNECTED,
    PROPERTIES,
    RULES,
    SUPER_KAPPA,
    ThresholdContext,
)


def result(cert, rule_id):
    return next(r for r in cert.rule_results if r.rule == rule_id)


def random_connected(rng, n):
    while True:
        g = from_mask(n, rng.getrandbits(n * (n - 1) // 2))
        if g.is_connected():
            return g


# analyze -----------------------------------------------------------------------

def test_analyze_examples():
    s, p = analyze(cycle(5))
    assert (s.kappa, s.min_degree, s.girth) == (2, 2, 5)
    assert abs(p.q - 4) <= 1e-9 and abs(p.q_bar - 4) <= 1e-9
    s, p = analyze(star(5))
    assert (s.kappa, s.min_degree, s.girth) == (1, 1, math.inf)
    assert abs(p.q - 5) <= 1e-9
    s, _ = analyze(petersen())
    assert (s.kappa, s.min_degree, s.girth, s.triangle_free) == (3, 3, 5, True)


def test_disconnected_input_refused():
    with pytest.raises(DisconnectedGraphError) as info:
        certify(from_mask(4, 0b100001), K_CONNECTED, 2)
    assert info.value.components == [[0, 1], [2, 3]]


# certify -----------------------------------------------------------------------

def test_complete_graph_certified_by_edge_free_q_rule():
    cert = certify(complete(6), K_CONNECTED, 3)
    r = result(cert, "C4.3-q")
    assert float(r.threshold) == 10 and r.fired and r.margin == 0
    assert cert.verdict == CERTIFIED and cert.ground_truth


def test_q0_template_is_boundary_exceptional():
    g = join_cliques(1, 3, 3)
    cert = certify(g, K_CONNECTED, 2)
    r = result(cert, "T4.1-q0")
    assert r.status == BOUNDARY_EXCEPTIONAL
    assert r.exceptional_match == FamilySpec.of("join-cliques", k=1, a=3, b=3)
    assert abs(r.margin) <= 1e-8
    assert not cert.counterexample
    assert cert.structure.kappa == 1 and cert.ground_truth is False


def test_cycle5_not_certified_for_super_kappa():
    cert = certify(cycle(5), SUPER_KAPPA)
    r = result(cert, "T5.7-qbar")
    assert r.applicable and not r.hypothesis_holds
    assert float(r.threshold) == pytest.approx(3.8)
    assert cert.verdict == NOT_CERTIFIED
    assert cert.ground_truth is True


def test_complement_connectivity_gates_rules():
    # C_4 is triangle-free with complement 2K_2
    r = result(certify(cycle(4), SUPER_KAPPA), "T5.7-qbar")
    assert r.status == INAPPLICABLE and r.reason == "complement is disconnected"
    r = result(certify(join_cliques(2, 2, 2), SUPER_KAPPA), "T5.7-qbar")
    assert r.status == INAPPLICABLE and r.reason == "graph has a triangle"


def test_every_rule_of_the_property_is_reported():
    for prop in PROPERTIES:
        cert = certify(cycle(6), prop, 2 if prop == K_CONNECTED else None)
        assert [r.rule for r in cert.rule_results] == [r.id for r in RULES.values() if r.property == prop]


def test_fired_implies_applicable_and_match_implies_isomorphic():
    rng = random.Random(2)
    for _ in range(150):
        g = random_connected(rng, rng.randint(4, 8))
        for prop in PROPERTIES:
            k = 2 if prop == K_CONNECTED else None
            for r in certify(g, prop, k).rule_results:
                if r.fired:
                    assert r.applicable and r.status == FIRED
                if r.exceptional_match is not None:
                    assert is_isomorphic(construct(r.exceptional_match), g)


def test_bad_arguments():
    with pytest.raises(ValueError):
        certify(cycle(5), K_CONNECTED, None)
    with pytest.raises(ValueError):
        certify(cycle(5), "nonsense")


def test_certificate_json_deterministic():
    g = join_cliques(2, 2, 3)
    a = json.dumps(certify(g, K_CONNECTED, 2).to_json(), sort_keys=True)
    b = json.dumps(certify(g.relabel(list(range(g.n))), K_CONNECTED, 2).to_json(), sort_keys=True)
    assert a == b


def test_monotone_coherence():
    rng = random.Random(9)
    for _ in range(200):
        g = random_connected(rng, rng.randint(5, 8))
        for k in range(2, g.min_degree + 1):
            cert = certify(g, K_CONNECTED, k)
            if cert.verdict == CERTIFIED and not cert.counterexample:
                assert all(cert.structure.kappa >= kk for kk in range(2, k + 1))


# exceptional matching ----------------------------------------------------------

def test_exceptional_match_examples():
    g = join_cliques(1, 3, 3)
    assert exceptional_match(g, "T4.1", ThresholdContext(7, 3, 2)) == FamilySpec.of("join-cliques", k=1, a=3, b=3)
    assert exceptional_match(cycle(7), "T4.1", ThresholdContext(7, 2, 2)) is None
    # K_2 v (K_2 u K_3) minus one edge between the K_2 side and the join
    base = join_cliques(2, 2, 3)
    h = base.without_edge(2, 0)
    assert h.min_degree == 2
    assert exceptional_match(h, "T4.9", ThresholdContext(7, 2)) == FamilySpec.of(
        "join-cliques-minus-edge", delta=2, n=7)


# certify agrees with the batch harness -----------------------------------------

@pytest.mark.parametrize("n", [5, 6])
def test_certify_agrees_with_harness(n):
    rng = random.Random(n)
    graphs = [random_connected(rng, n) for _ in range(60)] + [join_cliques(1, 2, n - 3)]
    facts = analyze_batch(rows_from_graphs(graphs))
    for rule in RULES.values():
        inst = evaluate_batch(rule, facts)
        seen = set()
        for i, k, holds, exc, cdisc in zip(inst.graph, inst.k, inst.holds, inst.exceptional,
                                           inst.complement_disconnected):
            g = graphs[int(i)]
            kk = int(k) if rule.property == K_CONNECTED else None
            r = result(certify(g, rule.property, kk), rule.id)
            seen.add((int(i), kk))
            if cdisc:
                assert r.status == INAPPLICABLE
                continue
            assert r.applicable
            assert r.hypothesis_holds == bool(holds)
            assert (r.status == BOUNDARY_EXCEPTIONAL) == bool(exc)
        # nothing the harness skipped is applicable in certify (K_n aside)
        for i, g in enumerate(graphs):
            if rule.property == SUPER_KAPPA and g.is_complete():
                continue
            ks = range(2, n) if rule.property == K_CONNECTED and not rule.k_equals_delta else [None]
            for k in ks:
                if (i, k) in seen:
                    continue
                r = result(certify(g, rule.property, k), rule.id)
                assert not r.applicable, (rule.id, g, k)


def test_maximal_rules_use_min_degree():
    cert = certify(cycle(8), MAXIMALLY_CONNECTED)
    assert cert.k is None and cert.ground_truth is True
