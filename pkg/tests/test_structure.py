from __future__ import annotations

import math
from itertools import islice

import numpy as np
import pytest

from qconn.batch import analyze_batch, rows_from_graphs
from qconn.graph import (
    complete,
    complete_bipartite,
    components_within,
    cycle,
    from_mask,
    iter_bits,
    join_cliques,
    path,
    petersen,
    read_graph6_lines,
    set_to_bits,
    star,
)
from qconn.spectral import q_index
from qconn.structure import (
    ENUMERATION_LIMIT,
    RegimeError,
    all_min_cuts,
    connectivity_by_subsets,
    girth,
    is_maximally_connected,
    is_super_kappa,
    is_triangle_free,
    structure_report,
    vertex_connectivity,
)

from . import oracles


def corpus_graphs(path, n):
    with open(path) as fh:
        return [g for g in read_graph6_lines(fh) if g.n == n]


# connectivity ------------------------------------------------------------------

@pytest.mark.parametrize("g,kappa", [
    (complete(4), 3),
    (cycle(5), 2),
    (petersen(), 3),
])
def test_kappa_examples(g, kappa):
    assert vertex_connectivity(g)[0] == kappa


def test_join_cliques_witness_is_join_vertices():
    k, witness = vertex_connectivity(join_cliques(2, 3, 3))
    assert k == 2
    assert witness.cut == (0, 1)
    assert [len(c) for c in witness.components] == [3, 3]


def test_complete_graph_convention():
    k, witness = vertex_connectivity(complete(5))
    assert k == 4
    assert len(witness.cut) == 4


def test_disconnected_kappa_zero():
    g = from_mask(4, 0b1)
    assert vertex_connectivity(g)[0] == 0
    assert not structure_report(g).maximally_connected


def test_flow_kappa_matches_subset_oracle_labeled():
    for n in range(2, 6):
        for mask in range(1 << (n * (n - 1) // 2)):
            g = from_mask(n, mask)
            if g.is_connected():
                assert vertex_connectivity(g)[0] == oracles.kappa(g) == connectivity_by_subsets(g)


@pytest.mark.parametrize("n", [6, 7])
def test_flow_kappa_matches_subset_oracle_classes(connected_corpus, n):
    for g in corpus_graphs(connected_corpus, n):
        k, witness = vertex_connectivity(g)
        assert k == oracles.kappa(g)
        if k < n - 1:
            assert len(witness.cut) == k
            assert len(witness.components) >= 2


# minimum cuts ------------------------------------------------------------------

def test_min_cuts_examples():
    cuts = all_min_cuts(cycle(5))
    assert len(cuts) == 5
    assert all((b - a) % 5 in (2, 3) for a, b in cuts)
    assert all_min_cuts(star(5)) == [(0,)]
    assert (0, 3) in all_min_cuts(cycle(6))


def test_min_cuts_regime_error():
    with pytest.raises(RegimeError):
        all_min_cuts(cycle(ENUMERATION_LIMIT + 1))


def test_min_cuts_match_oracle():
    for n in range(3, 7):
        for mask in range(0, 1 << (n * (n - 1) // 2), 7):
            g = from_mask(n, mask)
            if g.is_connected() and not g.is_complete():
                assert {frozenset(c) for c in all_min_cuts(g)} == {frozenset(c) for c in oracles.min_cuts(g)}


# girth -------------------------------------------------------------------------

@pytest.mark.parametrize("g,value", [
    (cycle(5), 5),
    (complete_bipartite(3, 3), 4),
    (path(4), math.inf),
    (petersen(), 5),
])
def test_girth_examples(g, value):
    assert girth(g) == value


def test_girth_matches_oracle(connected_corpus):
    for n in range(3, 7):
        for g in corpus_graphs(connected_corpus, n):
            assert girth(g) == oracles.girth(g)


# predicates --------------------------------------------------------------------

def test_maximally_connected_examples():
    assert is_maximally_connected(cycle(7))
    assert not is_maximally_connected(join_cliques(1, 2, 2))
    assert is_maximally_connected(complete_bipartite(2, 3))


def test_super_kappa_examples():
    assert is_super_kappa(cycle(5))
    assert not is_super_kappa(cycle(6))
    g = join_cliques(2, 2, 3)
    assert g.min_degree == 3
    assert not is_super_kappa(g)
    assert is_super_kappa(complete(4))


def test_triangle_free_examples():
    assert is_triangle_free(complete_bipartite(3, 3))
    assert not is_triangle_free(complete(4))
    assert is_triangle_free(petersen())


@pytest.mark.parametrize("n", [5, 6, 7])
def test_super_kappa_matches_oracle(connected_corpus, n):
    for g in corpus_graphs(connected_corpus, n):
        if not g.is_complete():
            assert is_super_kappa(g) == oracles.super_kappa(g)


@pytest.mark.parametrize("n", [4, 5, 6, 7])
def test_whitney_and_super_implies_maximal(connected_corpus, n):
    for g in corpus_graphs(connected_corpus, n):
        r = structure_report(g)
        assert r.kappa <= r.min_degree
        if r.super_kappa:
            assert r.maximally_connected


def test_structure_report_json():
    r = structure_report(cycle(6)).to_json()
    assert r["kappa"] == 2 and r["girth"] == 6 and r["super_kappa"] is False
    assert r["witness"]["cut"] and len(r["witness"]["components"]) == 2
    assert structure_report(path(3)).to_json()["girth"] is None


# batch engine ------------------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_batch_agrees_with_scalar(connected_corpus, n):
    graphs = list(islice(corpus_graphs(connected_corpus, n), 400))
    facts = analyze_batch(rows_from_graphs(graphs))
    for i, g in enumerate(graphs):
        r = structure_report(g)
        assert facts.graph(i) == g
        assert facts.kappa[i] == r.kappa
        assert facts.delta[i] == r.min_degree
        assert facts.m[i] == g.m
        assert facts.girth[i] == r.girth
        assert bool(facts.triangle_free[i]) == r.triangle_free
        assert abs(facts.q[i] - q_index(g)) <= 1e-9
        if not g.is_complete():
            assert bool(facts.super_kappa[i]) == r.super_kappa
            smallest = min(len(c) for cut in all_min_cuts(g) for c in _components(g, cut))
            assert facts.min_component[i] == smallest


def _components(g, cut):
    return [list(iter_bits(c)) for c in components_within(g.adj, g.full_mask & ~set_to_bits(cut))]


def test_batch_rejects_large_order():
    with pytest.raises(ValueError):
        analyze_batch(np.zeros((11, 1), dtype=np.uint16))
