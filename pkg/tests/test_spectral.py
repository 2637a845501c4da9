from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qconn.graph import (
    Graph,
    complete,
    complete_bipartite,
    cycle,
    disjoint_union,
    empty,
    from_mask,
    join_cliques,
    star,
)
from qconn.spectral import (
    CROSS_CHECK_TOL,
    EPS,
    BracketError,
    Cubic,
    jacobi_eigenvalues,
    join_cubic,
    largest_real_root,
    power_iteration_q,
    printed_q0_cubic,
    printed_q1_cubic,
    printed_q2_cubic,
    q0_cubic,
    q1_cubic,
    q2_cubic,
    q_index,
    signless_laplacian,
    spectral_report,
)

from . import oracles


@st.composite
def connected_graphs(draw, min_n: int = 2, max_n: int = 10):
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    edges = {tuple(sorted((perm[i], perm[draw(st.integers(0, i - 1))]))) for i in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=n * 2))
    edges |= {tuple(sorted(e)) for e in extra if e[0] != e[1]}
    return Graph.from_edges(n, edges)


# Q matrix ----------------------------------------------------------------------

def test_signless_laplacian_examples():
    assert signless_laplacian(complete(2)).tolist() == [[1, 1], [1, 1]]
    assert not signless_laplacian(empty(3)).any()
    q = signless_laplacian(cycle(4))
    a = q - 2 * np.eye(4, dtype=int)
    assert (np.diag(a) == 0).all() and (a.sum(axis=1) == 2).all()


@given(connected_graphs())
def test_q_matrix_invariants(g):
    q = signless_laplacian(g)
    assert (q == q.T).all()
    assert list(np.diag(q)) == g.degrees()
    assert list(q.sum(axis=1)) == [2 * d for d in g.degrees()]


# Q-index -----------------------------------------------------------------------

@pytest.mark.parametrize("g,value", [
    (complete(4), 6.0),
    (complete_bipartite(2, 3), 5.0),
    (cycle(5), 4.0),
    (star(5), 5.0),
    (complete(1), 0.0),
])
def test_q_index_examples(g, value):
    assert abs(q_index(g) - value) <= EPS


def test_star_attains_upper_bound():
    r = spectral_report(star(5))
    assert abs(r.q - r.upper_bound) <= EPS


def test_disconnected_q_is_component_max():
    g = disjoint_union(complete(4), cycle(5))
    assert abs(q_index(g) - 6.0) <= EPS
    assert q_index(empty(3)) == 0.0


@settings(max_examples=60)
@given(connected_graphs(max_n=12))
def test_jacobi_matches_lapack_and_power_iteration(g):
    q = q_index(g)
    assert abs(q - oracles.q_index(g)) <= EPS
    assert abs(q - power_iteration_q(g)) <= CROSS_CHECK_TOL


def test_jacobi_full_spectrum_random_symmetric():
    rng = np.random.default_rng(3)
    for n in (2, 5, 9, 16):
        a = rng.normal(size=(n, n))
        a = a + a.T
        assert np.allclose(jacobi_eigenvalues(a), np.linalg.eigvalsh(a), atol=1e-9)


@pytest.mark.parametrize("a,b", [(a, b) for a in range(1, 13) for b in range(a, 13)])
def test_complete_bipartite_exact(a, b):
    assert abs(q_index(complete_bipartite(a, b)) - (a + b)) <= EPS


@settings(max_examples=60)
@given(connected_graphs(max_n=10), st.data())
def test_q_bounds_and_regular_equality(g, data):
    r = spectral_report(g)
    assert r.lower_bound - EPS <= r.q <= r.upper_bound + EPS
    assert (abs(r.q - r.lower_bound) <= EPS) == g.is_regular()


def test_upper_bound_equality_only_for_complete_and_star():
    rng = random.Random(11)
    for _ in range(300):
        n = rng.randint(3, 8)
        g = from_mask(n, rng.getrandbits(n * (n - 1) // 2))
        if not g.is_connected():
            continue
        r = spectral_report(g)
        tight = abs(r.q - r.upper_bound) <= EPS
        assert tight == (g.is_complete() or (g.m == n - 1 and max(g.degrees()) == n - 1))


def test_edge_monotonicity():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(3, 9)
        g = from_mask(n, rng.getrandbits(n * (n - 1) // 2))
        missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
        if not missing:
            continue
        h = g.with_edge(*rng.choice(missing))
        assert q_index(h) >= q_index(g) - EPS


# cubics ------------------------------------------------------------------------

def test_largest_root_examples():
    assert abs(largest_real_root(Cubic(6, 11, 6)) - 3.0) <= 1e-12
    assert largest_real_root(Cubic(0, 0, 0)) == 0.0
    r = largest_real_root(join_cubic(6, 2, 2, 2))
    assert 4 < r < 10


def test_largest_root_repeated_roots():
    # (x-2)^3 and (x-1)(x-4)^2
    assert abs(largest_real_root(Cubic(6, 12, 8)) - 2.0) <= 1e-9
    assert abs(largest_real_root(Cubic(9, 24, 16)) - 4.0) <= 1e-9


def test_bracket_error():
    with pytest.raises(BracketError):
        largest_real_root(Cubic(6, 11, 6, bracket=(5, 8)))


@given(st.integers(-30, 30), st.integers(-30, 30), st.integers(-30, 30))
def test_largest_root_residual(r1, r2, r3):
    c = Cubic(r1 + r2 + r3, r1 * r2 + r1 * r3 + r2 * r3, r1 * r2 * r3)
    root = largest_real_root(c)
    assert abs(root - max(r1, r2, r3)) <= 1e-6
    assert abs(c(root)) <= 1e-6 * max(1, abs(c.c0))


@pytest.mark.parametrize("n,k,a,b", [(6, 2, 2, 2), (7, 1, 3, 3)])
def test_join_cubic_examples(n, k, a, b):
    root = largest_real_root(join_cubic(n, k, a, b))
    assert abs(root - oracles.q_index(join_cliques(k, a, b))) <= CROSS_CHECK_TOL


def test_join_cubic_exceeds_n_minus_2():
    assert largest_real_root(join_cubic(9, 3, 2, 4)) > 7


def test_join_cubic_rejects_bad_parameters():
    with pytest.raises(ValueError):
        join_cubic(7, 1, 3, 2)
    with pytest.raises(ValueError):
        join_cubic(5, 0, 0, 5)


def test_join_cubic_grid_matches_eigensolver():
    worst = 0.0
    for n in range(2, 21):
        for k in range(0, n - 1):
            for a in range(1, n - k):
                b = n - k - a
                if b < a:
                    continue
                root = largest_real_root(join_cubic(n, k, a, b))
                worst = max(worst, abs(root - q_index(join_cliques(k, a, b))))
    assert worst <= CROSS_CHECK_TOL


def test_join_cubic_above_n_minus_2_in_admissible_range():
    for n in range(4, 21):
        for delta in range(1, n - 1):
            for k in range(1, delta + 1):
                for a in range(delta - k + 1, n - delta):
                    b = n - k - a
                    if a <= b <= n - delta - 1 and a >= 1:
                        assert largest_real_root(join_cubic(n, k, a, b)) > n - 2


def test_printed_q0_matches_specialization():
    for n in range(4, 30):
        for delta in range(2, n - 1):
            for k in range(2, delta + 1):
                assert printed_q0_cubic(n, delta, k).coefficients() == q0_cubic(n, delta, k).coefficients()


def test_printed_q1_matches_specialization():
    for n in range(4, 30):
        for delta in range(2, n - 1):
            assert printed_q1_cubic(n, delta).coefficients() == q1_cubic(n, delta).coefficients()
            assert q0_cubic(n, delta, delta).coefficients() == q1_cubic(n, delta).coefficients()


def test_printed_q2_matches_specialization():
    for n in range(5, 30):
        for delta in range(2, n - 2):
            assert printed_q2_cubic(n, delta).coefficients() == q2_cubic(n, delta).coefficients()


def test_named_cubic_examples():
    assert abs(largest_real_root(q2_cubic(8, 3)) - q_index(join_cliques(3, 2, 3))) <= CROSS_CHECK_TOL
    # K_{k-1} v (K_{delta-k+2} u K_{n-delta-1}) at (7, 3, 2) is K_1 v (K_3 u K_3)
    assert abs(largest_real_root(q0_cubic(7, 3, 2)) - q_index(join_cliques(1, 3, 3))) <= CROSS_CHECK_TOL


def test_named_cubic_ranges():
    with pytest.raises(ValueError):
        q0_cubic(7, 2, 3)
    with pytest.raises(ValueError):
        q1_cubic(4, 3)
    with pytest.raises(ValueError):
        q2_cubic(5, 3)
