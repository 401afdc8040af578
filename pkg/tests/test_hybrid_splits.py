import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybriddp import brute
from hybriddp.classical import feedback_arc_set_dp, tsp_held_karp
from hybriddp.hybrid.splits import (
    _ranks,
    _size_class,
    fas_prefix_table,
    fas_split_level,
    hybrid_feedback_arc_set,
    hybrid_tsp,
    path_tables,
    split_level,
    split_value,
)
from hybriddp.instances import UNREACHABLE, DirectedGraph, WeightedGraph, generate_random

seeds = st.integers(0, 2**32)


def complete_graph(n, w=1):
    return WeightedGraph.from_edges(n, [(u, v, w) for u in range(n) for v in range(u + 1, n)])


def test_split_identity_k8_exhaustive():
    n = 8
    g = generate_random("tsp", n, 7, wmin=1, wmax=9)
    F = path_tables(g, n)
    rank = _ranks(n)

    def f(X, u, t):
        return F[X.bit_count()][rank[X], u, t]

    checked = 0
    for s in range(3, n + 1):
        for S in (m for m in range(1 << n) if m.bit_count() == s):
            members = [b for b in range(n) if S >> b & 1]
            for u, v in itertools.permutations(members, 2):
                want = F[s][rank[S], u, v]
                for k in range(2, s):
                    assert split_value(f, S, u, v, k) == want
                    checked += 1
    assert checked > 10_000


def test_split_level_matches_scalar_split():
    n = 8
    g = generate_random("tsp", n, 3, wmin=1, wmax=50, density=0.7)
    F = path_tables(g, n)
    rank = _ranks(n)
    s, k = 5, 3
    got = split_level(n, s, k, F[k], F[s - k + 1])
    masks, _ = _size_class(n, s)
    np.testing.assert_array_equal(got, F[s])
    for S in masks[:10]:
        S = int(S)
        for u, v in itertools.permutations([b for b in range(n) if S >> b & 1], 2):
            want = split_value(lambda X, a, t: F[X.bit_count()][rank[X], a, t], S, u, v, k)
            assert got[rank[S], u, v] == want


def test_tsp_examples():
    c4 = WeightedGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert hybrid_tsp(c4).answer == 4
    assert hybrid_tsp(complete_graph(4)).answer == 4
    with pytest.raises(ValueError):
        hybrid_tsp(complete_graph(2))
    with pytest.raises(ValueError):
        hybrid_tsp(complete_graph(19))


def test_tsp_path_graph_unreachable():
    g = WeightedGraph.from_edges(12, [(i, i + 1) for i in range(11)])
    assert hybrid_tsp(g).answer is UNREACHABLE


def test_tsp_level_costs_increase():
    res = hybrid_tsp(generate_random("tsp", 14, 1))
    assert res.path_taken == "hybrid"
    costs = res.trace["level_costs"]
    assert all(b > a for a, b in zip(costs, costs[1:]))


def test_tsp_k8_seed7():
    g = generate_random("tsp", 8, 7, wmin=1, wmax=9)
    assert hybrid_tsp(g).answer == brute.brute_tsp(g)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 13), seeds, st.sampled_from([1.0, 0.5]))
def test_tsp_matches_held_karp(n, seed, density):
    g = generate_random("tsp", n, seed, wmin=1, wmax=99, density=density)
    assert hybrid_tsp(g).answer == tsp_held_karp(g)


@settings(max_examples=15, deadline=None)
@given(st.integers(6, 12), seeds, st.floats(min_value=0.05, max_value=0.5))
def test_tsp_any_alpha_is_exact(n, seed, alpha):
    g = generate_random("tsp", n, seed)
    assert hybrid_tsp(g, alpha).answer == tsp_held_karp(g)


def test_fas_examples():
    dag = DirectedGraph.from_arcs(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)])
    assert hybrid_feedback_arc_set(dag).answer == 0
    tri = DirectedGraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])
    assert hybrid_feedback_arc_set(tri).answer == 1


def test_fas_split_level_matches_prefix_table():
    g = generate_random("digraph", 9, 4, density=0.4)
    pre = fas_prefix_table(g, 9)
    masks, _ = _size_class(9, 6)
    np.testing.assert_array_equal(fas_split_level(g, 6, 2, pre, pre), pre[masks])


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 12), seeds, st.booleans())
def test_fas_matches_dp(n, seed, tournament):
    g = generate_random("digraph", n, seed, tournament=tournament, density=0.35)
    res = hybrid_feedback_arc_set(g)
    assert res.answer == feedback_arc_set_dp(g)
    if n >= 8:
        assert res.path_taken == "hybrid"


def test_fas_quantum_exponent_below_two():
    n = 16
    res = hybrid_feedback_arc_set(generate_random("digraph", n, 2, tournament=True))
    assert math.log2(res.ledger.quantum_cost) / n < 1.0
