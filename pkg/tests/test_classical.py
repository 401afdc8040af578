import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybriddp import brute
from hybriddp.bandwidth import BucketLayout, SigmaProblem, SpanningTree, enumerate_assignments
from hybriddp.classical import (
    DpTable,
    bandwidth_classical,
    bandwidth_count_valid_pairs,
    bandwidth_decide,
    feedback_arc_set_dp,
    hypercube_path_dp,
    setcover_dp,
    tsp_held_karp,
    vertex_ordering_dp,
)
from hybriddp.cost import CostLedger
from hybriddp.instances import (
    UNREACHABLE,
    DirectedGraph,
    HypercubeInstance,
    OrderingObjective,
    SetCoverInstance,
    WeightedGraph,
    cutwidth,
    generate_random,
    linear_arrangement,
    sum_cut,
    vertex_separation,
)

seeds = st.integers(0, 2**32)


def path_graph(n):
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return WeightedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n, w=1):
    return WeightedGraph.from_edges(n, [(u, v, w) for u in range(n) for v in range(u + 1, n)])


# --- hypercube


def test_hypercube_examples():
    assert hypercube_path_dp(HypercubeInstance.full_cube(5))
    assert not hypercube_path_dp(HypercubeInstance.explicit(3, []))
    chain = [(0b000, 0), (0b001, 1), (0b011, 2)]
    assert hypercube_path_dp(HypercubeInstance.explicit(3, chain))
    assert not hypercube_path_dp(HypercubeInstance.explicit(3, chain, invalid=[0b011]))


def test_hypercube_counts_queries():
    led = CostLedger()
    hypercube_path_dp(HypercubeInstance.full_cube(4), led)
    assert led.classical_ops > 0


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 9), seeds, st.sampled_from([1.0, 0.8]))
def test_hypercube_matches_brute(n, seed, q):
    inst = generate_random("hypercube", n, seed, density=0.6, valid_density=q)
    assert hypercube_path_dp(inst) == brute.brute_hypercube(inst)


# --- TSP


def test_tsp_examples():
    assert tsp_held_karp(cycle_graph(4)) == 4
    assert tsp_held_karp(complete_graph(4)) == 4
    assert tsp_held_karp(path_graph(4)) is UNREACHABLE
    with pytest.raises(ValueError):
        tsp_held_karp(complete_graph(2))


def test_tsp_k8_seed7_matches_enumeration():
    g = generate_random("tsp", 8, 7, wmin=1, wmax=9)
    assert tsp_held_karp(g) == brute.brute_tsp(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 8), seeds, st.sampled_from([1.0, 0.6]))
def test_tsp_matches_brute(n, seed, density):
    g = generate_random("tsp", n, seed, wmin=1, wmax=99, density=density)
    assert tsp_held_karp(g) == brute.brute_tsp(g)


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 10), seeds, st.randoms(use_true_random=False))
def test_tsp_relabel_invariant(n, seed, rnd):
    g = generate_random("tsp", n, seed)
    perm = list(range(n))
    rnd.shuffle(perm)
    assert tsp_held_karp(g.relabel(perm)) == tsp_held_karp(g)


# --- vertex ordering


def test_ordering_zero_objective():
    g = generate_random("graph", 6, 1)
    for mode in ("max", "sum"):
        assert vertex_ordering_dp(g, OrderingObjective(mode, lambda g, s, v: 0)) == 0


def test_cutwidth_path():
    assert vertex_ordering_dp(path_graph(4), cutwidth()) == 1
    assert vertex_ordering_dp(path_graph(4), cutwidth()) == brute.brute_ordering(path_graph(4), cutwidth())


def test_sum_of_prefix_sizes_is_permutation_free():
    obj = OrderingObjective("sum", lambda g, s, v: s.bit_count())
    for seed in range(5):
        g = generate_random("graph", 7, seed)
        assert vertex_ordering_dp(g, obj) == 7 * 6 // 2


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 7), seeds, st.sampled_from([cutwidth, linear_arrangement, vertex_separation, sum_cut]))
def test_ordering_matches_brute(n, seed, make):
    g = generate_random("graph", n, seed, density=0.4, connected=seed % 2 == 0)
    obj = make()
    assert vertex_ordering_dp(g, obj) == brute.brute_ordering(g, obj)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 8), seeds)
def test_minsum_monotone_in_f(n, seed):
    g = generate_random("graph", n, seed)
    base = linear_arrangement()
    bigger = OrderingObjective("sum", lambda g, s, v: base.f(g, s, v) + (v % 2))
    assert vertex_ordering_dp(g, bigger) >= vertex_ordering_dp(g, base)


# --- FAS


def test_fas_examples():
    dag = DirectedGraph.from_arcs(4, [(0, 1), (1, 2), (0, 3), (3, 2)])
    assert feedback_arc_set_dp(dag) == 0
    assert feedback_arc_set_dp(DirectedGraph.from_arcs(3, [(0, 1), (1, 2), (2, 0)])) == 1


def test_fas_tournament_seed5():
    g = generate_random("digraph", 6, 5, tournament=True)
    assert feedback_arc_set_dp(g) == brute.brute_fas(g)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 7), seeds, st.booleans())
def test_fas_matches_brute(n, seed, tournament):
    g = generate_random("digraph", n, seed, tournament=tournament, density=0.35)
    assert feedback_arc_set_dp(g) == brute.brute_fas(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 7), seeds)
def test_fas_tournament_complement(n, seed):
    g = generate_random("digraph", n, seed, tournament=True)
    arcs = g.arc_list()
    most_consistent = max(
        sum(1 for u, v in arcs if pos[u] < pos[v])
        for pos in ({v: i for i, v in enumerate(p)} for p in itertools.permutations(range(n)))
    )
    assert feedback_arc_set_dp(g) == n * (n - 1) // 2 - most_consistent


# --- set cover


def test_setcover_examples():
    assert setcover_dp(SetCoverInstance(4, (0b0011, 0b1111))) == 1
    assert setcover_dp(SetCoverInstance(8, tuple(1 << i for i in range(8)))) == 8
    inst = generate_random("setcover", 8, 3, m=10)
    assert setcover_dp(inst) == brute.brute_setcover(inst)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), seeds, st.integers(1, 12))
def test_setcover_matches_brute(n, seed, m):
    inst = generate_random("setcover", n, seed, m=m)
    assert setcover_dp(inst) == brute.brute_setcover(inst)


# --- bandwidth


def test_bandwidth_examples():
    assert bandwidth_classical(path_graph(5)) == 1
    assert bandwidth_classical(complete_graph(5)) == 4
    assert bandwidth_classical(cycle_graph(6)) == 2
    assert bandwidth_classical(WeightedGraph.from_edges(4, [])) == 0


def test_bandwidth_disconnected_takes_max():
    g = WeightedGraph.from_edges(9, [(0, 1), (1, 2)] + [(u, v) for u in range(3, 7) for v in range(u + 1, 7)])
    assert bandwidth_classical(g) == 3
    assert bandwidth_decide(g, 3) and not bandwidth_decide(g, 2)


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 8), seeds, st.sampled_from([0.2, 0.4]))
def test_bandwidth_matches_brute(n, seed, density):
    g = generate_random("graph", n, seed, density=density, connected=seed % 3 != 0)
    assert bandwidth_classical(g) == brute.brute_bandwidth(g)


def test_bucket_layout_non_divisible():
    lay = BucketLayout(7, 2)
    assert lay.k == 3 and lay.caps == (3, 3, 1)
    assert lay.fill_order == (0, 1, 2, 0, 1, 0, 1)
    assert lay.staircase[-1] == (3, 3, 1)


def test_valid_pairs_single_vertex():
    g = WeightedGraph.from_edges(1, [])
    k = BucketLayout(1, 1).k
    assert bandwidth_count_valid_pairs(g, 1) == 2 * k


def test_valid_pairs_star_matches_direct_enumeration():
    g = WeightedGraph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    b = 1
    tree = SpanningTree.bfs(g)
    direct = 0
    for sigma in enumerate_assignments(g, b, tree, prune_edges=False):
        sp = SigmaProblem(g, b, sigma, tree)
        for S in range(1 << 4):
            direct += sp.pair_valid(S)
    assert bandwidth_count_valid_pairs(g, b) == direct


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), seeds, st.data())
def test_valid_pairs_bound(n, seed, data):
    g = generate_random("graph", n, seed, density=0.3)
    b = data.draw(st.integers(1, n - 1))
    k = BucketLayout(n, b).k
    assert bandwidth_count_valid_pairs(g, b) <= 2 * k * 5**n
    # every offset vector, in range or not, gives exactly 2 k 5^(n-1)
    assert bandwidth_count_valid_pairs(g, b, correct_only=False) == 2 * k * 5 ** (n - 1)


def test_dp_table_is_write_once():
    t = DpTable("toy", "0..3", lambda key: 0 <= key < 4)
    t[1] = 5
    assert t[1] == 5 and 1 in t and len(t) == 1
    with pytest.raises(KeyError):
        t[1] = 6
    with pytest.raises(KeyError):
        t[7] = 0


def test_brute_caps():
    with pytest.raises(ValueError):
        brute.brute_tsp(complete_graph(11))
    with pytest.raises(ValueError):
        brute.brute_force("nope", None)
