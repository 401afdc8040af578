import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybriddp.classical import hypercube_path_dp, vertex_ordering_dp
from hybriddp.cost import grover_cost
from hybriddp.exponents import solve_gamma
from hybriddp.hybrid.cube import (
    CubeHybrid,
    HybridResult,
    LevelSchedule,
    is_degenerate,
    levels_for,
)
from hybriddp.hybrid.paths import (
    hybrid_hypercube_path,
    hybrid_hypercube_path_forbidden,
    hybrid_vertex_ordering,
    hypercube_problem,
)
from hybriddp.instances import (
    HypercubeInstance,
    OrderingObjective,
    WeightedGraph,
    cutwidth,
    generate_random,
    linear_arrangement,
    sum_cut,
    vertex_separation,
)

seeds = st.integers(0, 2**32)


def test_default_schedule_is_two_level():
    sched = LevelSchedule.default(12)
    assert sched.k == 2
    assert sched.alpha == pytest.approx(solve_gamma(2).alpha)
    assert sched.concrete_levels == (3, 4)
    assert not sched.degenerate


@pytest.mark.parametrize("alpha", [(), (0.0, 0.3), (0.3, 0.2), (0.1, 0.5)])
def test_schedule_validation(alpha):
    with pytest.raises(ValueError):
        LevelSchedule(alpha, 10)


def test_degeneracy_rule():
    assert levels_for((0.3, 0.32), 6) == (1, 1)
    assert is_degenerate((0.3, 0.32), 6)
    assert not is_degenerate((0.2,), 10)


def test_result_rejects_unknown_tag():
    with pytest.raises(ValueError):
        HybridResult(True, None, "quantum")


def test_full_cube_n12():
    res = hybrid_hypercube_path(HypercubeInstance.full_cube(12))
    assert res.answer is True and res.path_taken == "hybrid"
    assert res.ledger.quantum_cost > 0 and res.ledger.classical_ops > 0


def test_colliding_levels_fall_back():
    inst = generate_random("hypercube", 6, 3, density=0.8)
    res = hybrid_hypercube_path(inst, LevelSchedule((0.3, 0.32), 6))
    assert res.path_taken == "classical-fallback"
    assert res.answer == hypercube_path_dp(inst)
    assert res.ledger.quantum_cost == 0 and res.ledger.classical_ops == 2**6


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), seeds)
def test_small_n_always_falls_back_correctly(n, seed):
    inst = generate_random("hypercube", n, seed, density=0.7)
    res = hybrid_hypercube_path(inst)
    assert res.path_taken == "classical-fallback"
    assert res.answer == hypercube_path_dp(inst)


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 11), seeds, st.sampled_from([0.55, 0.7, 0.85]))
def test_plain_matches_dp(n, seed, density):
    inst = generate_random("hypercube", n, seed, density=density)
    assert hybrid_hypercube_path(inst).answer == hypercube_path_dp(inst)


@settings(max_examples=40, deadline=None)
@given(st.integers(6, 11), seeds, st.sampled_from([0.6, 0.8, 0.95]))
def test_forbidden_matches_dp(n, seed, q):
    inst = generate_random("hypercube", n, seed, density=0.8, valid_density=q)
    assert hybrid_hypercube_path_forbidden(inst).answer == hypercube_path_dp(inst)


@settings(max_examples=6, deadline=None)
@given(st.integers(8, 10), seeds)
def test_nested_runs_are_exercised(n, seed):
    inst = generate_random("hypercube", n, seed, density=0.75)
    res = hybrid_hypercube_path(inst, LevelSchedule((0.2,), n))
    assert res.answer == hypercube_path_dp(inst)
    assert res.trace["nested_runs"] > res.trace["nested_fallbacks"]


def test_all_valid_forbidden_equals_plain():
    inst = generate_random("hypercube", 10, 4, density=0.9)
    plain = hybrid_hypercube_path(inst)
    forb = hybrid_hypercube_path_forbidden(inst)
    assert forb.answer == plain.answer
    assert forb.ledger.quantum_cost == pytest.approx(plain.ledger.quantum_cost, rel=1e-12)


def test_single_valid_path():
    n = 10
    chain = [((1 << i) - 1, i) for i in range(n)]
    on_path = {(1 << i) - 1 for i in range(n + 1)}
    full = HypercubeInstance.full_cube(n)
    inst = HypercubeInstance(n, full.edge_oracle, lambda x: x in on_path)
    res = hybrid_hypercube_path_forbidden(inst)
    assert res.answer is True
    assert hypercube_path_dp(HypercubeInstance.explicit(n, chain))
    # the valid middle vertex costs what any middle vertex costs in the plain run
    plain = hybrid_hypercube_path(full)
    item = plain.ledger.quantum_cost / math.sqrt(math.comb(n, n // 2))
    assert res.ledger.quantum_cost <= grover_cost(2**n, 1) + math.sqrt(n + 1) * item + 1e-9
    assert res.trace["valid_middle"] == 1


def test_query_counter_moves():
    inst = generate_random("hypercube", 9, 2)
    res = hybrid_hypercube_path(inst)
    assert res.ledger.oracle_queries > 0


def test_recursion_charge_uses_gamma2():
    hyb = CubeHybrid(hypercube_problem(HypercubeInstance.full_cube(8)), (0.29, 0.34))
    assert hyb.recursion_cost(3) == pytest.approx(solve_gamma(6).gamma ** 3)


def path_graph(n):
    return WeightedGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def test_ordering_examples():
    g = path_graph(6)
    assert hybrid_vertex_ordering(g, OrderingObjective("max", lambda g, s, v: 0)).answer == 0
    assert hybrid_vertex_ordering(g, OrderingObjective("sum", lambda g, s, v: 0)).answer == 0
    res = hybrid_vertex_ordering(path_graph(6), cutwidth())
    assert res.answer == 1 == vertex_ordering_dp(path_graph(6), cutwidth())


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 10), seeds, st.sampled_from([cutwidth, linear_arrangement, vertex_separation, sum_cut]))
def test_ordering_matches_dp(n, seed, make):
    g = generate_random("graph", n, seed, density=0.4, connected=seed % 2 == 1)
    obj = make()
    assert hybrid_vertex_ordering(g, obj).answer == vertex_ordering_dp(g, obj)


def test_ordering_uses_minfind_log_factor():
    g = generate_random("graph", 10, 1)
    res = hybrid_vertex_ordering(g, cutwidth())
    assert res.path_taken == "hybrid"
    middle = math.comb(10, 5)
    assert res.ledger.classical_ops >= math.ceil(math.log2(middle))
