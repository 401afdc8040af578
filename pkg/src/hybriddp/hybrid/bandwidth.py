"""Bandwidth decision: variable time search over bucket assignments.

Each assignment ``sigma`` defines a hypercube whose valid vertices are the
valid sets of ``sigma``.  A depth-first search explores it first; when it
has seen ``ceil(mu0 ** n)`` valid sets without finishing, the forbidden-vertex
hybrid takes over on the same cube.  Offset vectors that leave the bucket
range, overfill a bucket or stretch an edge over two buckets are rejected by
a polynomial check and cost 1 in the outer search.
"""

from __future__ import annotations

import math
from typing import Optional

from ..bandwidth import BucketLayout, SigmaProblem, SpanningTree, enumerate_assignments
from ..cost import CostLedger, vts_cost
from ..exponents import solve_mu0
from ..instances import WeightedGraph
from .cube import CubeHybrid, CubeProblem, HybridResult, LevelSchedule


def budgeted_dfs(problem: SigmaProblem, budget: int) -> tuple[Optional[bool], int]:
    """DFS over valid sets from the empty set, visiting at most ``budget`` of them.

    Returns ``(answer, visited)``; ``answer`` is ``None`` when the budget ran out.
    """
    full = (1 << problem.n) - 1
    if not problem.valid(0):
        return False, 0
    if budget < 1:
        return None, 0
    seen = {0}
    stack = [0]
    while stack:
        P = stack.pop()
        if P == full:
            return True, len(seen)
        for S in problem.successors(P):
            if S not in seen:
                if len(seen) >= budget:
                    return None, len(seen)
                seen.add(S)
                stack.append(S)
    return False, len(seen)


def sigma_cube(problem: SigmaProblem) -> CubeProblem:
    edge = problem.edge
    return CubeProblem(problem.n, lambda x, v: 0 if edge(x, v) else None, problem.valid)


def dfs_budget_for(n: int) -> int:
    return math.ceil(solve_mu0() ** n)


def _decide_connected(g: WeightedGraph, b: int, dfs_budget: Optional[int], schedule: LevelSchedule):
    n = g.n
    ledger = CostLedger()
    trace = {"n": n, "b": b}
    if n <= b + 1:
        return True, ledger, "classical-fallback", trace
    budget = dfs_budget_for(n) if dfs_budget is None else dfs_budget
    tree = SpanningTree.bfs(g)
    layout = BucketLayout(n, b)
    offsets = layout.k * 3 ** (n - 1)
    answer = False
    costs = []
    switches = 0
    max_visited = 0
    for sigma in enumerate_assignments(g, b, tree):
        sp = SigmaProblem(g, b, sigma, tree)
        found, visited = budgeted_dfs(sp, budget)
        assert visited <= max(budget, 0), "DFS overran its budget"
        max_visited = max(max_visited, visited)
        ledger.add_classical(visited)
        if found is None:
            switches += 1
            run = CubeHybrid(sigma_cube(sp), schedule.alpha, forbidden=True).run()
            found = run.answer is not None
            ledger.add_classical(run.ledger.classical_ops)
            ledger.add_queries(run.ledger.oracle_queries)
            costs.append(visited + run.ledger.total)
        else:
            costs.append(max(visited, 1))
        answer = answer or found
    rejected = offsets - len(costs)
    ledger.charge_quantum(vts_cost(costs + [1.0] * rejected))
    trace.update(
        k=layout.k,
        assignments=offsets,
        examined=len(costs),
        dfs_budget=budget,
        max_dfs_visited=max_visited,
        switches=switches,
    )
    return answer, ledger, "dfs-then-hybrid" if switches else "hybrid", trace


def hybrid_bandwidth(
    g: WeightedGraph,
    b: int,
    dfs_budget: Optional[int] = None,
    schedule: Optional[LevelSchedule] = None,
) -> HybridResult:
    """Whether ``bandwidth(g) <= b``; components are decided independently."""
    ledger = CostLedger()
    trace: dict = {"n": g.n, "b": b, "components": []}
    if not g.edges():
        return HybridResult(True, ledger, "classical-fallback", trace)
    if b < 1:
        return HybridResult(False, ledger, "classical-fallback", trace)
    answer = True
    tags = set()
    for comp in g.components():
        if len(comp) < 2:
            continue
        h = g.induced(comp)
        sched = schedule or LevelSchedule.default(h.n)
        ok, sub, tag, info = _decide_connected(h, b, dfs_budget, sched)
        ledger.absorb(sub)
        tags.add(tag)
        trace["components"].append(info)
        answer = answer and ok
    if "dfs-then-hybrid" in tags:
        path = "dfs-then-hybrid"
    elif "hybrid" in tags:
        path = "hybrid"
    else:
        path = "classical-fallback"
    return HybridResult(answer, ledger, path, trace)


def hybrid_bandwidth_search(g: WeightedGraph, dfs_budget: Optional[int] = None) -> HybridResult:
    """Exact bandwidth by binary search over :func:`hybrid_bandwidth`."""
    ledger = CostLedger()
    if not g.edges():
        return HybridResult(0, ledger, "classical-fallback", {"n": g.n, "probes": []})
    lo, hi = 1, g.n - 1
    probes = []
    tags = set()
    while lo < hi:
        mid = (lo + hi) // 2
        res = hybrid_bandwidth(g, mid, dfs_budget)
        ledger.absorb(res.ledger)
        tags.add(res.path_taken)
        probes.append((mid, res.answer))
        if res.answer:
            hi = mid
        else:
            lo = mid + 1
    path = "dfs-then-hybrid" if "dfs-then-hybrid" in tags else "hybrid" if "hybrid" in tags else "classical-fallback"
    return HybridResult(lo, ledger, path, {"n": g.n, "probes": probes})
