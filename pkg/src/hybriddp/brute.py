"""Enumeration oracles.

Nothing here calls into the dynamic programs; each answer comes from
listing permutations, subcollections or paths directly.
"""

from __future__ import annotations

import itertools
from typing import Optional

from .instances import (
    INFEASIBLE,
    UNREACHABLE,
    DirectedGraph,
    HypercubeInstance,
    OrderingObjective,
    SetCoverInstance,
    WeightedGraph,
)

PERMUTATION_CAP = 10
SUBSET_CAP = 20


def _check(n: int, cap: int, what: str) -> None:
    if n > cap:
        raise ValueError(f"{what} enumeration capped at {cap}, got {n}")


def brute_tsp(g: WeightedGraph):
    n = g.n
    _check(n, PERMUTATION_CAP, "tour")
    if n < 3:
        raise ValueError(f"TSP needs n >= 3, got {n}")
    best: Optional[int] = None
    for rest in itertools.permutations(range(1, n)):
        if rest[0] > rest[-1]:
            continue  # each cycle once per direction
        tour = (0,) + rest + (0,)
        total = 0
        for a, b in zip(tour, tour[1:]):
            w = g.weights[a][b]
            if w is None:
                break
            total += w
        else:
            if best is None or total < best:
                best = total
    return UNREACHABLE if best is None else best


def brute_bandwidth(g: WeightedGraph) -> int:
    _check(g.n, PERMUTATION_CAP, "ordering")
    edges = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if g.weights[u][v] is not None]
    if not edges:
        return 0
    best = g.n
    for perm in itertools.permutations(range(g.n)):
        pos = [0] * g.n
        for p, v in enumerate(perm):
            pos[v] = p
        width = max(abs(pos[u] - pos[v]) for u, v in edges)
        best = min(best, width)
    return best


def brute_ordering(g: WeightedGraph, obj: OrderingObjective) -> int:
    _check(g.n, PERMUTATION_CAP, "ordering")
    best = None
    for perm in itertools.permutations(range(g.n)):
        placed = 0
        terms = []
        for v in perm:
            terms.append(obj.f(g, placed, v))
            placed |= 1 << v
        value = max(terms, default=0) if obj.mode == "max" else sum(terms)
        if best is None or value < best:
            best = value
    return best


def brute_fas(g: DirectedGraph) -> int:
    _check(g.n, PERMUTATION_CAP, "ordering")
    arcs = [(u, v) for u in range(g.n) for v in g.arcs[u]]
    best = len(arcs)
    for perm in itertools.permutations(range(g.n)):
        pos = {v: p for p, v in enumerate(perm)}
        best = min(best, sum(1 for u, v in arcs if pos[u] > pos[v]))
    return best


def brute_setcover(inst: SetCoverInstance):
    _check(inst.m, SUBSET_CAP, "subcollection")
    for size in range(1, inst.m + 1):
        for combo in itertools.combinations(inst.sets, size):
            covered = 0
            for s in combo:
                covered |= s
            if covered == inst.universe:
                return size
    return INFEASIBLE


def all_minimum_covers(inst: SetCoverInstance) -> list[tuple[int, ...]]:
    """Every minimum cover, as tuples of set indices."""
    _check(inst.m, SUBSET_CAP, "subcollection")
    for size in range(1, inst.m + 1):
        found = []
        for combo in itertools.combinations(range(inst.m), size):
            covered = 0
            for j in combo:
                covered |= inst.sets[j]
            if covered == inst.universe:
                found.append(combo)
        if found:
            return found
    return []


def brute_hypercube(inst: HypercubeInstance) -> bool:
    n = inst.n
    _check(n, SUBSET_CAP, "hypercube")
    full = (1 << n) - 1
    if not inst.is_valid(0):
        return False
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        if x == full:
            return True
        for i in range(n):
            if x >> i & 1:
                continue
            y = x | 1 << i
            if y not in seen and inst.edge_oracle(x, i) and inst.is_valid(y):
                seen.add(y)
                stack.append(y)
    return False


def brute_force(kind: str, instance, objective: Optional[OrderingObjective] = None):
    """Answer ``instance`` of problem ``kind`` by direct enumeration."""
    if kind == "hypercube":
        return brute_hypercube(instance)
    if kind == "tsp":
        return brute_tsp(instance)
    if kind == "bandwidth":
        return brute_bandwidth(instance)
    if kind == "ordering":
        if objective is None:
            raise ValueError("ordering needs an objective")
        return brute_ordering(instance, objective)
    if kind == "fas":
        return brute_fas(instance)
    if kind == "setcover":
        return brute_setcover(instance)
    raise ValueError(f"unknown problem kind {kind!r}")
