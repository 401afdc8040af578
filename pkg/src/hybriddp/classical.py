"""Exact classical dynamic programs over subsets."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Optional, Union

import numpy as np

from .bandwidth import SigmaProblem, SpanningTree, count_valid_pairs, enumerate_assignments
from .cost import CostLedger
from .instances import (
    INFEASIBLE,
    UNREACHABLE,
    DirectedGraph,
    HypercubeInstance,
    Outcome,
    OrderingObjective,
    SetCoverInstance,
    WeightedGraph,
    bits_of,
)


@dataclass
class DpTable:
    """Write-once table over a declared index domain."""

    problem: str
    domain: str
    contains: Callable[[Hashable], bool] = field(repr=False)
    entries: dict = field(default_factory=dict, repr=False)

    def __setitem__(self, key, value) -> None:
        if not self.contains(key):
            raise KeyError(f"{key!r} is outside the domain {self.domain!r}")
        if key in self.entries:
            raise KeyError(f"entry {key!r} already written")
        self.entries[key] = value

    def __getitem__(self, key):
        return self.entries[key]

    def __contains__(self, key) -> bool:
        return key in self.entries

    def __len__(self) -> int:
        return len(self.entries)


def _tick(ledger: Optional[CostLedger], ops: int = 1) -> None:
    if ledger is not None:
        ledger.add_classical(ops)


def hypercube_path_dp(inst: HypercubeInstance, ledger: Optional[CostLedger] = None) -> bool:
    """Whether a path of valid vertices leads from the empty set to the full set."""
    n = inst.n
    full = inst.full
    edge, valid = inst.edge_oracle, inst.is_valid
    reach = bytearray(1 << n)
    reach[0] = valid(0)
    queries = 1
    # numeric order visits every subset of x before x
    for x in range(1, full + 1):
        queries += 1
        if not valid(x):
            continue
        for i in bits_of(x):
            y = x ^ (1 << i)
            if reach[y]:
                queries += 1
                if edge(y, i):
                    reach[x] = 1
                    break
    if ledger is not None:
        ledger.add_queries(queries)
        ledger.add_classical(1 << n)
        ledger.note_table(1 << n)
    return bool(reach[full])


def _weight_matrix(g: WeightedGraph) -> np.ndarray:
    W = np.full((g.n, g.n), np.inf)
    for u, v, w in g.edges():
        W[u, v] = W[v, u] = w
    return W


def tsp_held_karp(g: WeightedGraph, ledger: Optional[CostLedger] = None) -> Union[int, Outcome]:
    """Minimum Hamiltonian cycle weight.

    Entries are float64 with ``inf`` for unreachable states; every finite
    value is an integer below ``2**40`` and therefore exact.
    """
    n = g.n
    if n < 3:
        raise ValueError(f"TSP needs n >= 3, got {n}")
    W = _weight_matrix(g)
    # paths from vertex 0 through the vertices of mask (over 1..n-1) ending at v
    m = n - 1
    f = np.full((1 << m, m), np.inf)
    Wr = W[1:, 1:]
    f[1 << np.arange(m), np.arange(m)] = W[0, 1:]
    bit = 1 << np.arange(m)
    outside = [np.flatnonzero((mask & bit) == 0) for mask in range(1 << m)]
    for mask in range(1, 1 << m):
        row = f[mask]
        if not np.isfinite(row).any():
            continue
        cand = np.min(row[:, None] + Wr, axis=0)
        vs = outside[mask]
        nxt = mask | bit[vs]
        f[nxt, vs] = np.minimum(f[nxt, vs], cand[vs])
    _tick(ledger, (1 << m) * m * m)
    if ledger is not None:
        ledger.note_table(f.nbytes)
    best = np.min(f[(1 << m) - 1] + W[1:, 0])
    return UNREACHABLE if not np.isfinite(best) else int(best)


def vertex_ordering_dp(g: WeightedGraph, obj: OrderingObjective, ledger: Optional[CostLedger] = None) -> int:
    """``min`` over orderings of the ``max`` or ``sum`` of ``obj.f``."""
    n = g.n
    A = [0] * (1 << n)
    f, combine = obj.f, obj.combine
    for S in range(1, 1 << n):
        best = None
        for v in bits_of(S):
            rest = S ^ (1 << v)
            val = combine(f(g, rest, v), A[rest])
            if best is None or val < best:
                best = val
        A[S] = best
    _tick(ledger, n << n)
    return A[(1 << n) - 1]


def feedback_arc_set_dp(g: DirectedGraph, ledger: Optional[CostLedger] = None) -> int:
    """Minimum number of arcs pointing backwards in some ordering."""
    n = g.n
    out = g.out_masks()
    f = [0] * (1 << n)
    for S in range(1, 1 << n):
        best = None
        for v in bits_of(S):
            rest = S ^ (1 << v)
            # v placed last: its arcs into the earlier vertices point backwards
            val = f[rest] + (out[v] & rest).bit_count()
            if best is None or val < best:
                best = val
        f[S] = best
    _tick(ledger, n << n)
    return f[(1 << n) - 1]


def min_cover_table(n: int, sets, ledger: Optional[CostLedger] = None) -> list:
    """``g[X]`` = fewest sets covering ``X`` (sets may overshoot), ``None`` if impossible."""
    g: list = [None] * (1 << n)
    g[0] = 0
    by_elem = [[s for s in sets if s >> e & 1] for e in range(n)]
    for X in range(1, 1 << n):
        low = (X & -X).bit_length() - 1
        best = None
        for s in by_elem[low]:
            r = g[X & ~s]
            if r is not None and (best is None or r + 1 < best):
                best = r + 1
        g[X] = best
    _tick(ledger, len(sets) << n)
    return g


def setcover_dp(inst: SetCoverInstance, ledger: Optional[CostLedger] = None) -> Union[int, Outcome]:
    best = min_cover_table(inst.n, inst.sets, ledger)[inst.universe]
    return INFEASIBLE if best is None else best


def sigma_admits_ordering(problem: SigmaProblem, ledger: Optional[CostLedger] = None) -> bool:
    """Depth-first search over valid sets from the empty set."""
    full = (1 << problem.n) - 1
    if not problem.valid(0):
        return False
    seen = {0}
    stack = [0]
    while stack:
        P = stack.pop()
        if P == full:
            _tick(ledger, len(seen))
            return True
        for S in problem.successors(P):
            if S not in seen:
                seen.add(S)
                stack.append(S)
    _tick(ledger, len(seen))
    return False


def bandwidth_decide_connected(g: WeightedGraph, b: int, ledger: Optional[CostLedger] = None) -> bool:
    """Whether the connected graph ``g`` has bandwidth at most ``b``."""
    if g.n <= b + 1:
        return True
    tree = SpanningTree.bfs(g)
    for sigma in enumerate_assignments(g, b, tree):
        if sigma_admits_ordering(SigmaProblem(g, b, sigma, tree), ledger):
            return True
    return False


def bandwidth_decide(g: WeightedGraph, b: int, ledger: Optional[CostLedger] = None) -> bool:
    if b < 0:
        return False
    if not g.edges():
        return True
    if b == 0:
        return False
    return all(bandwidth_decide_connected(g.induced(c), b, ledger) for c in g.components() if len(c) > 1)


def bandwidth_classical(g: WeightedGraph, ledger: Optional[CostLedger] = None) -> int:
    """Exact bandwidth by binary search over the decision procedure."""
    best = 0
    for comp in g.components():
        if len(comp) < 2:
            continue
        h = g.induced(comp)
        lo, hi = 1, h.n - 1  # the answer lies in [lo, hi]
        while lo < hi:
            mid = (lo + hi) // 2
            if bandwidth_decide_connected(h, mid, ledger):
                hi = mid
            else:
                lo = mid + 1
        best = max(best, lo)
    return best


def bandwidth_count_valid_pairs(g: WeightedGraph, b: int, sigma=None, *, correct_only: bool = True) -> int:
    """Exact count of pairs ``(sigma, S)`` meeting the tree-offset conditions.

    Without ``sigma`` the count runs over every correct assignment (or every
    offset vector when ``correct_only`` is false, which totals
    ``2 k 5^(n-1)`` exactly).
    """
    return count_valid_pairs(g, b, sigma, correct_only=correct_only)
