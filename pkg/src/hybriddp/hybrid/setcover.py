"""Set cover: big-set branching, then band searches over partial covers.

A call on universe ``U`` (a mask of the original universe) sees the family
``{T & U}``; the family is a function of ``U``, so calls are memoised by
``U``.  Costs of repeated calls are still charged once per occurrence.

Bands are integer size windows.  The window around ``w n`` keeps the sizes
within ``d/2`` of it, clipped to proper nonempty subsets, and is widened to
at least ``D`` consecutive sizes (``D`` the largest remaining set), which is
what guarantees that it meets a partial cover of every minimum cover.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..classical import DpTable, min_cover_table
from ..cost import CostLedger, minfind_cost
from ..exponents import setcover_exponent_at, solve_setcover_balance, solve_tsp_alpha
from ..instances import SetCoverInstance, submasks_of_weight
from .cube import HybridResult

def real_bands(n: int, alpha: float, beta: float) -> dict[int, tuple[float, float]]:
    """The size intervals ``| |X| - w_i n | <= d / 2`` for ``i = 1, 2, 3``."""
    d = beta * n
    centers = {1: alpha / 4 * n, 2: n / 4, 3: n / 2}
    return {i: (c - d / 2, c + d / 2) for i, c in centers.items()}


def band_window(center: float, d: float, size: int, widest: int) -> Optional[tuple[int, int]]:
    """Integer sizes ``[lo, hi]`` for splitting a set of ``size`` elements, or ``None``."""
    if size < 2:
        return None
    eps = 1e-9
    lo = max(math.ceil(center - d / 2 - eps), 1)
    hi = min(math.floor(center + d / 2 + eps), size - 1)
    if lo > hi:
        lo = hi = min(max(round(center), 1), size - 1)
    need = min(max(widest, 1), size - 1)
    grow_up = True
    while hi - lo + 1 < need:
        if (grow_up and hi < size - 1) or lo == 1:
            hi += 1
        else:
            lo -= 1
        grow_up = not grow_up
    return lo, hi


@dataclass
class _Call:
    value: Optional[int]
    quantum: float
    classical: int
    depth: int  # step-2 descents below this call among non-cutoff calls; -1 for a cutoff call


def default_alpha(beta: float) -> float:
    try:
        return solve_setcover_balance(beta)[0]
    except ValueError:
        return solve_tsp_alpha()[0]


class SetCoverHybrid:
    def __init__(self, inst: SetCoverInstance, alpha: Optional[float] = None, beta: float = 0.1):
        if not 0.0 < beta < 1.0:
            raise ValueError(f"beta={beta} outside (0, 1)")
        self.inst = inst
        self.beta = beta
        self.alpha = default_alpha(beta) if alpha is None else alpha
        if not 0.0 < self.alpha <= 0.5:
            raise ValueError(f"alpha={self.alpha} outside (0, 1/2]")
        self.c = setcover_exponent_at(self.alpha, beta)
        self.N = inst.n
        self._global: Optional[list] = None
        self._memo: dict[int, _Call] = {}
        self.band_calls = 0
        self.max_leaf = 0

    def family(self, U: int) -> list[int]:
        return sorted({T & U for T in self.inst.sets if T & U})

    def cutoff_value(self, U: int) -> Optional[int]:
        if self._global is None:
            self._global = min_cover_table(self.N, self.inst.sets)
        return self._global[U]

    def solve(self, U: int) -> _Call:
        if U in self._memo:
            return self._memo[U]
        n = U.bit_count()
        if n < self.c * self.N:
            call = _Call(self.cutoff_value(U), 0.0, self.inst.m << n, -1)
            self._memo[U] = call
            return call
        d = self.beta * n
        fam = self.family(U)
        best, quantum, classical, depth = None, 0.0, 0, 0
        for S in fam:
            if S.bit_count() >= d:
                child = self.solve(U & ~S)
                if child.value is not None and (best is None or child.value + 1 < best):
                    best = child.value + 1
                quantum += child.quantum
                classical += child.classical
                depth = max(depth, child.depth + 1)
        small = [S for S in fam if S.bit_count() <= d]
        if small:
            value, q, cl = self.band_search(U, small, d)
            if value is not None and (best is None or value < best):
                best = value
            quantum += q
            classical += cl
        call = _Call(best, quantum, classical, depth)
        self._memo[U] = call
        return call

    def band_search(self, U: int, small: list[int], d: float):
        """Minimum cover of ``U`` by ``small`` through nested band searches."""
        self.band_calls += 1
        n = U.bit_count()
        D = max(S.bit_count() for S in small)
        if any(U & ~S == 0 for S in small):
            return 1, 1.0, 0
        centers = {3: n / 2, 2: n / 4, 1: self.alpha * n / 4}
        win = lambda i, s: band_window(centers[i], d, s, D)

        top = win(3, n)
        if top is None:
            return None, 0.0, 0
        sizes3 = set()
        for p in range(top[0], top[1] + 1):
            sizes3 |= {p, n - p}
        sizes2 = set()
        for s in sizes3:
            w = win(2, s)
            if w is None:
                sizes2.add(s)
                continue
            for q in range(w[0], w[1] + 1):
                sizes2 |= {q, s - q}
        leaves = set()
        for s in sizes2:
            w = win(1, s)
            if w is None:
                leaves.add(s)
                continue
            for q in range(w[0], w[1] + 1):
                leaves |= {q, s - q}
        r = max(leaves)
        self.max_leaf = max(self.max_leaf, r)

        # preprocessing: fewest small sets covering each X with |X| <= r
        table = DpTable("setcover", f"X within U, |X| <= {r}", lambda X: X & ~U == 0 and X.bit_count() <= r)
        table[0] = 0
        for size in range(1, r + 1):
            for X in submasks_of_weight(U, size):
                low = X & -X
                best = None
                for S in small:
                    if S & low:
                        sub = table[X & ~S]
                        if sub is not None and (best is None or sub + 1 < best):
                            best = sub + 1
                table[X] = best
        classical = len(table)

        def add(a, b):
            return None if a is None or b is None else a + b

        def lowest(values):
            best = None
            for v in values:
                if v is not None and (best is None or v < best):
                    best = v
            return best

        memo: dict = {}

        def f(level: int, X: int):
            s = X.bit_count()
            if s <= r:
                return table[X]
            key = (level, X)
            if key in memo:
                return memo[key]
            if any(X & ~S == 0 for S in small):
                memo[key] = 1
                return 1
            lo, hi = win(level - 1, s)
            vals = (
                add(f(level - 1, Q), f(level - 1, X & ~Q))
                for q in range(lo, hi + 1)
                for Q in submasks_of_weight(X, q)
            )
            memo[key] = lowest(vals)
            return memo[key]

        value = lowest(
            add(f(3, P), f(3, U & ~P)) for p in range(top[0], top[1] + 1) for P in submasks_of_weight(U, p)
        )

        # structural costs, by set size
        def search_cost(level: int, s: int) -> float:
            if s <= r or level == 1:
                return 1.0
            w = win(level - 1, s)
            domain = sum(math.comb(s, q) for q in range(w[0], w[1] + 1))
            item = max(search_cost(level - 1, q) + search_cost(level - 1, s - q) for q in range(w[0], w[1] + 1))
            return minfind_cost(domain, item)

        domain = sum(math.comb(n, p) for p in range(top[0], top[1] + 1))
        item = max(search_cost(3, p) + search_cost(3, n - p) for p in range(top[0], top[1] + 1))
        return value, minfind_cost(domain, item), classical


def hybrid_set_cover(inst: SetCoverInstance, alpha: Optional[float] = None, beta: float = 0.1) -> HybridResult:
    sim = SetCoverHybrid(inst, alpha, beta)
    call = sim.solve(inst.universe)
    if call.value is None:
        raise ValueError("instance has no cover")
    ledger = CostLedger()
    ledger.charge_quantum(call.quantum)
    ledger.add_classical(call.classical)
    path = "classical-fallback" if call.depth < 0 else "hybrid"
    depth_bound = math.log(sim.c) / math.log(1 - beta)
    trace = {
        "n": inst.n,
        "alpha": sim.alpha,
        "beta": beta,
        "cutoff_exponent": sim.c,
        "recursion_depth": max(call.depth, 0),
        "depth_bound": depth_bound,
        "band_searches": sim.band_calls,
        "max_leaf_size": sim.max_leaf,
        "distinct_universes": len(sim._memo),
    }
    return HybridResult(call.value, ledger, path, trace)
