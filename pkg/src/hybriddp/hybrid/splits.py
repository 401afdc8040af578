"""Balanced-split hybrids: travelling salesman and feedback arc set.

Both share one shape: a table of small sets computed classically, then three
nested minimum-finding searches splitting a set of size ``n/2`` into pieces
of size about ``n/4`` and those into pieces of size about ``alpha n/4``.
Searches are simulated by exhaustive numpy scans over every set of a given
size at once, indexed by the set's rank among same-size masks.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Optional

import numpy as np

from ..classical import feedback_arc_set_dp, tsp_held_karp
from ..cost import CostLedger, minfind_cost
from ..exponents import solve_tsp_alpha
from ..instances import UNREACHABLE, DirectedGraph, WeightedGraph
from .cube import HybridResult

MAX_TSP_N = 18
MAX_FAS_N = 20
# float64 elements per numpy block in the split scans
CHUNK_ELEMS = 1 << 22


@lru_cache(maxsize=None)
def _size_class(n: int, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Sorted masks of popcount ``s`` and their element lists (rows ascending)."""
    masks = np.array([sum(1 << b for b in c) for c in itertools.combinations(range(n), s)], dtype=np.int64)
    masks.sort()
    if s == 0:
        return masks, np.zeros((1, 0), dtype=np.int64)
    bits = (masks[:, None] >> np.arange(n)) & 1
    elems = np.nonzero(bits)[1].reshape(len(masks), s)
    return masks, elems


@lru_cache(maxsize=None)
def _ranks(n: int) -> np.ndarray:
    """Rank of every mask among the masks of the same popcount."""
    rank = np.zeros(1 << n, dtype=np.int64)
    for s in range(n + 1):
        masks, _ = _size_class(n, s)
        rank[masks] = np.arange(len(masks))
    return rank


def split_sizes(n: int, alpha: float) -> tuple[int, int, int]:
    """``(n // 2, n // 4, k2)`` with ``k2 = max(2, round(alpha n / 4))``."""
    return n // 2, n // 4, max(2, round(alpha * n / 4))


# ---------------------------------------------------------------- TSP


def _weights(g: WeightedGraph) -> np.ndarray:
    W = np.full((g.n, g.n), np.inf)
    for u, v, w in g.edges():
        W[u, v] = W[v, u] = w
    return W


def path_tables(g: WeightedGraph, max_size: int) -> dict[int, np.ndarray]:
    """``F[s][rank(S), u, v]`` = shortest Hamiltonian ``u``-``v`` path of ``S``, by one-vertex removal."""
    n = g.n
    W = _weights(g)
    rank = _ranks(n)
    F = {1: np.full((n, n, n), np.inf)}
    F[1][np.arange(n), np.arange(n), np.arange(n)] = 0.0
    for s in range(2, max_size + 1):
        masks, elems = _size_class(n, s)
        out = np.full((len(masks), n, n), np.inf)
        prev = F[s - 1]
        rows = np.repeat(np.arange(len(masks)), s)
        us = elems.reshape(-1)
        rest = rank[np.repeat(masks, s) ^ (1 << us)]
        step = max(1, CHUNK_ELEMS // (n * n))
        for lo in range(0, len(us), step):
            sl = slice(lo, lo + step)
            # first edge u -> t, then a path of S - {u} from t to v
            cand = W[us[sl]][:, :, None] + prev[rest[sl]]
            out[rows[sl], us[sl], :] = cand.min(axis=1)
        F[s] = out
    return F


def _split_patterns(s: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Local positions of every ``X`` with ``|X| = k`` and every junction ``t`` in ``X``."""
    xs, ts = [], []
    for combo in itertools.combinations(range(s), k):
        for t in combo:
            xs.append(combo)
            ts.append(t)
    return np.array(xs, dtype=np.int64), np.array(ts, dtype=np.int64)


def split_level(n: int, s: int, k: int, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """All ``f(S, u, v)`` with ``|S| = s`` through the two-piece split with ``|X| = k``.

    ``left`` holds paths of size ``k`` and ``right`` of size ``s - k + 1``.
    """
    masks, elems = _size_class(n, s)
    rank = _ranks(n)
    xpos, tpos = _split_patterns(s, k)
    out = np.empty((len(masks), n, n))
    ar = np.arange(n)
    step = max(1, CHUNK_ELEMS // (len(tpos) * n * n))
    for lo in range(0, len(masks), step):
        E = elems[lo : lo + step]
        S = masks[lo : lo + step]
        bits = 1 << E
        X = bits[:, xpos].sum(axis=2)
        t = E[:, tpos]
        R = S[:, None] - X + (1 << t)
        a = left[rank[X][..., None], ar, t[..., None]]  # f(X, u, t)
        b = right[rank[R][..., None], t[..., None], ar]  # f(R, t, v)
        out[lo : lo + step] = (a[..., :, None] + b[..., None, :]).min(axis=1)
    return out


def split_value(f, S: int, u: int, v: int, k: int) -> float:
    """Right-hand side of the split recurrence for one ``(S, u, v, k)``, from a lookup ``f``."""
    members = [b for b in range(S.bit_length()) if S >> b & 1]
    others = [b for b in members if b not in (u, v)]
    best = math.inf
    for rest in itertools.combinations(others, k - 1):
        X = (1 << u) | sum(1 << b for b in rest)
        for t in rest:
            R = (S & ~X) | (1 << t)
            best = min(best, f(X, u, t) + f(R, t, v))
    return best


def _tsp_plan(n: int, alpha: float) -> Optional[dict]:
    h, k1, k2 = split_sizes(n, alpha)
    h2 = n - h + 2
    if k1 < 2 or k1 > h - 1:
        return None
    level2 = sorted({k1, h - k1 + 1, h2 - k1 + 1})
    leaves = set()
    for q in level2:
        if q - 1 >= k2:
            leaves |= {k2, q - k2 + 1}
        else:
            leaves.add(q)
    return {"h": h, "h2": h2, "k1": k1, "k2": k2, "level2": level2, "t": max(leaves)}


def hybrid_tsp(g: WeightedGraph, alpha: Optional[float] = None) -> HybridResult:
    n = g.n
    if n < 3:
        raise ValueError(f"TSP needs n >= 3, got {n}")
    if n > MAX_TSP_N:
        raise ValueError(f"hybrid TSP simulation capped at n={MAX_TSP_N}")
    if alpha is None:
        alpha = solve_tsp_alpha()[0]
    if not 0.0 < alpha <= 0.5:
        raise ValueError(f"alpha={alpha} outside (0, 1/2]")
    ledger = CostLedger()
    plan = _tsp_plan(n, alpha)
    if plan is None:
        answer = tsp_held_karp(g, ledger)
        return HybridResult(answer, ledger, "classical-fallback", {"n": n, "alpha": alpha})
    h, h2, k1, k2, t = plan["h"], plan["h2"], plan["k1"], plan["k2"], plan["t"]

    pre = path_tables(g, t)
    ledger.add_queries(n * n)
    ledger.add_classical(sum(math.comb(n, s) * s * s * n for s in range(1, t + 1)))
    ledger.note_table(sum(a.nbytes for a in pre.values()))

    lvl2, cost2 = {}, {}
    for q in plan["level2"]:
        if q - 1 >= k2:
            lvl2[q] = split_level(n, q, k2, pre[k2], pre[q - k2 + 1])
            cost2[q] = minfind_cost(math.comb(q - 2, k2 - 1) * (k2 - 1), 2.0)
        else:
            lvl2[q] = pre[q]
            cost2[q] = 1.0
    lvl1, cost1 = {}, {}
    for s in sorted({h, h2}):
        lvl1[s] = split_level(n, s, k1, lvl2[k1], lvl2[s - k1 + 1])
        cost1[s] = minfind_cost(math.comb(s - 2, k1 - 1) * (k1 - 1), cost2[k1] + cost2[s - k1 + 1])

    # top: f(S, u, v) + f((V - S) + {u, v}, v, u) over |S| = h, u != v in S
    masks, elems = _size_class(n, h)
    rank = _ranks(n)
    full = (1 << n) - 1
    pairs = np.array([(i, j) for i in range(h) for j in range(h) if i != j], dtype=np.int64)
    u, v = elems[:, pairs[:, 0]], elems[:, pairs[:, 1]]
    other = (full ^ masks)[:, None] | (1 << u) | (1 << v)
    rows = np.arange(len(masks))[:, None]
    vals = lvl1[h][rows, u, v] + lvl1[h2][rank[other], v, u]
    best = vals.min()
    answer = UNREACHABLE if not np.isfinite(best) else int(best)

    top_domain = math.comb(n, h) * h * (h - 1)
    item = cost1[h] + cost1[h2]
    ledger.charge_minfind(top_domain, item)
    trace = {
        "n": n,
        "alpha": alpha,
        "sizes": {"half": h, "other_half": h2, "k1": k1, "k2": k2},
        "table_threshold": t,
        "level_costs": [1.0, max(cost2.values()), max(cost1.values()), ledger.quantum_cost],
    }
    return HybridResult(answer, ledger, "hybrid", trace)


# ----------------------------------------------------------------- FAS


def _arcs_between(out: np.ndarray, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    total = np.zeros(A.shape, dtype=np.int64)
    for a, om in enumerate(out):
        total += ((A >> a) & 1) * np.bitwise_count(B & om).astype(np.int64)
    return total


def fas_prefix_table(g: DirectedGraph, max_size: int) -> np.ndarray:
    """Minimum feedback arc set of every induced subgraph on at most ``max_size`` vertices."""
    n = g.n
    out = g.out_masks()
    f = np.full(1 << n, -1, dtype=np.int64)
    f[0] = 0
    for s in range(1, max_size + 1):
        masks, elems = _size_class(n, s)
        best = np.full(len(masks), np.iinfo(np.int64).max)
        for j in range(s):
            v = elems[:, j]
            rest = masks ^ (1 << v)
            back = np.bitwise_count(np.array(out)[v] & rest).astype(np.int64)
            best = np.minimum(best, f[rest] + back)
        f[masks] = best
    return f


def fas_split_level(g: DirectedGraph, s: int, k: int, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    """``f(S)`` for every ``|S| = s`` as the best split into ``A`` (``|A| = k``) after ``S - A``."""
    n = g.n
    out = np.array(g.out_masks(), dtype=np.int64)
    masks, elems = _size_class(n, s)
    pats = np.array(list(itertools.combinations(range(s), k)), dtype=np.int64)
    res = np.empty(len(masks), dtype=np.int64)
    step = max(1, CHUNK_ELEMS // (len(pats) * max(n, 1)))
    for lo in range(0, len(masks), step):
        S = masks[lo : lo + step]
        bits = 1 << elems[lo : lo + step]
        A = bits[:, pats].sum(axis=2)
        B = S[:, None] - A
        res[lo : lo + step] = (left[A] + right[B] + _arcs_between(out, A, B)).min(axis=1)
    return res


def hybrid_feedback_arc_set(g: DirectedGraph, alpha: Optional[float] = None) -> HybridResult:
    n = g.n
    if n > MAX_FAS_N:
        raise ValueError(f"hybrid FAS simulation capped at n={MAX_FAS_N}")
    if alpha is None:
        alpha = solve_tsp_alpha()[0]
    ledger = CostLedger()
    h, k1 = n // 2, n // 4
    k2 = max(1, round(alpha * n / 4))
    if k1 < 1 or n < 4:
        answer = feedback_arc_set_dp(g, ledger)
        return HybridResult(answer, ledger, "classical-fallback", {"n": n, "alpha": alpha})
    level1 = sorted({h, n - h})
    level2 = sorted({k1} | {s - k1 for s in level1})
    leaves = set()
    for q in level2:
        leaves |= {k2, q - k2} if q - 1 >= k2 else {q}
    t = max(leaves)

    pre = fas_prefix_table(g, t)
    ledger.add_classical(sum(math.comb(n, s) * s for s in range(1, t + 1)))
    ledger.note_table(pre.nbytes)

    def as_full(values: np.ndarray, s: int) -> np.ndarray:
        arr = np.full(1 << n, -1, dtype=np.int64)
        arr[_size_class(n, s)[0]] = values
        return arr

    lvl2, cost2 = {}, {}
    for q in level2:
        if q - 1 >= k2:
            lvl2[q] = as_full(fas_split_level(g, q, k2, pre, pre), q)
            cost2[q] = minfind_cost(math.comb(q, k2), 2.0)
        else:
            lvl2[q] = pre
            cost2[q] = 1.0
    lvl1, cost1 = {}, {}
    for s in level1:
        lvl1[s] = as_full(fas_split_level(g, s, k1, lvl2[k1], lvl2[s - k1]), s)
        cost1[s] = minfind_cost(math.comb(s, k1), cost2[k1] + cost2[s - k1])

    top = fas_split_level(g, n, h, lvl1[h], lvl1[n - h])
    answer = int(top[0])
    ledger.charge_minfind(math.comb(n, h), cost1[h] + cost1[n - h])
    trace = {
        "n": n,
        "alpha": alpha,
        "sizes": {"half": h, "k1": k1, "k2": k2},
        "table_threshold": t,
        "level_costs": [1.0, max(cost2.values()), max(cost1.values()), ledger.quantum_cost],
    }
    return HybridResult(answer, ledger, "hybrid", trace)
