"""Level-split search on the hypercube with a simulated quantum cost ledger.

Every search is an exhaustive scan, so answers are exact; the ledger is
charged what the quantum search would cost.  Costs are structural: a
``Reachable_i`` search over ``N`` candidates costs ``sqrt(N)`` times its most
expensive item, where an item is the cost of ``Reachable_{i-1}`` plus
``gamma2 ** d`` for the recursive call on a ``d``-dimensional subcube.

Paths are valued over a (min, combine) algebra: ``None`` means no path, and
edge weights combine by ``max`` or ``+``.  Existence problems use weight 0.
The search from ``1^n`` downwards runs on the mirrored cube ``u -> full ^ u``.
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from ..cost import CostLedger, grover_cost, minfind_cost, vts_cost
from ..exponents import solve_gamma
from ..instances import bits_of

PATH_TAKEN = ("classical-fallback", "hybrid", "dfs-then-hybrid")
DEFAULT_SCHEDULE_K = 2


@dataclass(frozen=True)
class LevelSchedule:
    """Level fractions and the concrete levels ``floor(alpha_i * n)``."""

    alpha: tuple[float, ...]
    n: int

    def __post_init__(self):
        if not self.alpha:
            raise ValueError("need at least one level")
        if any(not 0.0 < a < 0.5 for a in self.alpha):
            raise ValueError(f"level fractions must lie in (0, 1/2): {self.alpha}")
        if any(b <= a for a, b in zip(self.alpha, self.alpha[1:])):
            raise ValueError(f"level fractions must increase: {self.alpha}")

    @classmethod
    def default(cls, n: int, k: int = DEFAULT_SCHEDULE_K) -> LevelSchedule:
        return cls(tuple(float(a) for a in solve_gamma(k).alpha), n)

    @property
    def k(self) -> int:
        return len(self.alpha)

    @property
    def concrete_levels(self) -> tuple[int, ...]:
        return levels_for(self.alpha, self.n)

    @property
    def degenerate(self) -> bool:
        return is_degenerate(self.alpha, self.n)

    def at(self, n: int) -> LevelSchedule:
        return LevelSchedule(self.alpha, n)


def levels_for(alpha: Sequence[float], n: int) -> tuple[int, ...]:
    return tuple(math.floor(a * n) for a in alpha)


def is_degenerate(alpha: Sequence[float], n: int) -> bool:
    ls = levels_for(alpha, n) + (n // 2,)
    return any(b <= a for a, b in zip(ls, ls[1:]))


@dataclass
class HybridResult:
    answer: object
    ledger: CostLedger
    path_taken: str
    trace: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.path_taken not in PATH_TAKEN:
            raise ValueError(f"unknown path tag {self.path_taken!r}")


COMBINE = {"max": max, "sum": operator.add}


class CubeProblem:
    """A valued subgraph of ``Q_n``: ``weight(x, i)`` is ``None`` for a missing edge."""

    def __init__(
        self,
        n: int,
        weight: Callable[[int, int], Optional[int]],
        valid: Optional[Callable[[int], bool]] = None,
        combine: str = "max",
        _counter: Optional[list] = None,
    ):
        self.n = n
        self.full = (1 << n) - 1
        self._weight = weight
        self._valid = valid
        self.mode = combine
        self.combine = COMBINE[combine]
        self.counter = _counter if _counter is not None else [0]
        self._mirror: Optional[CubeProblem] = None

    @property
    def has_validity(self) -> bool:
        return self._valid is not None

    def weight(self, x: int, i: int) -> Optional[int]:
        self.counter[0] += 1
        return self._weight(x, i)

    def valid(self, x: int) -> bool:
        if self._valid is None:
            return True
        self.counter[0] += 1
        return bool(self._valid(x))

    @property
    def mirror(self) -> CubeProblem:
        if self._mirror is None:
            F, w, v = self.full, self._weight, self._valid
            m = CubeProblem(
                self.n,
                lambda u, i: w(F ^ u ^ (1 << i), i),
                None if v is None else (lambda u: v(F ^ u)),
                self.mode,
                self.counter,
            )
            m._mirror = self
            self._mirror = m
        return self._mirror

    def extend(self, value: Optional[int], x: int, i: int) -> Optional[int]:
        if value is None:
            return None
        w = self.weight(x, i)
        return None if w is None else self.combine(value, w)

    def interval_table(self, lo: int, hi: int, max_level: Optional[int] = None) -> dict:
        """Best path value from ``lo`` to every ``z`` in ``[lo, hi]`` with ``|z - lo| <= max_level``."""
        free = list(bits_of(hi & ~lo))
        top = len(free) if max_level is None else min(max_level, len(free))
        table = {lo: 0 if self.valid(lo) else None}
        for level in range(1, top + 1):
            for combo in itertools.combinations(free, level):
                z = lo
                for b in combo:
                    z |= 1 << b
                if not self.valid(z):
                    table[z] = None
                    continue
                table[z] = best_of(self.extend(table[z ^ (1 << b)], z ^ (1 << b), b) for b in combo)
        return table


def best_of(values) -> Optional[int]:
    best = None
    for v in values:
        if v is not None and (best is None or v < best):
            best = v
    return best


def _join(a: Optional[int], b: Optional[int], combine) -> Optional[int]:
    return None if a is None or b is None else combine(a, b)


def _points(base: int, free: Sequence[int], size: int):
    for combo in itertools.combinations(free, size):
        z = base
        for b in combo:
            z |= 1 << b
        yield z


class CubeHybrid:
    """The level-split algorithm over a :class:`CubeProblem`.

    ``search`` selects Grover existence search or minimum finding for the
    charge formula; ``forbidden`` switches the middle-level scan to variable
    time search with unit cost on invalid vertices.
    """

    def __init__(
        self,
        problem: CubeProblem,
        alpha: Sequence[float],
        *,
        search: str = "grover",
        forbidden: bool = False,
        gamma2: Optional[float] = None,
    ):
        if search not in ("grover", "minfind"):
            raise ValueError(f"unknown search {search!r}")
        self.problem = problem
        self.alpha = tuple(alpha)
        self.search = search
        self.search_cost = grover_cost if search == "grover" else minfind_cost
        self.forbidden = forbidden
        self.gamma2 = float(gamma2 if gamma2 is not None else solve_gamma(6).gamma)
        self._runs: dict = {}
        self.stats = {"nested_runs": 0, "nested_fallbacks": 0}

    # --- recursion on subcubes ---------------------------------------

    def subcube(self, prob: CubeProblem, lo: int, hi: int) -> Optional[int]:
        """Fresh run on the interval ``[lo, hi]`` of ``prob``; answers are memoised."""
        key = (id(prob), lo, hi)
        if key not in self._runs:
            d = (hi & ~lo).bit_count()
            self.stats["nested_runs"] += 1
            if is_degenerate(self.alpha, d):
                self.stats["nested_fallbacks"] += 1
                self._runs[key] = prob.interval_table(lo, hi)[hi]
            else:
                self._runs[key] = self._split_search(prob, lo, hi, None)[0]
        return self._runs[key]

    def recursion_cost(self, d: int) -> float:
        return self.gamma2**d

    # --- one run ---------------------------------------------------------

    def _split_search(self, prob: CubeProblem, lo: int, hi: int, info: Optional[dict]):
        """Run the level-split algorithm on ``[lo, hi]``; returns ``(value, middle_costs)``."""
        d = (hi & ~lo).bit_count()
        levels = levels_for(self.alpha, d)
        k = len(levels)
        F = prob.full
        mirror = prob.mirror
        fwd = prob.interval_table(lo, hi, levels[0])
        bwd = mirror.interval_table(F ^ hi, F ^ lo, levels[0])
        tables = {id(prob): fwd, id(mirror): bwd}
        memo: dict = {}
        level_costs = [0.0] * (k + 1)

        def reach(p: CubeProblem, base: int, x: int, i: int):
            """Reachable_i(x) in ``p`` from ``base``: (value, cost)."""
            if i == 1:
                return tables[id(p)].get(x), 1.0
            key = (id(p), x, i)
            if key in memo:
                return memo[key]
            target = levels[i - 2]
            free = list(bits_of(x & ~base))
            best, worst, count = None, 0.0, 0
            wx = len(free)
            for y in _points(base, free, target):
                count += 1
                ry, cy = reach(p, base, y, i - 1)
                sub = self.subcube(p, y, x) if ry is not None else None
                best = best_of((best, _join(ry, sub, p.combine)))
                worst = max(worst, cy + self.recursion_cost(wx - target))
            cost = self.search_cost(count, worst)
            level_costs[i - 1] = max(level_costs[i - 1], cost)
            memo[key] = (best, cost)
            return memo[key]

        level_costs[0] = 1.0
        middle = list(_points(lo, list(bits_of(hi & ~lo)), d // 2))
        best = None
        item_costs = []
        for x in middle:
            if self.forbidden and not prob.valid(x):
                item_costs.append(1.0)
                continue
            v0, c0 = reach(prob, lo, x, k + 1)
            v1, c1 = reach(mirror, F ^ hi, F ^ x, k + 1)
            best = best_of((best, _join(v0, v1, prob.combine)))
            item_costs.append(c0 + c1)
        if info is not None:
            info.update(
                levels=levels + (d // 2,),
                level_costs=level_costs,
                middle_size=len(middle),
                table_entries=len(fwd) + len(bwd),
                valid_middle=sum(1 for c in item_costs if c != 1.0) if self.forbidden else len(middle),
            )
        return best, item_costs

    def run(self) -> HybridResult:
        prob = self.problem
        n = prob.n
        ledger = CostLedger()
        start = prob.counter[0]
        trace = {"n": n, "alpha": self.alpha, "levels": levels_for(self.alpha, n) + (n // 2,)}
        if is_degenerate(self.alpha, n):
            value = prob.interval_table(0, prob.full)[prob.full]
            ledger.add_classical(1 << n)
            ledger.note_table(1 << n)
            ledger.add_queries(prob.counter[0] - start)
            return HybridResult(value, ledger, "classical-fallback", trace)
        value, item_costs = self._split_search(prob, 0, prob.full, trace)
        ledger.add_classical(trace["table_entries"])
        ledger.note_table(trace["table_entries"])
        if self.forbidden:
            ledger.charge_quantum(vts_cost(item_costs))
        elif self.search == "minfind":
            ledger.charge_minfind(len(item_costs), max(item_costs))
        else:
            ledger.charge_quantum(grover_cost(len(item_costs), max(item_costs)))
        ledger.add_queries(prob.counter[0] - start)
        trace.update(self.stats)
        trace["gamma2"] = self.gamma2
        return HybridResult(value, ledger, "hybrid", trace)
