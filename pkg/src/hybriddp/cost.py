"""Quantum cost calculus used by the hybrid simulators.

All costs are the exponential part only: polynomial and polylogarithmic
factors are dropped, so a search over ``N`` items of cost ``T`` is charged
``sqrt(N) * T`` whether it is Grover search or minimum finding.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from typing import Iterable


def entropy(eps: float) -> float:
    """Binary entropy in bits, with ``0 log 0 = 0``."""
    if not 0.0 <= eps <= 1.0:
        raise ValueError(f"entropy argument {eps!r} outside [0, 1]")
    if eps == 0.0 or eps == 1.0:
        return 0.0
    return -(eps * math.log2(eps) + (1.0 - eps) * math.log2(1.0 - eps))


def entropy_derivative(eps: float) -> float:
    return math.log2((1.0 - eps) / eps)


def log2_binomial_sum(n: int, k: int) -> float:
    """Exact ``log2(sum_{i<=k} C(n, i))`` via big-integer arithmetic."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    total = sum(math.comb(n, i) for i in range(k + 1))
    # int.bit_length keeps this exact-ish for totals far beyond float range
    shift = max(total.bit_length() - 60, 0)
    return shift + math.log2(total >> shift)


def grover_cost(domain_size: float, item_cost: float) -> float:
    return math.sqrt(domain_size) * item_cost


def minfind_cost(domain_size: float, item_cost: float) -> float:
    # the O(log n) error-reduction factor is deliberately not charged here
    return math.sqrt(domain_size) * item_cost


def vts_cost(item_costs: Iterable[float]) -> float:
    """Variable time search: Euclidean norm of the per-item costs."""
    return math.sqrt(math.fsum(t * t for t in item_costs))


@dataclass
class CostLedger:
    """Accumulated cost of one simulated run.

    ``quantum_cost`` only ever receives the cost of the outermost search of a
    run (nested searches are folded into item costs), so sequential
    composition is plain addition.
    """

    quantum_cost: float = 0.0
    classical_ops: int = 0
    oracle_queries: int = 0
    max_table_bytes: int = 0
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def charge_quantum(self, cost: float) -> None:
        if cost < 0:
            raise ValueError("negative quantum cost")
        with self._lock:
            self.quantum_cost += cost

    def charge_minfind(self, domain_size: float, item_cost: float) -> float:
        cost = minfind_cost(domain_size, item_cost)
        with self._lock:
            self.quantum_cost += cost
            if domain_size > 1:
                self.classical_ops += math.ceil(math.log2(domain_size))
        return cost

    def add_classical(self, ops: int) -> None:
        if ops < 0:
            raise ValueError("negative op count")
        with self._lock:
            self.classical_ops += int(ops)

    def add_queries(self, count: int = 1) -> None:
        with self._lock:
            self.oracle_queries += count

    def note_table(self, nbytes: int) -> None:
        with self._lock:
            self.max_table_bytes = max(self.max_table_bytes, int(nbytes))

    def absorb(self, other: CostLedger) -> None:
        """Sequential composition: add ``other`` into this ledger."""
        with self._lock:
            self.quantum_cost += other.quantum_cost
            self.classical_ops += other.classical_ops
            self.oracle_queries += other.oracle_queries
            self.max_table_bytes = max(self.max_table_bytes, other.max_table_bytes)

    @property
    def total(self) -> float:
        return self.quantum_cost + self.classical_ops

    def summary(self) -> dict:
        return {
            "quantum_cost": self.quantum_cost,
            "classical_ops": self.classical_ops,
            "oracle_queries": self.oracle_queries,
            "max_table_bytes": self.max_table_bytes,
        }
