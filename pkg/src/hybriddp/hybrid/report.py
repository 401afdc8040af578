"""Measured cost exponents against predicted ones."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .cube import HybridResult

# slack(n) = SLACK_C * log2(n) / n absorbs the polynomial factors the ledger keeps
SLACK_C = 3.0


def measured_exponent(cost: float, n: int) -> float:
    """``log2(cost) / n``, with costs of at most 1 reported as 0."""
    if cost <= 1 or n < 1:
        return 0.0
    return math.log2(cost) / n


def slack(n: int) -> float:
    return SLACK_C * math.log2(n) / n if n > 1 else float("inf")


@dataclass
class ExponentReport:
    n: int
    measured: float
    measured_quantum: float
    measured_classical: float
    predicted: float
    slack: float
    exceeds: bool

    def as_dict(self) -> dict:
        return asdict(self)


def ledger_vs_prediction(result: HybridResult, predicted: float, n: int) -> ExponentReport:
    led = result.ledger
    measured = measured_exponent(led.total, n)
    s = slack(n)
    return ExponentReport(
        n=n,
        measured=measured,
        measured_quantum=measured_exponent(led.quantum_cost, n),
        measured_classical=measured_exponent(led.classical_ops, n),
        predicted=predicted,
        slack=s,
        exceeds=measured > predicted + s,
    )
