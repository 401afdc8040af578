"""Hypercube path, its forbidden-vertex variant, and vertex ordering problems."""

from __future__ import annotations

from typing import Optional

from ..instances import HypercubeInstance, OrderingObjective, WeightedGraph
from .cube import CubeHybrid, CubeProblem, HybridResult, LevelSchedule


def hypercube_problem(inst: HypercubeInstance) -> CubeProblem:
    edge = inst.edge_oracle
    return CubeProblem(inst.n, lambda x, i: 0 if edge(x, i) else None, inst.validity_oracle)


def _schedule(schedule: Optional[LevelSchedule], n: int) -> LevelSchedule:
    return LevelSchedule.default(n) if schedule is None else schedule


def _as_bool(result: HybridResult) -> HybridResult:
    result.answer = result.answer is not None
    return result


def hybrid_hypercube_path(inst: HypercubeInstance, schedule: Optional[LevelSchedule] = None) -> HybridResult:
    sched = _schedule(schedule, inst.n)
    return _as_bool(CubeHybrid(hypercube_problem(inst), sched.alpha).run())


def hybrid_hypercube_path_forbidden(inst: HypercubeInstance, schedule: Optional[LevelSchedule] = None) -> HybridResult:
    sched = _schedule(schedule, inst.n)
    return _as_bool(CubeHybrid(hypercube_problem(inst), sched.alpha, forbidden=True).run())


def ordering_problem(g: WeightedGraph, obj: OrderingObjective) -> CubeProblem:
    f = obj.f
    return CubeProblem(g.n, lambda x, v: f(g, x, v), None, obj.mode)


def hybrid_vertex_ordering(
    g: WeightedGraph, obj: OrderingObjective, schedule: Optional[LevelSchedule] = None
) -> HybridResult:
    sched = _schedule(schedule, g.n)
    return CubeHybrid(ordering_problem(g, obj), sched.alpha, search="minfind").run()
