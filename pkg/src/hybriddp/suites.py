"""Cross-module property suites shared by ``verify`` and the test-suite.

Every check is a function of explicit seeds, and each failure carries the
seed, parameters and rendered instance so it can be replayed.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import brute
from .bandwidth import BucketLayout
from .classical import (
    bandwidth_classical,
    bandwidth_count_valid_pairs,
    feedback_arc_set_dp,
    hypercube_path_dp,
    setcover_dp,
    tsp_held_karp,
    vertex_ordering_dp,
)
from .cost import CostLedger, entropy, log2_binomial_sum
from .exponents import solve_gamma_mu, solve_mu0, solve_tsp_alpha
from .hybrid.bandwidth import hybrid_bandwidth
from .hybrid.paths import hybrid_hypercube_path, hybrid_hypercube_path_forbidden, hybrid_vertex_ordering
from .hybrid.report import ledger_vs_prediction, measured_exponent
from .hybrid.setcover import band_window, default_alpha, hybrid_set_cover, real_bands
from .hybrid.splits import hybrid_feedback_arc_set, hybrid_tsp
from .instances import OBJECTIVES, generate_random, render_instance

# permutation oracles get slow past this size
BRUTE_PERM_N = 8
BRUTE_COVER_M = 16


@dataclass
class Failure:
    check: str
    seed: int
    params: dict
    detail: str
    instance: str = ""

    def as_dict(self) -> dict:
        return {"check": self.check, "seed": self.seed, "params": self.params, "detail": self.detail,
                "instance": self.instance}


@dataclass
class SuiteResult:
    suite: str
    passed: dict = field(default_factory=dict)
    total: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    def record(self, check: str, ok: bool, failure: Optional[Failure] = None) -> None:
        self.total[check] = self.total.get(check, 0) + 1
        self.passed[check] = self.passed.get(check, 0) + int(ok)
        if not ok and failure is not None:
            self.failures.append(failure)

    @property
    def ok(self) -> bool:
        return all(self.passed[c] == self.total[c] for c in self.total)


# ------------------------------------------------------------ answers


@dataclass(frozen=True)
class AnswerCase:
    """One generated instance with its three answers."""

    problem: str
    n: int
    seed: int
    params: dict
    hybrid: object
    classical: object
    brute: object  # None when enumeration is out of reach
    text: str

    @property
    def agree(self) -> bool:
        ok = self.hybrid == self.classical
        return ok and (self.brute is None or self.brute == self.classical)


def _hypercube(n, seed, i, forbidden):
    params = {"density": (0.55, 0.65, 0.75)[i % 3]}
    if forbidden:
        params["valid_density"] = (0.7, 0.85, 0.95)[i % 3]
    inst = generate_random("hypercube", n, seed, **params)
    run = hybrid_hypercube_path_forbidden if forbidden else hybrid_hypercube_path
    return params, inst, run(inst).answer, hypercube_path_dp(inst), brute.brute_hypercube(inst)


def _ordering(names):
    def case(n, seed, i):
        name = names[i % len(names)]
        params = {"density": (0.3, 0.5)[i // len(names) % 2], "objective": name}
        g = generate_random("graph", n, seed, density=params["density"], connected=bool(i % 3))
        obj = OBJECTIVES[name]()
        b = brute.brute_ordering(g, obj) if n <= BRUTE_PERM_N else None
        return params, g, hybrid_vertex_ordering(g, obj).answer, vertex_ordering_dp(g, obj), b

    return case


def _tsp(n, seed, i):
    params = {"wmin": 1, "wmax": 99, "density": 1.0 if i % 4 else 0.6}
    g = generate_random("tsp", n, seed, **params)
    b = brute.brute_tsp(g) if n <= BRUTE_PERM_N else None
    return params, g, hybrid_tsp(g).answer, tsp_held_karp(g), b


def _fas(n, seed, i):
    params = {"tournament": True} if i % 2 else {"density": 0.3}
    g = generate_random("digraph", n, seed, **params)
    b = brute.brute_fas(g) if n <= BRUTE_PERM_N else None
    return params, g, hybrid_feedback_arc_set(g).answer, feedback_arc_set_dp(g), b


def _setcover(n, seed, i):
    params = {"m": min(16, n + 2 + i % 3), "max_size": max(1, n // (2 + i % 3)), "beta": (0.1, 0.2)[i % 2]}
    inst = generate_random("setcover", n, seed, m=params["m"], max_size=params["max_size"])
    b = brute.brute_setcover(inst) if inst.m <= BRUTE_COVER_M else None
    return params, inst, hybrid_set_cover(inst, beta=params["beta"]).answer, setcover_dp(inst), b


def _bandwidth(n, seed, i):
    params = {"density": (0.25, 0.4)[i % 2], "b": 1 + i // 2 % (n - 1)}
    g = generate_random("graph", n, seed, density=params["density"])
    b = params["b"]
    exact = bandwidth_classical(g)
    bf = brute.brute_bandwidth(g) <= b if n <= BRUTE_PERM_N else None
    return params, g, hybrid_bandwidth(g, b).answer, exact <= b, bf


# problem -> (case builder, smallest n, largest n)
ANSWER_PROBLEMS: dict[str, tuple[Callable, int, int]] = {
    "hypercube": (lambda n, s, i: _hypercube(n, s, i, False), 4, 12),
    "hypercube-forbidden": (lambda n, s, i: _hypercube(n, s, i, True), 4, 12),
    "ordering-max": (_ordering(("cutwidth", "vertex-separation")), 4, 12),
    "ordering-sum": (_ordering(("linear-arrangement", "sum-cut")), 4, 12),
    "tsp": (_tsp, 4, 12),
    "fas": (_fas, 3, 12),
    "setcover": (_setcover, 4, 12),
    "bandwidth": (_bandwidth, 4, 10),
}


def sizes_for(problem: str, count: int, n_cap: int) -> list[int]:
    _, lo, hi = ANSWER_PROBLEMS[problem]
    hi = min(hi, n_cap)
    if hi < lo:
        raise ValueError(f"n cap {n_cap} below the smallest {problem} size {lo}")
    span = hi - lo + 1
    return [lo + i % span for i in range(count)]


def answer_case(problem: str, n: int, seed: int, i: int) -> AnswerCase:
    build = ANSWER_PROBLEMS[problem][0]
    params, inst, hyb, cls, bf = build(n, seed, i)
    return AnswerCase(problem, n, seed, params, hyb, cls, bf, render_instance(inst))


def answers_suite(
    problems=None, count: int = 200, n_cap: int = 12, seed: int = 0, threads: int = 1
) -> SuiteResult:
    res = SuiteResult("answers")
    for problem in problems or ANSWER_PROBLEMS:
        ns = sizes_for(problem, count, n_cap)
        jobs = [(problem, n, seed + i, i) for i, n in enumerate(ns)]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                cases = list(pool.map(lambda a: answer_case(*a), jobs))
        else:
            cases = [answer_case(*a) for a in jobs]
        for c in cases:
            detail = f"n={c.n} hybrid={c.hybrid} classical={c.classical} brute={c.brute}"
            res.record(problem, c.agree, Failure(problem, c.seed, {"n": c.n, **c.params}, detail, c.text))
    return res


# ------------------------------------------------------------- bands


def partial_cover_sizes(inst, cover: tuple[int, ...]) -> set[int]:
    sizes = set()
    for r in range(len(cover) + 1):
        for sub in itertools.combinations(cover, r):
            union = 0
            for j in sub:
                union |= inst.sets[j]
            sizes.add(union.bit_count())
    return sizes


def bands_suite(count: int = 50, n_cap: int = 12, seed: int = 0, beta: float = 0.2) -> SuiteResult:
    """Every minimum cover meets every band when all sets have size at most ``beta n``."""
    res = SuiteResult("bands")
    alpha = default_alpha(beta)
    lo = min(8, n_cap)
    for i in range(count):
        n = lo + i % (n_cap - lo + 1)
        d = beta * n
        params = {"n": n, "m": n + 2, "max_size": max(1, math.floor(d)), "beta": beta}
        inst = generate_random("setcover", n, seed + i, m=params["m"], max_size=params["max_size"])
        covers = brute.all_minimum_covers(inst)
        bands = real_bands(n, alpha, beta)
        top = band_window(n / 2, d, n, max(s.bit_count() for s in inst.sets))
        ok_bands = ok_window = True
        for cover in covers:
            sizes = partial_cover_sizes(inst, cover)
            for a, b in bands.values():
                ok_bands &= any(a <= s <= b for s in sizes)
            if top is not None:
                ok_window &= any(top[0] <= s <= top[1] for s in sizes)
        text = render_instance(inst)
        res.record("band-partial-cover", ok_bands, Failure("band-partial-cover", seed + i, params, str(bands), text))
        res.record("search-window", ok_window, Failure("search-window", seed + i, params, str(top), text))
    return res


# ------------------------------------------------------------- bounds


def entropy_bound_holds(n: int, k: int) -> bool:
    """``sum_{i<=k} C(n, i) <= 2^(n H(k/n))``, compared exactly where possible."""
    total = sum(math.comb(n, i) for i in range(k + 1))
    if k == 0:
        return total == 1
    # 2^(n H(k/n)) = n^n / (k^k (n-k)^(n-k)), so the bound is an integer inequality
    return total * k**k * (n - k) ** (n - k) <= n**n


def bounds_suite(n_cap: int = 40, mu_points: int = 50, pair_graphs: int = 12, seed: int = 0) -> SuiteResult:
    res = SuiteResult("bounds")
    for n in range(1, n_cap + 1):
        for k in range(0, n // 2 + 1):
            ok = entropy_bound_holds(n, k)
            res.record("entropy-bound", ok, Failure("entropy-bound", seed, {"n": n, "k": k},
                                                    f"log2 sum={log2_binomial_sum(n, k):.6f} nH={n * entropy(k / n):.6f}"))
    mu0 = solve_mu0()
    for j in range(mu_points):
        mu = mu0 + (2.0 - mu0) * j / (mu_points - 1)
        g = solve_gamma_mu(mu).gamma_mu
        ratio = g * g / mu
        res.record("gamma-mu-ratio", ratio <= mu0 + 1e-6,
                   Failure("gamma-mu-ratio", seed, {"mu": mu}, f"gamma^2/mu={ratio:.9f} mu0={mu0:.9f}"))
    for j in range(pair_graphs):
        n = 4 + j % 5
        g = generate_random("graph", n, seed + j, density=0.3)
        for b in range(1, n - 1):
            count = bandwidth_count_valid_pairs(g, b)
            bound = BucketLayout(n, b).bound()
            res.record("valid-pairs", count <= bound, Failure("valid-pairs", seed + j, {"n": n, "b": b},
                                                              f"{count} > {bound}", render_instance(g)))
    return res


# ------------------------------------------------------------- ledger


@dataclass
class LedgerRow:
    n: int
    hybrid_total: float
    hybrid_quantum: float
    classical_ops: int
    measured: float
    measured_quantum: float
    measured_classical: float
    predicted: float
    level_costs: list

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def tsp_ledger_rows(sizes=(12, 14, 16), seed: int = 0) -> list[LedgerRow]:
    predicted = solve_tsp_alpha()[1]
    rows = []
    for n in sizes:
        g = generate_random("tsp", n, seed, wmin=1, wmax=99)
        run = hybrid_tsp(g)
        classical = CostLedger()
        tsp_held_karp(g, classical)
        rep = ledger_vs_prediction(run, predicted, n)
        rows.append(LedgerRow(n, run.ledger.total, run.ledger.quantum_cost, classical.classical_ops, rep.measured,
                              rep.measured_quantum, measured_exponent(classical.classical_ops, n), predicted,
                              list(run.trace.get("level_costs", []))))
    return rows


def ledger_suite(sizes=(12, 14, 16), seed: int = 0) -> tuple[SuiteResult, list[LedgerRow]]:
    res = SuiteResult("ledger")
    rows = tsp_ledger_rows(sizes, seed)
    for r in rows:
        lc = r.level_costs
        res.record("levels-increase", all(a < b for a, b in zip(lc, lc[1:])),
                   Failure("levels-increase", seed, {"n": r.n}, str(lc)))
    last = rows[-1]
    res.record("classical-above-quantum", last.measured_classical > last.measured_quantum,
               Failure("classical-above-quantum", seed, {"n": last.n},
                       f"classical {last.measured_classical:.4f} vs quantum {last.measured_quantum:.4f}"))
    return res, rows
