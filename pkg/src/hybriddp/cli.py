"""Command line: ``solve``, ``optimize``, ``verify`` and ``generate``.

Exit codes: 0 success, 1 a property or agreement failed (or an optimizer
did not converge), 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional

from . import classical, exponents, suites
from .hybrid.bandwidth import hybrid_bandwidth, hybrid_bandwidth_search
from .hybrid.cube import DEFAULT_SCHEDULE_K, LevelSchedule
from .hybrid.paths import hybrid_hypercube_path, hybrid_hypercube_path_forbidden, hybrid_vertex_ordering
from .hybrid.setcover import hybrid_set_cover
from .hybrid.splits import hybrid_feedback_arc_set, hybrid_tsp
from .instances import OBJECTIVES, Outcome, ParseError, generate_random, parse_instance, render_instance

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
PROBLEMS = ("hypercube", "tsp", "bandwidth", "ordering", "fas", "setcover")
INSTANCE_KIND = {"hypercube": "hypercube", "tsp": "tsp", "bandwidth": "graph", "ordering": "graph",
                 "fas": "digraph", "setcover": "setcover"}

log = logging.getLogger("hybriddp")


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Outcome):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return x.item()
    return x


def emit(record: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    record = _jsonable(record)
    if fmt == "records":
        out.write(json.dumps(record, sort_keys=True) + "\n")
        return
    width = max(len(k) for k in record)
    for k, v in record.items():
        if isinstance(v, float):
            v = f"{v:.6f}"
        elif isinstance(v, (dict, list)):
            v = json.dumps(v)
        out.write(f"{k:<{width}}  {v}\n")
    out.write("\n")


def read_records(text: str) -> list[dict]:
    """Parse line-delimited records as written with ``--format records``."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad record: {exc.msg}", lineno) from exc
        if not isinstance(rec, dict):
            raise ParseError("record is not an object", lineno)
        out.append(rec)
    return out


# ---------------------------------------------------------------- solve


@dataclass
class RunReport:
    problem: str
    instance: str
    classical: object = None
    hybrid: object = None
    agree: Optional[bool] = None
    path_taken: Optional[str] = None
    ledger: dict = field(default_factory=dict)
    wall_time: float = 0.0
    seed: int = 0
    params: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        return _jsonable(asdict(self))

    @classmethod
    def from_record(cls, rec: dict) -> RunReport:
        return cls(**{k: rec[k] for k in cls.__dataclass_fields__ if k in rec})


def _schedule(args, n: int) -> LevelSchedule:
    if args.alpha_levels:
        return LevelSchedule(tuple(float(a) for a in args.alpha_levels.split(",")), n)
    return LevelSchedule.default(n, args.k)


def solve_classical(problem: str, inst, args):
    if problem == "hypercube":
        return classical.hypercube_path_dp(inst)
    if problem == "tsp":
        return classical.tsp_held_karp(inst)
    if problem == "bandwidth":
        if args.b is not None:
            return classical.bandwidth_decide(inst, args.b)
        return classical.bandwidth_classical(inst)
    if problem == "ordering":
        return classical.vertex_ordering_dp(inst, OBJECTIVES[args.objective]())
    if problem == "fas":
        return classical.feedback_arc_set_dp(inst)
    return classical.setcover_dp(inst)


def solve_hybrid(problem: str, inst, args):
    if problem == "hypercube":
        sched = _schedule(args, inst.n)
        forbidden = bool(inst.invalid_list()) if inst.n <= 16 else True
        run = hybrid_hypercube_path_forbidden if forbidden else hybrid_hypercube_path
        return run(inst, sched)
    if problem == "tsp":
        return hybrid_tsp(inst, args.alpha)
    if problem == "bandwidth":
        if args.b is not None:
            return hybrid_bandwidth(inst, args.b)
        return hybrid_bandwidth_search(inst)
    if problem == "ordering":
        return hybrid_vertex_ordering(inst, OBJECTIVES[args.objective](), _schedule(args, inst.n))
    if problem == "fas":
        return hybrid_feedback_arc_set(inst, args.alpha)
    return hybrid_set_cover(inst, args.alpha, args.beta)


def run_solve(problem: str, inst, label: str, seed: int, args) -> RunReport:
    params = {"engine": args.engine}
    if problem in ("hypercube", "ordering"):
        params["k"] = args.k
    if problem == "ordering":
        params["objective"] = args.objective
    if problem == "bandwidth" and args.b is not None:
        params["b"] = args.b
    if problem == "setcover":
        params["beta"] = args.beta
    if args.alpha is not None:
        params["alpha"] = args.alpha
    rep = RunReport(problem, label, seed=seed, params=params)
    t0 = time.perf_counter()
    if args.engine in ("classical", "both"):
        rep.classical = solve_classical(problem, inst, args)
    if args.engine in ("hybrid", "both"):
        res = solve_hybrid(problem, inst, args)
        rep.hybrid = res.answer
        rep.path_taken = res.path_taken
        rep.ledger = res.ledger.summary()
    rep.wall_time = time.perf_counter() - t0
    if args.engine == "both":
        rep.agree = rep.classical == rep.hybrid
    return rep


def _load_instances(path: str, problem: str, seed: int) -> list[tuple[str, object, int]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    kind = INSTANCE_KIND[problem]
    if text.lstrip().startswith("{"):
        out = []
        for i, rec in enumerate(read_records(text)):
            if "text" not in rec:
                raise ParseError("record has no instance text", i + 1)
            out.append((f"{path}#{i}", parse_instance(rec["text"], kind), rec.get("seed", seed)))
        return out
    return [(path, parse_instance(text, kind), seed)]


def cmd_solve(args) -> int:
    try:
        items = _load_instances(args.file, args.problem, args.seed)
        reports = [run_solve(args.problem, inst, label, seed, args) for label, inst, seed in items]
    except (ParseError, InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for rep in reports:
        emit(rep.as_record(), args.format)
    return EXIT_FAIL if any(r.agree is False for r in reports) else EXIT_OK


# -------------------------------------------------------------- optimize


def _optimize_records(args) -> list[dict]:
    t = args.target
    if t == "gamma":
        sol = exponents.solve_gamma(args.k)
        return [{"target": t, "k": args.k, "gamma": sol.gamma, "alpha": list(sol.alpha),
                 "residual": sol.max_residual}]
    if t == "gamma_mu":
        pt = exponents.solve_gamma_mu(args.mu, args.k)
        res = max(abs(r) for r in exponents.gamma_mu_residuals(args.mu, args.k))
        return [{"target": t, "mu": args.mu, "gamma_mu": pt.gamma_mu, "residual": res}]
    if t == "mu0":
        mu0 = exponents.solve_mu0(args.k)
        return [{"target": t, "mu0": mu0, "residual": abs(exponents.solve_gamma_mu(mu0, args.k).gamma_mu - mu0)}]
    if t == "tsp":
        alpha, exp = exponents.solve_tsp_alpha()
        pre, quant = exponents.tsp_sides(alpha)
        return [{"target": t, "alpha": alpha, "exponent": exp, "residual": abs(pre - quant)}]
    if t == "setcover":
        alpha, exp = exponents.solve_setcover_balance(args.beta)
        pre, quant = exponents.setcover_sides(alpha, args.beta)
        return [{"target": t, "beta": args.beta, "alpha": alpha, "exponent": exp, "base": 2.0**exp,
                 "residual": abs(pre - quant)}]
    if t == "bandwidth":
        mu0 = exponents.solve_mu0()
        return [{"target": t, "base": exponents.bandwidth_exponent(mu0), "mu0": mu0, "residual": 0.0}]
    if t == "warmup":
        cl, qu = exponents.warmup_terms()
        return [{"target": t, "base": exponents.warmup_hamiltonian_exponent(), "classical_log2": cl,
                 "quantum_log2": qu, "residual": 0.0}]
    # curve
    points = exponents.emit_curve(exponents.parse_grid(args.grid), args.k)
    if args.out:
        exponents.write_curve_csv(points, args.out)
    return [{"target": t, "mu": p.mu, "gamma_mu": p.gamma_mu} for p in points]


def cmd_optimize(args) -> int:
    if args.target == "gamma_mu" and args.mu is None:
        print("error: gamma_mu needs --mu", file=sys.stderr)
        return EXIT_INPUT
    try:
        records = _optimize_records(args)
    except exponents.ConvergenceError as exc:
        print(f"error: {exc}; residuals {list(exc.residuals)}", file=sys.stderr)
        return EXIT_FAIL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.target == "curve" and args.format == "table":
        print("mu        gamma_mu")
        for r in records:
            print(f"{r['mu']:.6f}  {r['gamma_mu']:.6f}")
        if args.out:
            print(f"wrote {len(records)} rows to {args.out}")
        return EXIT_OK
    for r in records:
        emit(r, args.format)
    return EXIT_OK


# ---------------------------------------------------------------- verify


def cmd_verify(args) -> int:
    seed = args.seed
    try:
        if args.suite == "answers":
            problems = args.problems.split(",") if args.problems else None
            for p in problems or ():
                if p not in suites.ANSWER_PROBLEMS:
                    raise ValueError(f"unknown problem {p!r}; choose from {', '.join(suites.ANSWER_PROBLEMS)}")
            res = suites.answers_suite(problems, args.count or 200, args.n or 12, seed, args.threads)
        elif args.suite == "bands":
            res = suites.bands_suite(args.count or 50, args.n or 12, seed)
        elif args.suite == "bounds":
            res = suites.bounds_suite(args.n or 40, seed=seed)
        else:
            sizes = tuple(range(12, (args.n or 16) + 1, 2))
            res, rows = suites.ledger_suite(sizes, seed)
            for row in rows:
                emit({"suite": "ledger", "seed": seed, **row.as_dict()}, args.format)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    for check in res.total:
        emit({"suite": res.suite, "check": check, "passed": res.passed[check], "total": res.total[check],
              "seed": seed}, args.format)
    for f in res.failures:
        emit({"suite": res.suite, "failure": True, **f.as_dict()}, args.format, sys.stderr)
    return EXIT_OK if res.ok else EXIT_FAIL


# -------------------------------------------------------------- generate


def _param(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected key=value, got {text!r}")
    key, raw = text.split("=", 1)
    for conv in (int, float):
        try:
            return key, conv(raw)
        except ValueError:
            pass
    if raw.lower() in ("true", "false"):
        return key, raw.lower() == "true"
    return key, raw


def cmd_generate(args) -> int:
    params = dict(args.param or [])
    try:
        items = []
        for i in range(args.count):
            seed = args.seed + i
            inst = generate_random(args.kind, args.n, seed, **params)
            items.append((seed, render_instance(inst)))
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for seed, text in items:
            (out / f"{args.kind}_n{args.n}_s{seed}.txt").write_text(text, encoding="utf-8")
        return EXIT_OK
    for seed, text in items:
        if args.format == "records":
            emit({"kind": args.kind, "n": args.n, "seed": seed, "params": params, "text": text}, "records")
        else:
            sys.stdout.write(f"# seed {seed} params {json.dumps(params, sort_keys=True)}\n{text}")
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _global_flags(parser: argparse.ArgumentParser, defaults: bool) -> None:
    # subcommands repeat the flags without defaults so values given first survive
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--seed", type=int, default=d(0), help="base seed, echoed into every report")
    parser.add_argument("--threads", type=int, default=d(1), help="worker threads for suite scans")
    parser.add_argument("--format", choices=("table", "records"), default=d("table"),
                        help="aligned table or one JSON record per line")
    parser.add_argument("-v", "--verbose", action="store_true", default=d(False))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, defaults=False)

    p = argparse.ArgumentParser(prog="hybriddp", description="Exact DP solvers and simulated hybrid DP/quantum search.")
    _global_flags(p, defaults=True)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", parents=[common], help="solve one instance file")
    s.add_argument("problem", choices=PROBLEMS)
    s.add_argument("file", help="instance file, or a record stream from 'generate --format records'")
    s.add_argument("--engine", choices=("classical", "hybrid", "both"), default="both")
    s.add_argument("--k", type=int, default=DEFAULT_SCHEDULE_K,
                   help="level count of the hypercube schedule (default %(default)s: higher k "
                        "collapses under flooring at small n and falls back to the classical DP)")
    s.add_argument("--alpha-levels", help="explicit comma-separated level fractions, overrides --k")
    s.add_argument("--alpha", type=float, help="leaf fraction for tsp/fas/setcover")
    s.add_argument("--beta", type=float, default=0.1, help="big-set threshold for setcover")
    s.add_argument("--objective", choices=sorted(OBJECTIVES), default="cutwidth")
    s.add_argument("--b", type=int, help="bandwidth candidate: decide instead of computing")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("optimize", parents=[common], help="solve an exponent system")
    o.add_argument("target", choices=("gamma", "gamma_mu", "mu0", "tsp", "setcover", "bandwidth", "warmup", "curve"))
    o.add_argument("--k", type=int, default=exponents.DEFAULT_K)
    o.add_argument("--mu", type=float)
    o.add_argument("--beta", type=float, default=0.1)
    o.add_argument("--grid", default="1.70:2.00:0.01", help="lo:hi:step for curve")
    o.add_argument("--out", help="CSV path for curve")
    o.set_defaults(func=cmd_optimize)

    v = sub.add_parser("verify", parents=[common], help="run a property suite")
    v.add_argument("suite", choices=("answers", "bands", "bounds", "ledger"))
    v.add_argument("--n", type=int, help="size cap")
    v.add_argument("--count", type=int, help="instances per problem")
    v.add_argument("--problems", help="comma-separated subset for answers")
    v.set_defaults(func=cmd_verify)

    g = sub.add_parser("generate", parents=[common], help="write seeded random instances")
    g.add_argument("kind", choices=("hypercube", "tsp", "graph", "bandwidth", "digraph", "fas", "setcover"))
    g.add_argument("n", type=int)
    g.add_argument("--count", type=int, default=1)
    g.add_argument("--param", type=_param, action="append", metavar="KEY=VALUE")
    g.add_argument("--out", help="directory for one file per instance")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.threads < 1:
        print("error: --threads must be positive", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
