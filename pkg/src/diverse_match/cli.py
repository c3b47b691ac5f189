"""Command-line front end: solve single instances, generate instances,
run degree sweeps, and execute the verification suites.

Exit codes: 0 success, 2 malformed input or validation failure, 3 an exact
method refused because limits were exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__, acceptance, jsonio
from .fair import solve_fair, solve_fair_naive
from .generators import gen_degree_capped, gen_er_partition, gen_fair, gen_tree
from .lb import LbStrategy, solve_lb
from .model import (
    FairInstance,
    LbInstance,
    LimitError,
    TreeInstance,
    fair_score,
    lb_warnings,
    max_demand,
    multiplicative_relaxed_satisfied,
    satisfied_lb_platforms,
    validate_fair_instance,
    validate_lb_instance,
    validate_tree_instance,
)
from .oracle import OracleLimits, exact_fair, exact_lb
from .tree import DEFAULT_CELL_LIMIT, solve_tree

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_LIMIT = 3

CSV_HEADER = "degree,seed,strategy,value,opt_or_bound,is_bound,ratio,millis"

_STRATEGY_NAMES = {"base": "base", "min-degree": "min_degree", "augment": "augmenting"}

PRESETS = {
    # full-scale synthetic shape: 250 platforms, 10k items, 20 groups of 500
    "p5-lb": dict(problem="lb", items=10_000, platforms=250, max_degree=40, groups=20, group_lb=2),
    # fairness shape: 100 platforms, 2k items, 20 groups, lb 10, windows 1/40..1/10
    "p5-fair": dict(problem="fair", items=2000, platforms=100, max_degree=40, groups=20,
                    lb=10, ub=25, alpha="1/40", beta="1/10"),
    # analogue of a course-allocation shape; not a real dataset
    "real-like": dict(problem="lb", items=3000, platforms=100, max_degree=6, groups=5,
                      group_lb=0, lb=5),
}


def _build_id() -> str:
    here = Path(__file__).resolve().parent
    try:
        out = subprocess.run(
            ["git", "describe", "--always", "--dirty"],
            cwd=here, capture_output=True, text=True, timeout=5,
        )
        if out.returncode == 0 and out.stdout.strip():
            return out.stdout.strip()
    except OSError:
        pass
    return f"diverse-match-{__version__}"


def _parse_limits(spec: str | None) -> dict[str, int]:
    out: dict[str, int] = {}
    if not spec:
        return out
    for part in spec.split(","):
        key, _, value = part.partition("=")
        if not value:
            raise ValueError(f"bad --limits entry {part!r}, expected key=N")
        out[key.strip()] = int(value)
    return out


def _oracle_limits(limits: dict[str, int]) -> OracleLimits:
    return OracleLimits(
        max_items=limits.get("max-items", OracleLimits.max_items),
        max_candidates=limits.get("max-candidates", OracleLimits.max_candidates),
        max_tree_nodes=limits.get("max-tree-nodes", OracleLimits.max_tree_nodes),
    )


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def _validate(inst) -> list[str]:
    if isinstance(inst, LbInstance):
        return validate_lb_instance(inst)
    if isinstance(inst, FairInstance):
        return validate_fair_instance(inst)
    return validate_tree_instance(inst)


def cmd_solve(args) -> int:
    try:
        inst = jsonio.load_instance(args.input)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: cannot read {args.input}: {e}", file=sys.stderr)
        return EXIT_INVALID
    except jsonio.SchemaError as e:
        print(f"error: schema violation in {args.input}: {e}", file=sys.stderr)
        return EXIT_INVALID

    kind = jsonio.instance_kind(inst)
    if args.problem and args.problem != kind:
        print(f"error: file holds a {kind!r} instance, not {args.problem!r}", file=sys.stderr)
        return EXIT_INVALID
    violations = _validate(inst)
    if violations:
        for v in violations:
            print(f"invalid instance: {v}", file=sys.stderr)
        return EXIT_INVALID

    limits = _parse_limits(args.limits)
    t0 = time.perf_counter()
    summary: dict[str, object]
    try:
        if kind == "lb":
            for w in lb_warnings(inst):
                print(f"warning: {w}", file=sys.stderr)
            strategy = LbStrategy(_STRATEGY_NAMES[args.strategy], args.seed)
            a, satisfied = solve_lb(inst, strategy=strategy)
            millis = (time.perf_counter() - t0) * 1000
            if args.out:
                jsonio.save_lb_solution(args.out, a, satisfied)
            summary = {
                "problem": "lb",
                "satisfied": len(satisfied),
                "matched": a.matched_count,
                "strategy": args.strategy,
            }
        elif kind == "fair":
            a, score, blocks = solve_fair(inst)
            millis = (time.perf_counter() - t0) * 1000
            sat_strict, matched_strict = fair_score(inst, a, "strict")
            sat_relaxed, matched_relaxed = fair_score(inst, a, "relaxed")
            sat_mult, matched_mult = multiplicative_relaxed_satisfied(inst, a)
            if args.out:
                jsonio.save_fair_solution(
                    args.out,
                    a,
                    {
                        "satisfied_strict": sorted(sat_strict),
                        "satisfied_relaxed": sorted(sat_relaxed),
                        "satisfied_relaxed_mult": sorted(sat_mult),
                        "matched_strict": matched_strict,
                        "matched_relaxed": matched_relaxed,
                        "blocks": list(blocks),
                    },
                )
            summary = {
                "problem": "fair",
                "satisfied_strict": len(sat_strict),
                "satisfied_relaxed": len(sat_relaxed),
                "satisfied_relaxed_mult": len(sat_mult),
                "matched_strict": matched_strict,
                "matched_relaxed": matched_relaxed,
            }
        else:
            cell_limit = limits.get("cells", DEFAULT_CELL_LIMIT)
            sol = solve_tree(inst, cell_limit=cell_limit)
            millis = (time.perf_counter() - t0) * 1000
            if args.out:
                jsonio.save_tree_solution(args.out, sol)
            summary = {
                "problem": "tree",
                "reward": sol.total_reward,
                "satisfied": len(sol.satisfied_nodes),
                "items_used": sum(sum(v) for _, v in sol.allocation),
            }
    except LimitError as e:
        print(f"refused: {e}", file=sys.stderr)
        return EXIT_LIMIT

    summary["millis"] = round(millis, 2)
    if args.format == "json":
        print(json.dumps(summary, sort_keys=True))
    elif args.format == "csv":
        keys = sorted(summary)
        print(",".join(keys))
        print(",".join(str(summary[k]) for k in keys))
    else:
        print(" ".join(f"{k}={v}" for k, v in summary.items()))
    return EXIT_OK


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    params = dict(PRESETS.get(args.preset, {})) if args.preset else {}
    problem = args.problem or params.get("problem")
    if problem is None:
        print("error: --problem (or --preset) is required for gen", file=sys.stderr)
        return EXIT_INVALID

    def pick(name, default=None):
        value = getattr(args, name.replace("-", "_"), None)
        if value is not None:
            return value
        return params.get(name.replace("-", "_"), default)

    try:
        if problem == "lb":
            if args.gen == "er":
                inst = gen_er_partition(
                    n_per_group=pick("per-group", 200),
                    groups=pick("groups", 4),
                    rho=pick("rho", 0.05),
                    platform_count=pick("platforms", 100),
                    group_lb=pick("group-lb", 2),
                    seed=args.seed,
                    overall_lb=pick("lb", 0),
                )
            else:
                inst = gen_degree_capped(
                    items=pick("items", 2000),
                    platforms=pick("platforms", 50),
                    max_degree=pick("max-degree", 10),
                    groups=pick("groups", 10),
                    group_lb=pick("group-lb", 2),
                    seed=args.seed,
                    overall_lb=pick("lb", 0),
                )
        elif problem == "fair":
            inst = gen_fair(
                items=pick("items", 2000),
                platforms=pick("platforms", 100),
                max_degree=pick("max-degree", 40),
                groups=pick("groups", 20),
                lb=pick("lb", 10),
                ub=pick("ub", 25),
                alpha=Fraction(pick("alpha", "1/40")),
                beta=Fraction(pick("beta", "1/10")),
                seed=args.seed,
            )
        elif problem == "tree":
            inst = gen_tree(
                nodes=pick("nodes", 10),
                group_count=pick("k", 2),
                seed=args.seed,
                budget_cap=pick("budget-cap", 12),
            )
        else:
            print(f"error: unknown problem {problem!r}", file=sys.stderr)
            return EXIT_INVALID
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID

    jsonio.save_instance(args.out, inst)
    print(f"problem={problem} seed={args.seed} out={args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------


def _parse_degrees(spec: str) -> list[int]:
    if ":" in spec:
        parts = [int(x) for x in spec.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(lo, hi + 1, step))
    return [int(x) for x in spec.split(",")]


def _lb_upper_bound(inst: LbInstance) -> int:
    demands = [p.demand for p in inst.platforms]
    m = len(demands)
    if not demands:
        return 0
    dmin = min(demands)
    if dmin == 0:
        return m
    return min(m, inst.item_count // dmin)


def _sweep_row(problem, degree, seed, strategy, args, oracle_limits, timing):
    def build():
        if problem == "lb":
            return gen_degree_capped(
                args.items, args.platforms, degree, args.groups, args.group_lb, seed
            )
        return gen_fair(
            args.items, args.platforms, degree, args.groups,
            args.lb, args.ub, Fraction(args.alpha), Fraction(args.beta), seed,
        )

    inst = build()

    def run():
        if problem == "lb":
            _, sat = solve_lb(inst, strategy=LbStrategy(_STRATEGY_NAMES[strategy], seed))
            return len(sat)
        if strategy == "naive":
            _, score = solve_fair_naive(inst)
            return score
        _, score, _ = solve_fair(inst)
        return score

    if timing:
        samples = []
        for _ in range(3):
            t0 = time.perf_counter()
            value = run()
            samples.append((time.perf_counter() - t0) * 1000)
        millis = int(sorted(samples)[1])
    else:
        value = run()
        millis = -1

    is_bound = 1
    if problem == "lb":
        opt_or_bound = _lb_upper_bound(inst)
        if inst.item_count <= oracle_limits.max_items:
            try:
                opt_or_bound, _ = exact_lb(inst, oracle_limits)
                is_bound = 0
            except LimitError:
                pass
    else:
        opt_or_bound = min(inst.item_count, sum(p.ub for p in inst.platforms))
        if inst.item_count <= oracle_limits.max_items:
            try:
                opt_or_bound, _ = exact_fair(inst, oracle_limits)
                is_bound = 0
            except LimitError:
                pass
    ratio = value / opt_or_bound if opt_or_bound else 1.0
    return (degree, seed, strategy, value, opt_or_bound, is_bound, f"{ratio:.6f}", millis)


def cmd_sweep(args) -> int:
    problem = args.problem or "lb"
    if problem not in ("lb", "fair"):
        print("error: sweep supports --problem lb or fair", file=sys.stderr)
        return EXIT_INVALID
    degrees = _parse_degrees(args.degrees)
    seeds = list(range(args.seeds))
    default = "base,min-degree,augment" if problem == "lb" else "block,naive"
    allowed = set(_STRATEGY_NAMES) if problem == "lb" else {"block", "naive"}
    strategies = [s.strip() for s in (args.strategies or default).split(",")]
    bad = [s for s in strategies if s not in allowed]
    if bad:
        print(f"error: unknown strategies {bad}", file=sys.stderr)
        return EXIT_INVALID

    oracle_limits = _oracle_limits(_parse_limits(args.limits))
    tasks = [(d, s, st) for d in degrees for s in seeds for st in strategies]
    threads = max(1, int(os.environ.get("DM_THREADS", "1")))
    rows = []
    failures = []

    def work(task):
        d, s, st = task
        try:
            return _sweep_row(problem, d, s, st, args, oracle_limits, args.timing)
        except Exception as e:  # partial failures become rows, the run continues
            failures.append((d, s, st, str(e)))
            return None

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = [r for r in pool.map(work, tasks) if r is not None]
    else:
        rows = [r for r in map(work, tasks) if r is not None]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))

    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# build={_build_id()}\n")
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(",".join(str(x) for x in r) + "\n")
    for d, s, st, msg in failures:
        print(f"row failed: degree={d} seed={s} strategy={st}: {msg}", file=sys.stderr)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        results = acceptance.run_suite(args.suite)
    except KeyError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return EXIT_INVALID
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else 1


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="diverse-match")
    sub = ap.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve one instance file")
    solve.add_argument("--problem", choices=["lb", "fair", "tree"])
    solve.add_argument("--input", required=True)
    solve.add_argument("--out")
    solve.add_argument("--strategy", choices=list(_STRATEGY_NAMES), default="base")
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--format", choices=["json", "csv", "plain"], default="plain")
    solve.add_argument("--limits", help="comma-separated key=N, e.g. cells=100000000")
    solve.set_defaults(fn=cmd_solve)

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("--problem", choices=["lb", "fair", "tree"])
    gen.add_argument("--preset", choices=list(PRESETS))
    gen.add_argument("--gen", choices=["degree", "er"], default="degree")
    gen.add_argument("--out", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--items", type=int)
    gen.add_argument("--platforms", type=int)
    gen.add_argument("--max-degree", type=int)
    gen.add_argument("--groups", type=int)
    gen.add_argument("--group-lb", type=int)
    gen.add_argument("--lb", type=int)
    gen.add_argument("--ub", type=int)
    gen.add_argument("--alpha")
    gen.add_argument("--beta")
    gen.add_argument("--rho", type=float)
    gen.add_argument("--per-group", type=int)
    gen.add_argument("--nodes", type=int)
    gen.add_argument("--k", type=int)
    gen.add_argument("--budget-cap", type=int)
    gen.set_defaults(fn=cmd_gen)

    sweep = sub.add_parser("sweep", help="degree sweep to CSV")
    sweep.add_argument("--problem", choices=["lb", "fair"], default="lb")
    sweep.add_argument("--degrees", default="1:125:5", help="lo:hi[:step] or comma list")
    sweep.add_argument("--seeds", type=int, default=15, help="seeds 0..N-1 per degree")
    sweep.add_argument("--strategies",
                       help="comma list; default base,min-degree,augment (lb) or block,naive (fair)")
    sweep.add_argument("--items", type=int, default=2000)
    sweep.add_argument("--platforms", type=int, default=50)
    sweep.add_argument("--groups", type=int, default=20)
    sweep.add_argument("--group-lb", type=int, default=2)
    sweep.add_argument("--lb", type=int, default=10)
    sweep.add_argument("--ub", type=int, default=25)
    sweep.add_argument("--alpha", default="1/40")
    sweep.add_argument("--beta", default="1/10")
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--timing", action="store_true",
                       help="record median-of-3 solve times (breaks byte-for-byte rerun equality)")
    sweep.add_argument("--limits", help="comma-separated key=N oracle limits")
    sweep.set_defaults(fn=cmd_sweep)

    verify = sub.add_parser("verify", help="run an acceptance suite")
    verify.add_argument("suite", help=f"one of {', '.join(acceptance.SUITES)} or 'all'")
    verify.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
