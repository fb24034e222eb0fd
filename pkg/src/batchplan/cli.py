"""Command-line benchmark driver: `plan bench ...`."""

from __future__ import annotations

import argparse
import json
import math
import sys

from .bench import (
    SuiteDefinition,
    cost_over_time,
    materialize_problems,
    run_suite,
    success_curve,
)
from .records import RunRecord


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plan", description="Anytime sampling-based planning benchmarks"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run a benchmark suite and write results")
    bench.add_argument(
        "--problem", required=True,
        help="wall_gap | random_rects | file:<path to problem JSON>",
    )
    bench.add_argument("--dim", type=int, default=2, help="state space dimension")
    bench.add_argument(
        "--planner", required=True,
        help="comma-separated planner names: abit,rrtconnect,rrtstar",
    )
    bench.add_argument("--runs", type=int, default=100, help="runs per planner per problem")
    bench.add_argument("--time", type=float, default=1.0, help="per-run budget in seconds")
    bench.add_argument("--seed", type=int, default=0, help="base seed; run k uses seed+k")
    bench.add_argument("--out", required=True, help="results JSON path")
    bench.add_argument("--csv", help="also export one-row-per-event CSV")
    bench.add_argument("--instances", type=int, default=10,
                       help="random problem instances (random_rects only)")
    bench.add_argument("--pruning", choices=["on", "off"], default="off")
    bench.add_argument("--workers", type=int, default=1,
                       help="parallel trial processes (1 = serial, best timing fidelity)")
    bench.add_argument("--planner-config",
                       help="JSON file with planner configuration overrides")
    bench.add_argument("--quiet", action="store_true")
    return parser


def _summarize(results: dict) -> str:
    records = [RunRecord.from_json(r) for r in results["records"]]
    budget = results["suite"]["time_budget"]
    lines = []
    keys = sorted({(r.problem, r.planner) for r in records})
    for problem, planner in keys:
        group = [r for r in records if r.problem == problem and r.planner == planner]
        rate = success_curve(group, [budget])[0][1]
        _, med_final, lo, hi = cost_over_time(group, [budget])[0]
        firsts = sorted(r.first_solution_time for r in group)
        med_first = firsts[(len(firsts) - 1) // 2]
        med_str = f"{med_final:.4f}" if math.isfinite(med_final) else "inf"
        first_str = f"{med_first * 1e3:.1f} ms" if math.isfinite(med_first) else "never"
        lines.append(
            f"  {problem:24s} {planner:12s} success {rate:6.1%}  "
            f"median cost {med_str}  median first solution {first_str}"
        )
    return "\n".join(lines)


def cmd_bench(args) -> int:
    overrides = {}
    if args.planner_config:
        with open(args.planner_config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
    suite = SuiteDefinition(
        problem=args.problem,
        dims=[args.dim],
        planners=[p.strip() for p in args.planner.split(",") if p.strip()],
        runs=args.runs,
        time_budget=args.time,
        base_seed=args.seed,
        instances=args.instances,
        pruning=args.pruning == "on",
        planner_overrides=overrides,
        workers=args.workers,
    )
    problems = materialize_problems(suite)
    total = len(problems) * len(suite.planners) * suite.runs
    if not args.quiet:
        print(f"running {total} trials ({len(problems)} problems x "
              f"{len(suite.planners)} planners x {suite.runs} runs, "
              f"{suite.time_budget:g}s each)")

    def progress(done, n, record):
        if not args.quiet and (done % max(1, n // 20) == 0 or done == n):
            print(f"  {done}/{n} trials", file=sys.stderr)

    results = run_suite(suite, out_path=args.out, csv_path=args.csv, progress=progress)
    if not args.quiet:
        print(f"wrote {args.out}" + (f" and {args.csv}" if args.csv else ""))
        print(_summarize(results))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "bench":
        return cmd_bench(args)
    return 2


if __name__ == "__main__":
    sys.exit(main())
