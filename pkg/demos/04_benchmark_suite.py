"""A small benchmark: three planners on the wall gap, with statistics.

Equivalent CLI invocation:

  plan bench --problem wall_gap --dim 2 --planner abit,rrtconnect,rrtstar \
             --runs 10 --time 0.5 --seed 0 --out demos/out/results.json \
             --csv demos/out/results.csv

The results file feeds the figure tool in plots/ (`plan-plots`).

Run:  python demos/04_benchmark_suite.py
"""

import math
import os

from batchplan import (
    RunRecord,
    SuiteDefinition,
    cost_over_time,
    default_time_grid,
    run_suite,
    success_curve,
)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

suite = SuiteDefinition(
    problem="wall_gap",
    dims=[2],
    planners=["abit", "rrtconnect", "rrtstar"],
    runs=10,
    time_budget=0.5,
    base_seed=0,
)
print("running", len(suite.planners) * suite.runs, "trials of", suite.time_budget, "s ...")
results = run_suite(
    suite,
    out_path=os.path.join(OUT, "results.json"),
    csv_path=os.path.join(OUT, "results.csv"),
)
records = [RunRecord.from_json(r) for r in results["records"]]
grid = default_time_grid(suite.time_budget)

print(f"\n{'planner':12s} {'success':>8s} {'median cost':>12s} {'99% ci':>20s} {'first sol':>10s}")
for planner in suite.planners:
    group = [r for r in records if r.planner == planner]
    rate = success_curve(group, [suite.time_budget])[0][1]
    _, med, lo, hi = cost_over_time(group, [suite.time_budget])[0]
    firsts = sorted(r.first_solution_time for r in group)
    first = firsts[(len(firsts) - 1) // 2]
    ci = f"[{lo:.3f}, {hi:.3f}]" if math.isfinite(med) else "[-, -]"
    med_s = f"{med:.4f}" if math.isfinite(med) else "inf"
    first_s = f"{first*1e3:.0f} ms" if math.isfinite(first) else "never"
    print(f"{planner:12s} {rate:8.0%} {med_s:>12s} {ci:>20s} {first_s:>10s}")

print("\nwrote", os.path.join(OUT, "results.json"))
print("render it with:  plan-plots --in demos/out/results.json --out demos/out/fig.svg --log-time")
