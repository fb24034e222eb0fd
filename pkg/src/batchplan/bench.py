"""Benchmark orchestration, nonparametric statistics and result files.

A suite is a grid of (problem, planner, seed) trials. Each trial gets its
own planner instance and seed; unsuccessful runs contribute infinite costs
to the aggregated curves. Result files round-trip losslessly.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .records import RunRecord
from .space import RandomSource
from .world import ProblemDefinition, load_problem, make_random_rectangles, make_wall_gap

PLANNER_NAMES = ("abit", "rrtconnect", "rrtstar")


@dataclass
class SuiteDefinition:
    """What to run: problem family, dimensions, planners, trials, budget."""

    problem: str
    dims: list[int]
    planners: list[str]
    runs: int
    time_budget: float
    base_seed: int = 0
    instances: int = 10
    pruning: bool = False
    rect_count: int = 20
    width_range: tuple[float, float] = (0.15, 0.5)
    planner_overrides: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if not self.time_budget > 0:
            raise ValueError("time budget must be positive")
        for p in self.planners:
            if p not in PLANNER_NAMES:
                raise ValueError(f"unknown planner {p!r}; choose from {PLANNER_NAMES}")

    def to_json(self) -> dict:
        d = asdict(self)
        d["width_range"] = list(self.width_range)
        return d


def materialize_problems(suite: SuiteDefinition) -> list[ProblemDefinition]:
    problems: list[ProblemDefinition] = []
    for dim in suite.dims:
        if suite.problem == "wall_gap":
            problems.append(make_wall_gap(dim))
        elif suite.problem == "random_rects":
            for i in range(suite.instances):
                rng = RandomSource(suite.base_seed * 7919 + i)
                problems.append(
                    make_random_rectangles(
                        dim, suite.rect_count, suite.width_range, rng,
                        name=f"random_rects_{dim}d_i{i}",
                    )
                )
        elif suite.problem.startswith("file:"):
            problems.append(load_problem(suite.problem[5:]))
        else:
            raise ValueError(f"unknown problem spec {suite.problem!r}")
    return problems


def _run_trial(task) -> RunRecord:
    problem, planner_name, seed, budget, pruning, overrides = task
    if planner_name == "abit":
        from .planner import AbitPlanner, PlannerConfig

        cfg = PlannerConfig.from_json({**overrides, "seed": seed, "pruning": pruning})
        return AbitPlanner(problem, cfg).solve(time_budget=budget)
    from .baselines import RrtConfig, rrt_connect, rrt_star

    cfg = RrtConfig(
        seed=seed,
        goal_bias=overrides.get("goal_bias", 0.05),
        max_edge_length=overrides.get("max_edge_length"),
        eta=overrides.get("eta", 1.1),
    )
    fn = rrt_connect if planner_name == "rrtconnect" else rrt_star
    return fn(problem, cfg, time_budget=budget)


def run_suite(
    suite: SuiteDefinition,
    out_path: str | None = None,
    csv_path: str | None = None,
    progress=None,
) -> dict:
    """Execute every trial and return (and optionally write) the results.

    Seeds are base_seed + run index, identical across planners so curves
    are paired. Records are ordered by (problem, planner, seed) no matter
    how trials were scheduled.
    """
    problems = materialize_problems(suite)
    tasks = [
        (problem, planner, suite.base_seed + k, suite.time_budget,
         suite.pruning, suite.planner_overrides)
        for problem in sorted(problems, key=lambda p: p.name)
        for planner in suite.planners
        for k in range(suite.runs)
    ]
    if suite.workers > 1:
        with ProcessPoolExecutor(max_workers=suite.workers) as pool:
            records = list(pool.map(_run_trial, tasks, chunksize=1))
    else:
        records = []
        for i, task in enumerate(tasks):
            records.append(_run_trial(task))
            if progress is not None:
                progress(i + 1, len(tasks), records[-1])
    records.sort(key=lambda r: (r.problem, r.planner, r.seed))
    results = {
        "suite": suite.to_json(),
        "records": [r.to_json() for r in records],
    }
    if out_path:
        write_results(results, out_path)
    if csv_path:
        records_to_csv(records, csv_path)
    return results


def write_results(results: dict, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(results, fh, indent=1)


def read_results(path: str) -> tuple[dict, list[RunRecord]]:
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    return data.get("suite", {}), [RunRecord.from_json(r) for r in data["records"]]


def records_to_csv(records: list[RunRecord], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["planner", "problem", "seed", "t", "cost"])
        for r in records:
            for t, cost in r.events:
                writer.writerow([r.planner, r.problem, r.seed, repr(t), repr(cost)])


# -- statistics -----------------------------------------------------------


def median_ci_indices(n: int, level: float = 0.99) -> tuple[int, int]:
    """1-indexed order statistics (l, u) bracketing the median.

    Chooses the window of minimal width u - l whose coverage
    P(l <= B <= u-1), B ~ Binomial(n, 1/2), is at least `level`; among
    equal widths the one with the largest coverage, then the smallest l.
    When no window reaches the level (tiny n), falls back to (1, n).
    Comparisons are exact (integer binomial tails vs. the binary value of
    `level`), so results are reproducible bit-for-bit.
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if n == 1:
        return 1, 1
    pmf = [math.comb(n, k) for k in range(n + 1)]
    prefix = [0]
    for v in pmf:
        prefix.append(prefix[-1] + v)
    denom = 1 << n
    target = Fraction(level)

    def coverage(lo: int, hi: int) -> Fraction:
        # P(lo <= B <= hi-1) with 1-indexed order statistics.
        return Fraction(prefix[hi] - prefix[lo], denom)

    for width in range(1, n):
        best = None
        for lo in range(1, n - width + 1):
            hi = lo + width
            cov = coverage(lo, hi)
            if cov >= target and (best is None or cov > best[0]):
                best = (cov, lo, hi)
        if best is not None:
            return best[1], best[2]
    return 1, n


def median_ci(samples, level: float = 0.99) -> tuple[float, float, float]:
    """(lower, median, upper) of the nonparametric median CI.

    The median of an even count is the lower of the two central order
    statistics; infinite samples are allowed and sort to the top, so a
    majority of infinities yields an infinite median.
    """
    xs = sorted(samples)
    if not xs:
        raise ValueError("median of an empty sample set")
    med = xs[(len(xs) - 1) // 2]
    lo, hi = median_ci_indices(len(xs), level)
    return xs[lo - 1], med, xs[hi - 1]


def default_time_grid(budget: float, points: int = 200) -> np.ndarray:
    """Log-spaced time axis from 1 ms (or earlier) up to the budget."""
    if not budget > 0:
        raise ValueError("budget must be positive")
    start = min(1e-3, budget / 10.0)
    return np.geomspace(start, budget, points)


def success_curve(records: list[RunRecord], grid) -> list[tuple[float, float]]:
    """Fraction of runs that had found any solution by each grid time."""
    grid = list(grid)
    if grid != sorted(grid):
        raise ValueError("time grid must be sorted")
    firsts = sorted(r.first_solution_time for r in records)
    out = []
    total = len(records)
    j = 0
    for t in grid:
        while j < len(firsts) and firsts[j] <= t:
            j += 1
        out.append((t, j / total if total else 0.0))
    return out


def cost_over_time(
    records: list[RunRecord], grid, level: float = 0.99
) -> list[tuple[float, float, float, float]]:
    """Per grid time: (t, median best-cost-so-far, ci lower, ci upper).

    Each run contributes its best cost achieved by t, infinite if it had
    no solution yet, so medians start at infinity and never increase.
    """
    grid = list(grid)
    if grid != sorted(grid):
        raise ValueError("time grid must be sorted")
    per_run = []
    for r in records:
        vals = []
        j = 0
        best = math.inf
        for t in grid:
            while j < len(r.events) and r.events[j][0] <= t:
                best = r.events[j][1]
                j += 1
            vals.append(best)
        per_run.append(vals)
    out = []
    for i, t in enumerate(grid):
        column = [vals[i] for vals in per_run]
        lo, med, hi = median_ci(column, level)
        out.append((t, med, lo, hi))
    return out
