/**
 * Nonparametric statistics matching the benchmark harness exactly.
 *
 * The median of an even-sized sample is the lower of the two central
 * order statistics. The confidence interval on the median is the
 * narrowest pair of order statistics (l, u) whose binomial(n, 1/2)
 * coverage P(l <= B <= u-1) reaches the level; ties prefer the largest
 * coverage and then the smallest l; tiny samples fall back to (1, n).
 * All comparisons are exact (BigInt binomial tails against the binary
 * value of the level), so the selected indices are reproducible.
 */

import { RunRecord, firstSolutionTime } from "./results.js";

function ascending(a: number, b: number): number {
  return a < b ? -1 : a > b ? 1 : 0;
}

export function lowerMedian(values: number[]): number {
  if (values.length === 0) throw new Error("median of an empty sample set");
  const xs = [...values].sort(ascending);
  return xs[(xs.length - 1) >> 1];
}

/** Exact dyadic expansion of a float level: level = numer / 2^shifts. */
function levelAsDyadic(level: number): { numer: bigint; shifts: number } {
  if (!(level > 0 && level < 1)) throw new Error(`level must be in (0, 1), got ${level}`);
  let scaled = level;
  let shifts = 0;
  while (!Number.isInteger(scaled)) {
    scaled *= 2; // exact: doubling only bumps the exponent
    shifts += 1;
  }
  return { numer: BigInt(scaled), shifts };
}

export function medianCiIndices(n: number, level = 0.99): [number, number] {
  if (n < 1) throw new Error("need at least one sample");
  if (n === 1) return [1, 1];
  const pmf: bigint[] = [1n];
  for (let k = 1; k <= n; k++) {
    pmf.push((pmf[k - 1] * BigInt(n - k + 1)) / BigInt(k));
  }
  const prefix: bigint[] = [0n];
  for (const v of pmf) prefix.push(prefix[prefix.length - 1] + v);
  const { numer, shifts } = levelAsDyadic(level);
  // coverage(lo, hi) >= level  <=>  tail * 2^shifts >= numer * 2^n
  const rhs = numer << BigInt(n);

  for (let width = 1; width < n; width++) {
    let best: { cov: bigint; lo: number } | null = null;
    for (let lo = 1; lo + width <= n; lo++) {
      const cov = prefix[lo + width] - prefix[lo];
      if ((cov << BigInt(shifts)) >= rhs && (best === null || cov > best.cov)) {
        best = { cov, lo };
      }
    }
    if (best !== null) return [best.lo, best.lo + width];
  }
  return [1, n];
}

export interface MedianCi {
  lower: number;
  median: number;
  upper: number;
}

export function medianCi(values: number[], level = 0.99): MedianCi {
  if (values.length === 0) throw new Error("median of an empty sample set");
  const xs = [...values].sort(ascending);
  const [lo, hi] = medianCiIndices(xs.length, level);
  return { lower: xs[lo - 1], median: xs[(xs.length - 1) >> 1], upper: xs[hi - 1] };
}

/** Log-spaced time axis from 1 ms (or a tenth of the budget) to the budget. */
export function defaultTimeGrid(budget: number, points = 200): number[] {
  if (!(budget > 0)) throw new Error("budget must be positive");
  const start = Math.min(1e-3, budget / 10);
  const out: number[] = [];
  for (let i = 0; i < points; i++) {
    out.push(start * Math.pow(budget / start, i / (points - 1)));
  }
  out[points - 1] = budget;
  return out;
}

export interface CostPoint {
  t: number;
  median: number;
  lower: number;
  upper: number;
}

/** Per grid time: each run's best cost achieved so far (inf before its
 * first solution), reduced to median and confidence bounds. */
export function costOverTime(
  records: RunRecord[],
  grid: number[],
  level = 0.99,
): CostPoint[] {
  const perRun: number[][] = records.map((r) => {
    const vals: number[] = [];
    let j = 0;
    let best = Infinity;
    for (const t of grid) {
      while (j < r.events.length && r.events[j][0] <= t) {
        best = r.events[j][1];
        j += 1;
      }
      vals.push(best);
    }
    return vals;
  });
  return grid.map((t, i) => {
    const column = perRun.map((vals) => vals[i]);
    const { lower, median, upper } = medianCi(column, level);
    return { t, median, lower, upper };
  });
}

export interface SuccessPoint {
  t: number;
  fraction: number;
}

export function successCurve(records: RunRecord[], grid: number[]): SuccessPoint[] {
  const firsts = records.map(firstSolutionTime).sort(ascending);
  const total = records.length;
  let j = 0;
  return grid.map((t) => {
    while (j < firsts.length && firsts[j] <= t) j += 1;
    return { t, fraction: total ? j / total : 0 };
  });
}
