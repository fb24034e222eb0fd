/**
 * Benchmark results schema and parsing.
 *
 * The file layout is the one the benchmark harness writes:
 *   { "suite": {...}, "records": [ { "planner", "problem", "seed",
 *     "success", "events": [[t, cost], ...] }, ... ] }
 * Parsing is strict and failures carry enough context to fix the file.
 */

export interface RunRecord {
  planner: string;
  problem: string;
  seed: number;
  success: boolean;
  /** (elapsed seconds, cost) pairs, time-sorted, strictly decreasing cost. */
  events: Array<[number, number]>;
}

export interface SuiteInfo {
  time_budget?: number;
  planners?: string[];
  problem?: string;
  [key: string]: unknown;
}

export interface ResultsFile {
  suite: SuiteInfo;
  records: RunRecord[];
}

export class SchemaError extends Error {}

function fail(where: string, what: string): never {
  throw new SchemaError(`results schema mismatch at ${where}: ${what}`);
}

export function parseResults(text: string, source = "<input>"): ResultsFile {
  let data: unknown;
  try {
    data = JSON.parse(text);
  } catch (err) {
    fail(source, `not valid JSON (${(err as Error).message})`);
  }
  if (typeof data !== "object" || data === null) {
    fail(source, "top level must be an object");
  }
  const top = data as Record<string, unknown>;
  if (!Array.isArray(top.records)) {
    fail(source, 'missing "records" array');
  }
  const records: RunRecord[] = [];
  (top.records as unknown[]).forEach((raw, i) => {
    const where = `${source} records[${i}]`;
    if (typeof raw !== "object" || raw === null) fail(where, "not an object");
    const r = raw as Record<string, unknown>;
    if (typeof r.planner !== "string") fail(where, '"planner" must be a string');
    if (typeof r.problem !== "string") fail(where, '"problem" must be a string');
    if (typeof r.seed !== "number") fail(where, '"seed" must be a number');
    if (typeof r.success !== "boolean") fail(where, '"success" must be a boolean');
    if (!Array.isArray(r.events)) fail(where, '"events" must be an array');
    const events: Array<[number, number]> = [];
    (r.events as unknown[]).forEach((e, j) => {
      if (
        !Array.isArray(e) ||
        e.length !== 2 ||
        typeof e[0] !== "number" ||
        typeof e[1] !== "number"
      ) {
        fail(`${where} events[${j}]`, "must be a [time, cost] number pair");
      }
      events.push([e[0], e[1]]);
    });
    if (r.success !== (events.length > 0)) {
      fail(where, '"success" must match whether any events exist');
    }
    records.push({
      planner: r.planner,
      problem: r.problem,
      seed: r.seed,
      success: r.success,
      events,
    });
  });
  const suite =
    typeof top.suite === "object" && top.suite !== null
      ? (top.suite as SuiteInfo)
      : {};
  return { suite, records };
}

export function firstSolutionTime(r: RunRecord): number {
  return r.events.length ? r.events[0][0] : Infinity;
}

export function firstSolutionCost(r: RunRecord): number {
  return r.events.length ? r.events[0][1] : Infinity;
}
