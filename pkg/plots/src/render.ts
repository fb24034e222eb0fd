/**
 * SVG figure builder: per problem, a success-rate panel and a cost panel.
 *
 * Cost panels show the median best-cost-so-far per planner with a shaded
 * nonparametric confidence band, plus a square at the median initial
 * solution (cost vs. time) with confidence error bars on both axes.
 * Stretches where the median is infinite are simply absent from the
 * line. Rendering is a pure function of the parsed results.
 */

import {
  ResultsFile,
  RunRecord,
  firstSolutionCost,
  firstSolutionTime,
} from "./results.js";
import {
  costOverTime,
  defaultTimeGrid,
  medianCi,
  successCurve,
} from "./stats.js";

export interface FigureOptions {
  logTime?: boolean;
  level?: number;
  panelWidth?: number;
  panelHeight?: number;
}

const PALETTE = [
  "#1f77b4",
  "#d62728",
  "#2ca02c",
  "#9467bd",
  "#ff7f0e",
  "#8c564b",
  "#17becf",
  "#7f7f7f",
];

const MARGIN = { left: 62, right: 14, top: 30, bottom: 46 };

function fmtTime(t: number): string {
  if (t < 0.0995) return `${(t * 1e3).toPrecision(3).replace(/\.?0+$/, "")}ms`;
  return `${t.toPrecision(3).replace(/\.?0+$/, "")}s`;
}

function fmtCost(c: number): string {
  return c.toPrecision(4).replace(/\.?0+$/, "");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

class Scale {
  constructor(
    readonly lo: number,
    readonly hi: number,
    readonly outLo: number,
    readonly outHi: number,
    readonly log: boolean,
  ) {}

  at(v: number): number {
    const [a, b] = this.log
      ? [Math.log(this.lo), Math.log(this.hi)]
      : [this.lo, this.hi];
    const x = this.log ? Math.log(v) : v;
    const frac = b === a ? 0.5 : (x - a) / (b - a);
    return this.outLo + frac * (this.outHi - this.outLo);
  }

  ticks(count = 5): number[] {
    if (this.log) {
      const out: number[] = [];
      const lo = Math.ceil(Math.log10(this.lo) - 1e-9);
      const hi = Math.floor(Math.log10(this.hi) + 1e-9);
      for (let e = lo; e <= hi; e++) out.push(Math.pow(10, e));
      if (out.length < 2) return [this.lo, this.hi];
      return out;
    }
    const out: number[] = [];
    for (let i = 0; i <= count; i++) {
      out.push(this.lo + ((this.hi - this.lo) * i) / count);
    }
    return out;
  }
}

/** Break a sequence of (x, y) into finite runs; emits one path per run. */
function brokenPath(
  pts: Array<[number, number]>,
  xs: Scale,
  ys: Scale,
  style: string,
): string {
  const segments: string[] = [];
  let current: string[] = [];
  const flush = () => {
    if (current.length >= 2) {
      segments.push(`<path d="M${current.join(" L")}" ${style} fill="none"/>`);
    }
    current = [];
  };
  for (const [x, y] of pts) {
    if (Number.isFinite(y) && Number.isFinite(x)) {
      current.push(`${xs.at(x).toFixed(2)},${ys.at(y).toFixed(2)}`);
    } else {
      flush();
    }
  }
  flush();
  return segments.join("\n");
}

function bandPolygons(
  pts: Array<[number, number, number]>, // (x, lo, hi)
  xs: Scale,
  ys: Scale,
  color: string,
): string {
  const out: string[] = [];
  let run: Array<[number, number, number]> = [];
  const flush = () => {
    if (run.length >= 2) {
      const upper = run.map(([x, , hi]) => `${xs.at(x).toFixed(2)},${ys.at(hi).toFixed(2)}`);
      const lower = run
        .slice()
        .reverse()
        .map(([x, lo]) => `${xs.at(x).toFixed(2)},${ys.at(lo).toFixed(2)}`);
      out.push(
        `<polygon points="${upper.join(" ")} ${lower.join(" ")}" fill="${color}" opacity="0.15" stroke="none"/>`,
      );
    }
    run = [];
  };
  for (const p of pts) {
    if (Number.isFinite(p[1]) && Number.isFinite(p[2])) run.push(p);
    else flush();
  }
  flush();
  return out.join("\n");
}

interface Panel {
  x: number;
  y: number;
  w: number;
  h: number;
  title: string;
  body: string[];
}

function axesSvg(
  panel: Panel,
  xs: Scale,
  ys: Scale,
  xLabel: string,
  yLabel: string,
  yFmt: (v: number) => string,
): string {
  const { x, y, w, h } = panel;
  const inner = `<rect x="${x + MARGIN.left}" y="${y + MARGIN.top}" width="${w - MARGIN.left - MARGIN.right}" height="${h - MARGIN.top - MARGIN.bottom}" fill="none" stroke="#444" stroke-width="1"/>`;
  const parts = [inner];
  for (const t of xs.ticks()) {
    if (t < xs.lo - 1e-12 || t > xs.hi * (1 + 1e-12)) continue;
    const px = xs.at(t);
    parts.push(
      `<line x1="${px.toFixed(2)}" y1="${y + h - MARGIN.bottom}" x2="${px.toFixed(2)}" y2="${y + h - MARGIN.bottom + 4}" stroke="#444"/>`,
      `<text x="${px.toFixed(2)}" y="${y + h - MARGIN.bottom + 16}" font-size="10" text-anchor="middle" fill="#222">${esc(fmtTime(t))}</text>`,
    );
  }
  for (const t of ys.ticks(4)) {
    const py = ys.at(t);
    parts.push(
      `<line x1="${x + MARGIN.left - 4}" y1="${py.toFixed(2)}" x2="${x + MARGIN.left}" y2="${py.toFixed(2)}" stroke="#444"/>`,
      `<text x="${x + MARGIN.left - 7}" y="${(py + 3).toFixed(2)}" font-size="10" text-anchor="end" fill="#222">${esc(yFmt(t))}</text>`,
    );
  }
  parts.push(
    `<text x="${x + w / 2}" y="${y + h - 8}" font-size="11" text-anchor="middle" fill="#222">${esc(xLabel)}</text>`,
    `<text x="${x + 14}" y="${y + (MARGIN.top + h - MARGIN.bottom) / 2}" font-size="11" text-anchor="middle" fill="#222" transform="rotate(-90 ${x + 14} ${y + (MARGIN.top + h - MARGIN.bottom) / 2})">${esc(yLabel)}</text>`,
    `<text x="${x + w / 2}" y="${y + 16}" font-size="12" font-weight="bold" text-anchor="middle" fill="#111">${esc(panel.title)}</text>`,
  );
  return parts.join("\n");
}

export function renderFigure(results: ResultsFile, options: FigureOptions = {}): string {
  const logTime = options.logTime ?? false;
  const level = options.level ?? 0.99;
  const panelW = options.panelWidth ?? 400;
  const panelH = options.panelHeight ?? 280;

  const problems = [...new Set(results.records.map((r) => r.problem))].sort();
  const planners = [...new Set(results.records.map((r) => r.planner))].sort();
  const color = new Map(planners.map((p, i) => [p, PALETTE[i % PALETTE.length]]));

  const budget =
    typeof results.suite.time_budget === "number" && results.suite.time_budget > 0
      ? results.suite.time_budget
      : Math.max(
          1e-3,
          ...results.records.flatMap((r) => r.events.map((e) => e[0])),
        );
  const grid = defaultTimeGrid(budget);

  const rows = problems.length || 1;
  const width = 2 * panelW + 24;
  const legendH = planners.length ? 22 : 0;
  const height = rows * panelH + legendH + 12;
  const parts: string[] = [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" viewBox="0 0 ${width} ${height}">`,
    `<rect width="${width}" height="${height}" fill="white"/>`,
  ];

  // Legend line at the top.
  let lx = 16;
  for (const planner of planners) {
    const c = color.get(planner)!;
    parts.push(
      `<line x1="${lx}" y1="12" x2="${lx + 22}" y2="12" stroke="${c}" stroke-width="2.5"/>`,
      `<text x="${lx + 27}" y="16" font-size="12" fill="#111">${esc(planner)}</text>`,
    );
    lx += 40 + planner.length * 7;
  }

  problems.forEach((problem, row) => {
    const group = results.records.filter((r) => r.problem === problem);
    const rowY = legendH + row * panelH;
    const success: Panel = {
      x: 0, y: rowY, w: panelW, h: panelH,
      title: `${problem}: success rate`, body: [],
    };
    const cost: Panel = {
      x: panelW + 24, y: rowY, w: panelW, h: panelH,
      title: `${problem}: solution cost`, body: [],
    };
    const xScale = new Scale(
      grid[0], budget,
      success.x + MARGIN.left, success.x + panelW - MARGIN.right, logTime,
    );
    const xScaleCost = new Scale(
      grid[0], budget,
      cost.x + MARGIN.left, cost.x + panelW - MARGIN.right, logTime,
    );

    // Collect finite cost extents across planners for the y scale.
    const perPlanner = planners.map((planner) => {
      const recs = group.filter((r) => r.planner === planner);
      if (!recs.length) return null;
      const curve = costOverTime(recs, grid, level);
      const firstTimes = recs.map(firstSolutionTime);
      const firstCosts = recs.map(firstSolutionCost);
      return {
        planner,
        recs,
        curve,
        successPts: successCurve(recs, grid),
        firstTime: medianCi(firstTimes, level),
        firstCost: medianCi(firstCosts, level),
      };
    });
    const finiteCosts: number[] = [];
    for (const p of perPlanner) {
      if (!p) continue;
      for (const pt of p.curve) {
        for (const v of [pt.median, pt.lower, pt.upper]) {
          if (Number.isFinite(v)) finiteCosts.push(v);
        }
      }
    }
    const costLo = finiteCosts.length ? Math.min(...finiteCosts) : 0;
    const costHi = finiteCosts.length ? Math.max(...finiteCosts) : 1;
    const pad = (costHi - costLo) * 0.06 || 0.5;
    const ySuccess = new Scale(0, 1, rowY + panelH - MARGIN.bottom, rowY + MARGIN.top, false);
    const yCost = new Scale(
      costLo - pad, costHi + pad,
      rowY + panelH - MARGIN.bottom, rowY + MARGIN.top, false,
    );

    success.body.push(
      axesSvg(success, xScale, ySuccess, "time", "fraction solved", (v) => v.toFixed(2)),
    );
    cost.body.push(axesSvg(cost, xScaleCost, yCost, "time", "path cost", fmtCost));

    for (const p of perPlanner) {
      if (!p) continue;
      const c = color.get(p.planner)!;
      success.body.push(
        brokenPath(
          p.successPts.map((s) => [s.t, s.fraction] as [number, number]),
          xScale, ySuccess, `stroke="${c}" stroke-width="2"`,
        ),
      );
      cost.body.push(
        bandPolygons(
          p.curve.map((pt) => [pt.t, pt.lower, pt.upper] as [number, number, number]),
          xScaleCost, yCost, c,
        ),
        brokenPath(
          p.curve.map((pt) => [pt.t, pt.median] as [number, number]),
          xScaleCost, yCost, `stroke="${c}" stroke-width="2"`,
        ),
      );
      // Median initial solution: square marker with CI bars on both axes.
      const ft = p.firstTime;
      const fc = p.firstCost;
      if (Number.isFinite(ft.median) && Number.isFinite(fc.median)) {
        const mx = xScaleCost.at(ft.median);
        const my = yCost.at(fc.median);
        const x1 = xScaleCost.at(Math.max(ft.lower, grid[0]));
        const x2 = xScaleCost.at(Math.min(ft.upper, budget));
        cost.body.push(
          `<line x1="${x1.toFixed(2)}" y1="${my.toFixed(2)}" x2="${x2.toFixed(2)}" y2="${my.toFixed(2)}" stroke="${c}" stroke-width="1"/>`,
        );
        if (Number.isFinite(fc.lower) && Number.isFinite(fc.upper)) {
          cost.body.push(
            `<line x1="${mx.toFixed(2)}" y1="${yCost.at(fc.lower).toFixed(2)}" x2="${mx.toFixed(2)}" y2="${yCost.at(fc.upper).toFixed(2)}" stroke="${c}" stroke-width="1"/>`,
          );
        }
        cost.body.push(
          `<rect x="${(mx - 4).toFixed(2)}" y="${(my - 4).toFixed(2)}" width="8" height="8" fill="${c}" stroke="white" stroke-width="0.8"/>`,
        );
      }
    }
    parts.push(...success.body, ...cost.body);
  });

  parts.push("</svg>");
  return parts.join("\n");
}
