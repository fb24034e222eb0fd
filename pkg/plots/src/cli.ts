#!/usr/bin/env node
/**
 * plan-plots: render benchmark results into a figure.
 *
 * Usage:
 *   plan-plots --in results.json --out fig.png [--log-time]
 *
 * The output format follows the extension: .svg is written directly,
 * .png is rasterized from the same SVG.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { parseResults, SchemaError } from "./results.js";
import { renderFigure } from "./render.js";

interface Args {
  input: string;
  output: string;
  logTime: boolean;
}

function usage(): string {
  return "usage: plan-plots --in results.json --out fig.png|fig.svg [--log-time]";
}

export function parseArgs(argv: string[]): Args {
  let input: string | undefined;
  let output: string | undefined;
  let logTime = false;
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "--in") input = argv[++i];
    else if (arg === "--out") output = argv[++i];
    else if (arg === "--log-time") logTime = true;
    else if (arg === "--help" || arg === "-h") {
      console.log(usage());
      process.exit(0);
    } else {
      throw new Error(`unknown argument ${arg}\n${usage()}`);
    }
  }
  if (!input || !output) throw new Error(usage());
  return { input, output, logTime };
}

async function writeFigure(svg: string, path: string): Promise<void> {
  if (path.endsWith(".svg")) {
    writeFileSync(path, svg);
    return;
  }
  if (path.endsWith(".png")) {
    const { Resvg } = await import("@resvg/resvg-js");
    const png = new Resvg(svg, { background: "white" }).render().asPng();
    writeFileSync(path, png);
    return;
  }
  throw new Error(`unsupported output extension on ${path}; use .png or .svg`);
}

export async function main(argv = process.argv.slice(2)): Promise<number> {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error((err as Error).message);
    return 2;
  }
  try {
    const text = readFileSync(args.input, "utf-8");
    const results = parseResults(text, args.input);
    const svg = renderFigure(results, { logTime: args.logTime });
    await writeFigure(svg, args.output);
    console.log(
      `wrote ${args.output} (${results.records.length} records, ` +
        `${new Set(results.records.map((r) => r.planner)).size} planners)`,
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError) {
      console.error(err.message);
    } else {
      console.error(`plan-plots: ${(err as Error).message}`);
    }
    return 1;
  }
}

const invokedDirectly =
  process.argv[1] && import.meta.url.endsWith(process.argv[1].split("/").pop()!);
if (invokedDirectly) {
  main().then((code) => {
    process.exitCode = code;
  });
}
