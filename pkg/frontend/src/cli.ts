#!/usr/bin/env node
/**
 * Command line entry point.
 *
 * Usage:
 *   plot --in results.csv --out fig2.svg [--svg]
 *
 * The renderer produces vector output (SVG) only; --svg is accepted as an
 * explicit marker of that. Asking for a different raster extension without
 * --svg is rejected rather than silently writing SVG bytes under a .png name.
 */

import { readFileSync, writeFileSync } from "node:fs";

import { EmptyInput, SchemaError, parseResults } from "./csv.js";
import { aggregate } from "./stats.js";
import { renderSvg } from "./svg.js";

interface Args {
  input: string;
  output: string;
  forceSvg: boolean;
}

export function parseArgs(argv: string[]): Args {
  let input = "";
  let output = "fig2.svg";
  let forceSvg = false;
  const rest = [...argv];
  if (rest[0] === "plot") rest.shift();
  while (rest.length > 0) {
    const flag = rest.shift()!;
    if (flag === "--in") {
      input = rest.shift() ?? "";
    } else if (flag === "--out") {
      output = rest.shift() ?? "";
    } else if (flag === "--svg") {
      forceSvg = true;
    } else {
      throw new Error(`unknown argument: ${flag}`);
    }
  }
  if (!input) throw new Error("missing required --in <results.csv>");
  if (!output) throw new Error("--out requires a path");
  if (!output.endsWith(".svg") && !forceSvg) {
    throw new Error(
      `output is vector SVG; pass --svg or use a .svg path (got ${output})`,
    );
  }
  return { input, output, forceSvg };
}

export function main(argv: string[]): number {
  let args: Args;
  try {
    args = parseArgs(argv);
  } catch (err) {
    console.error(`error: ${(err as Error).message}`);
    return 2;
  }
  try {
    const rows = parseResults(readFileSync(args.input, "utf-8"));
    const agg = aggregate(rows);
    writeFileSync(args.output, renderSvg(agg));
    const nPoints = agg.curves.reduce((a, c) => a + c.points.length, 0);
    console.log(
      `wrote ${args.output}: ${agg.curves.length} curve(s), ${nPoints} point(s), ` +
        `${agg.excluded} infeasible row(s) excluded`,
    );
    return 0;
  } catch (err) {
    if (err instanceof SchemaError || err instanceof EmptyInput) {
      console.error(`${(err as Error).name}: ${(err as Error).message}`);
      return 2;
    }
    console.error(`error: ${(err as Error).message}`);
    return 1;
  }
}

if (process.argv[1] && /cli\.(ts|js)$/.test(process.argv[1])) {
  process.exit(main(process.argv.slice(2)));
}
