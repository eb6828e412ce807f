/**
 * Acceptance checks against the real harness output (results/sweep.csv,
 * produced by the Python acceptance suite's power-sweep test). Skipped if
 * the sweep artifact has not been generated yet.
 */

import { existsSync, readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { parseResults } from "../src/csv.js";
import { aggregate } from "../src/stats.js";
import { renderSvg } from "../src/svg.js";

const HERE = dirname(fileURLToPath(import.meta.url));
const SWEEP = join(HERE, "..", "..", "results", "sweep.csv");
const present = existsSync(SWEEP);

describe.skipIf(!present)("harness sweep artifact", () => {
  it("plotted means match an independent recomputation to 1e-12", () => {
    const text = readFileSync(SWEEP, "utf-8");
    const agg = aggregate(parseResults(text));

    // independent recomputation straight off the raw lines
    const sums = new Map<string, { s: number; n: number }>();
    for (const line of text.trim().split("\n").slice(1)) {
      const p = line.split(",");
      if (p[6] !== "true") continue;
      const key = `${p[0]}@${Number(p[1])}`;
      const acc = sums.get(key) ?? { s: 0, n: 0 };
      acc.s += Number(p[3]);
      acc.n += 1;
      sums.set(key, acc);
    }
    let checked = 0;
    for (const curve of agg.curves) {
      for (const pt of curve.points) {
        const acc = sums.get(`${curve.scenario}@${pt.power}`)!;
        expect(acc.n).toBe(pt.n);
        expect(Math.abs(pt.mean - acc.s / acc.n)).toBeLessThanOrEqual(1e-12);
        checked += 1;
      }
    }
    expect(checked).toBeGreaterThan(0);
  });

  it("renders every scenario in the artifact", () => {
    const agg = aggregate(parseResults(readFileSync(SWEEP, "utf-8")));
    const svg = renderSvg(agg);
    for (const curve of agg.curves) {
      expect(svg).toContain(curve.scenario);
    }
    expect(svg).toContain("infeasible trials excluded:");
  });

  it("one-ED curve lies on or above the two-ED curve", () => {
    const agg = aggregate(parseResults(readFileSync(SWEEP, "utf-8")));
    const one = agg.curves.find((c) => c.scenario === "one-ed");
    const two = agg.curves.find((c) => c.scenario === "two-ed");
    expect(one).toBeDefined();
    expect(two).toBeDefined();
    for (const pt of one!.points) {
      const other = two!.points.find((p) => p.power === pt.power);
      expect(other).toBeDefined();
      expect(pt.mean).toBeGreaterThanOrEqual(other!.mean);
    }
  });
});
