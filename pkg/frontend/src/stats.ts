/**
 * Aggregation of result rows into per-(scenario, power) means with
 * standard errors. Infeasible rows are excluded from the statistics but
 * counted, so the figure can report how many trials were dropped.
 */

import { EmptyInput, ResultRow } from "./csv.js";

export interface CurvePoint {
  power: number;
  n: number;
  mean: number;
  /** standard error of the mean; 0 when n < 2 */
  se: number;
}

export interface Curve {
  scenario: string;
  points: CurvePoint[];
}

export interface Aggregate {
  curves: Curve[];
  excluded: number;
}

export function aggregate(rows: ResultRow[]): Aggregate {
  const groups = new Map<string, Map<number, number[]>>();
  let excluded = 0;
  for (const row of rows) {
    if (!row.feasible) {
      excluded += 1;
      continue;
    }
    let byPower = groups.get(row.scenario);
    if (!byPower) {
      byPower = new Map();
      groups.set(row.scenario, byPower);
    }
    let vals = byPower.get(row.power);
    if (!vals) {
      vals = [];
      byPower.set(row.power, vals);
    }
    vals.push(row.secrecyRate);
  }
  if (groups.size === 0) {
    throw new EmptyInput("no feasible rows in input");
  }
  const curves: Curve[] = [];
  for (const scenario of [...groups.keys()].sort()) {
    const byPower = groups.get(scenario)!;
    const points: CurvePoint[] = [];
    for (const power of [...byPower.keys()].sort((a, b) => a - b)) {
      const vals = byPower.get(power)!;
      const n = vals.length;
      const mean = vals.reduce((a, b) => a + b, 0) / n;
      let se = 0;
      if (n >= 2) {
        const ss = vals.reduce((a, b) => a + (b - mean) * (b - mean), 0);
        se = Math.sqrt(ss / (n - 1)) / Math.sqrt(n);
      }
      points.push({ power, n, mean, se });
    }
    curves.push({ scenario, points });
  }
  return { curves, excluded };
}
