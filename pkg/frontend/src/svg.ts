/**
 * Static SVG renderer for the power-sweep figure: one line per scenario,
 * shaded +/-1 SE band, power on the x-axis, mean secrecy rate (bits) on
 * the y-axis. Output is deterministic for a given input: fixed canvas,
 * fixed palette, fixed number formatting.
 */

import { Aggregate } from "./stats.js";

const WIDTH = 760;
const HEIGHT = 480;
const MARGIN = { top: 40, right: 24, bottom: 56, left: 64 };

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

function fmt(x: number): string {
  // fixed-precision coordinates keep the output byte-stable
  return x.toFixed(2);
}

function niceTicks(lo: number, hi: number, count: number): number[] {
  if (hi <= lo) return [lo];
  const span = hi - lo;
  const step0 = span / Math.max(1, count);
  const mag = Math.pow(10, Math.floor(Math.log10(step0)));
  let step = mag;
  for (const m of [1, 2, 5, 10]) {
    if (m * mag >= step0) {
      step = m * mag;
      break;
    }
  }
  const ticks: number[] = [];
  for (let t = Math.ceil(lo / step) * step; t <= hi + 1e-9; t += step) {
    ticks.push(Math.round(t / step) * step);
  }
  return ticks;
}

function escapeXml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function renderSvg(agg: Aggregate): string {
  const allPoints = agg.curves.flatMap((c) => c.points);
  const xs = allPoints.map((p) => p.power);
  const los = allPoints.map((p) => p.mean - p.se);
  const his = allPoints.map((p) => p.mean + p.se);
  const xMin = Math.min(...xs);
  const xMax = Math.max(...xs);
  let yMin = Math.min(0, ...los);
  let yMax = Math.max(...his);
  if (yMax <= yMin) yMax = yMin + 1;
  const pad = 0.05 * (yMax - yMin);
  yMax += pad;

  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const sx = (x: number) =>
    xMax > xMin
      ? MARGIN.left + ((x - xMin) / (xMax - xMin)) * plotW
      : MARGIN.left + plotW / 2;
  const sy = (y: number) => MARGIN.top + (1 - (y - yMin) / (yMax - yMin)) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);

  // grid + axes ticks
  for (const t of niceTicks(yMin, yMax, 8)) {
    const y = sy(t);
    parts.push(
      `<line x1="${fmt(MARGIN.left)}" y1="${fmt(y)}" x2="${fmt(WIDTH - MARGIN.right)}" y2="${fmt(y)}" stroke="#dddddd" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(MARGIN.left - 8)}" y="${fmt(y + 4)}" text-anchor="end" font-size="12">${t}</text>`,
    );
  }
  for (const t of niceTicks(xMin, xMax, 8)) {
    const x = sx(t);
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(HEIGHT - MARGIN.bottom)}" x2="${fmt(x)}" y2="${fmt(HEIGHT - MARGIN.bottom + 5)}" stroke="#333333" stroke-width="1"/>`,
    );
    parts.push(
      `<text x="${fmt(x)}" y="${fmt(HEIGHT - MARGIN.bottom + 20)}" text-anchor="middle" font-size="12">${t}</text>`,
    );
  }
  parts.push(
    `<line x1="${fmt(MARGIN.left)}" y1="${fmt(HEIGHT - MARGIN.bottom)}" x2="${fmt(WIDTH - MARGIN.right)}" y2="${fmt(HEIGHT - MARGIN.bottom)}" stroke="#333333" stroke-width="1.5"/>`,
  );
  parts.push(
    `<line x1="${fmt(MARGIN.left)}" y1="${fmt(MARGIN.top)}" x2="${fmt(MARGIN.left)}" y2="${fmt(HEIGHT - MARGIN.bottom)}" stroke="#333333" stroke-width="1.5"/>`,
  );

  // bands first, then lines on top
  agg.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const banded = curve.points.filter((p) => p.se > 0);
    if (banded.length >= 2) {
      const upper = curve.points.map((p) => `${fmt(sx(p.power))},${fmt(sy(p.mean + p.se))}`);
      const lower = [...curve.points]
        .reverse()
        .map((p) => `${fmt(sx(p.power))},${fmt(sy(p.mean - p.se))}`);
      parts.push(
        `<polygon points="${upper.concat(lower).join(" ")}" fill="${color}" opacity="0.15"/>`,
      );
    }
  });
  agg.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    if (curve.points.length >= 2) {
      const pts = curve.points.map((p) => `${fmt(sx(p.power))},${fmt(sy(p.mean))}`);
      parts.push(
        `<polyline points="${pts.join(" ")}" fill="none" stroke="${color}" stroke-width="2"/>`,
      );
    }
    for (const p of curve.points) {
      parts.push(
        `<circle cx="${fmt(sx(p.power))}" cy="${fmt(sy(p.mean))}" r="3.5" fill="${color}"/>`,
      );
    }
  });

  // legend
  agg.curves.forEach((curve, i) => {
    const color = PALETTE[i % PALETTE.length];
    const y = MARGIN.top + 8 + 18 * i;
    const x = MARGIN.left + 16;
    parts.push(
      `<line x1="${fmt(x)}" y1="${fmt(y)}" x2="${fmt(x + 26)}" y2="${fmt(y)}" stroke="${color}" stroke-width="2"/>`,
    );
    parts.push(
      `<text x="${fmt(x + 32)}" y="${fmt(y + 4)}" font-size="12">${escapeXml(curve.scenario)}</text>`,
    );
  });

  // labels and the exclusion annotation
  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="${fmt(HEIGHT - 14)}" text-anchor="middle" font-size="14">Power budget P</text>`,
  );
  parts.push(
    `<text x="18" y="${fmt(MARGIN.top + plotH / 2)}" text-anchor="middle" font-size="14" transform="rotate(-90 18 ${fmt(MARGIN.top + plotH / 2)})">Mean secrecy rate (bits)</text>`,
  );
  parts.push(
    `<text x="${fmt(MARGIN.left + plotW / 2)}" y="24" text-anchor="middle" font-size="15">Secrecy rate vs. power budget (mean ± 1 SE)</text>`,
  );
  parts.push(
    `<text x="${fmt(WIDTH - MARGIN.right)}" y="${fmt(HEIGHT - 14)}" text-anchor="end" font-size="11" fill="#666666">infeasible trials excluded: ${agg.excluded}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}
