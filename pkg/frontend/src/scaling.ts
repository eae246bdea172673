/**
 * Log-log figure of measured RIP constants per prime with the conjectured
 * bound curve overlaid.
 *
 * Rendering only: every plotted value is taken from the CSV columns
 * (delta_lower, conjecture_bound) as-is; nothing is recomputed.  Rows whose
 * value is zero (K = 1) cannot sit on a log axis and are skipped.
 */

import { EmptyInput, num, parseCsv, requireColumns, Table } from "./csv.js";
import { drawAxes, HEIGHT, logScale, MARGIN, PALETTE, Svg, WIDTH } from "./svg.js";

export const SCALING_COLUMNS = ["p", "K", "mode", "delta_lower", "delta_upper", "conjecture_bound", "ratio"];

interface SeriesPoint {
  K: number;
  delta: number;
  bound: number;
  exact: boolean;
}

export function scalingSeries(table: Table): Map<number, SeriesPoint[]> {
  const series = new Map<number, SeriesPoint[]>();
  for (const row of table.rows) {
    const delta = num(row, "delta_lower");
    const bound = num(row, "conjecture_bound");
    if (delta <= 0 || bound <= 0) {
      continue; // K = 1 rows are identically zero
    }
    const p = num(row, "p");
    const pt = { K: num(row, "K"), delta, bound, exact: row["mode"] === "exact" };
    if (!series.has(p)) {
      series.set(p, []);
    }
    series.get(p)!.push(pt);
  }
  if (series.size === 0) {
    throw new EmptyInput("scaling data has no plottable rows");
  }
  for (const pts of series.values()) {
    pts.sort((a, b) => a.K - b.K);
  }
  return series;
}

export function plotScaling(csvText: string): string {
  const table = parseCsv(csvText);
  requireColumns(table, SCALING_COLUMNS, "scaling");
  const series = scalingSeries(table);

  let vals: number[] = [];
  let ks: number[] = [];
  for (const pts of series.values()) {
    for (const pt of pts) {
      vals.push(pt.delta, pt.bound);
      ks.push(pt.K);
    }
  }
  const xs = logScale(Math.min(...ks), Math.max(...ks), MARGIN.left, WIDTH - MARGIN.right);
  xs.ticks = [...new Set(ks)].sort((a, b) => a - b);
  const ys = logScale(Math.min(...vals), Math.max(...vals), HEIGHT - MARGIN.bottom, MARGIN.top);

  const svg = new Svg("RIP constant vs sparsity (log-log)");
  drawAxes(svg, xs, ys, "K", "delta_K", (t) => String(t));

  const primes = [...series.keys()].sort((a, b) => a - b);
  primes.forEach((p, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = series.get(p)!;
    svg.polyline(pts.map((pt) => [xs(pt.K), ys(pt.bound)] as [number, number]), color, "4 3");
    svg.polyline(pts.map((pt) => [xs(pt.K), ys(pt.delta)] as [number, number]), color);
    for (const pt of pts) {
      svg.circle(xs(pt.K), ys(pt.delta), color, pt.exact);
    }
    const lx = WIDTH - MARGIN.right - 120;
    const ly = MARGIN.top + 16 * i + 8;
    svg.line(lx, ly - 4, lx + 18, ly - 4, color, 2);
    svg.text(lx + 24, ly, `p = ${p}`, "start");
  });
  svg.text(WIDTH - MARGIN.right - 120 + 24, MARGIN.top + 16 * primes.length + 8,
    "dashed: conjectured bound", "start", 10);
  return svg.render();
}
