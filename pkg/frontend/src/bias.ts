/**
 * Extractor bias vs min-entropy figure, one series per prime.
 *
 * Bias values are rendered exactly as the CSV provides them.  When a
 * bound_beta column is present, a horizontal reference is drawn at
 * p^(-beta) for each prime -- the one transform the figure spec calls for;
 * no data column is ever recomputed from another.
 */

import { EmptyInput, num, parseCsv, requireColumns, Table } from "./csv.js";
import { drawAxes, HEIGHT, linearScale, MARGIN, PALETTE, Svg, WIDTH } from "./svg.js";

export const BIAS_COLUMNS = ["p", "k", "size", "bias"];

interface BiasPoint {
  k: number;
  bias: number;
}

export function biasSeries(table: Table): {
  series: Map<number, BiasPoint[]>;
  refs: Map<number, number>;
} {
  const hasBeta = table.columns.includes("bound_beta");
  const series = new Map<number, BiasPoint[]>();
  const refs = new Map<number, number>();
  for (const row of table.rows) {
    const p = num(row, "p");
    if (!series.has(p)) {
      series.set(p, []);
    }
    series.get(p)!.push({ k: num(row, "k"), bias: num(row, "bias") });
    if (hasBeta && row["bound_beta"] !== "" && !refs.has(p)) {
      refs.set(p, Math.pow(p, -num(row, "bound_beta")));
    }
  }
  if (series.size === 0) {
    throw new EmptyInput("bias data has no rows");
  }
  for (const pts of series.values()) {
    pts.sort((a, b) => a.k - b.k);
  }
  return { series, refs };
}

export function plotBias(csvText: string): string {
  const table = parseCsv(csvText);
  requireColumns(
    table,
    table.columns.includes("bound_beta") ? [...BIAS_COLUMNS, "bound_beta"] : BIAS_COLUMNS,
    "bias",
  );
  const { series, refs } = biasSeries(table);

  const ks: number[] = [];
  const biases: number[] = [];
  for (const pts of series.values()) {
    for (const pt of pts) {
      ks.push(pt.k);
      biases.push(pt.bias);
    }
  }
  for (const r of refs.values()) {
    biases.push(r);
  }
  const xs = linearScale(Math.min(...ks), Math.max(...ks), MARGIN.left, WIDTH - MARGIN.right);
  const ys = linearScale(0, Math.max(0.5, ...biases), HEIGHT - MARGIN.bottom, MARGIN.top);

  const svg = new Svg("Extractor bias vs min-entropy");
  drawAxes(svg, xs, ys, "min-entropy k (bits)", "bias");

  const primes = [...series.keys()].sort((a, b) => a - b);
  primes.forEach((p, i) => {
    const color = PALETTE[i % PALETTE.length];
    const pts = series.get(p)!;
    if (pts.length > 1) {
      svg.polyline(pts.map((pt) => [xs(pt.k), ys(pt.bias)] as [number, number]), color);
    }
    for (const pt of pts) {
      svg.circle(xs(pt.k), ys(pt.bias), color, true);
    }
    const ref = refs.get(p);
    if (ref !== undefined) {
      svg.line(MARGIN.left, ys(ref), WIDTH - MARGIN.right, ys(ref), color, 1, "6 4");
    }
    const lx = WIDTH - MARGIN.right - 120;
    const ly = MARGIN.top + 16 * i + 8;
    svg.line(lx, ly - 4, lx + 18, ly - 4, color, 2);
    svg.text(lx + 24, ly, `p = ${p}`, "start");
  });
  if (refs.size > 0) {
    svg.text(WIDTH - MARGIN.right - 120 + 24, MARGIN.top + 16 * primes.length + 8,
      "dashed: p^-beta reference", "start", 10);
  }
  return svg.render();
}
