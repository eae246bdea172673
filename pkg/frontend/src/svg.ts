/**
 * Deterministic SVG scene builder.
 *
 * Every coordinate is rounded to a fixed number of decimals so output files
 * are byte-stable across platforms (golden-file friendly).  No timestamps,
 * no randomness.
 */

export const WIDTH = 640;
export const HEIGHT = 480;
export const MARGIN = { top: 40, right: 24, bottom: 56, left: 72 };

export const PALETTE = [
  "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
  "#8c564b", "#17becf", "#7f7f7f", "#bcbd22", "#e377c2",
];

export function fmt(x: number): string {
  const r = x.toFixed(2);
  return r === "-0.00" ? "0.00" : r;
}

export interface Scale {
  (value: number): number;
  ticks: number[];
}

/** Linear scale from [lo, hi] onto [a, b] with ~n round ticks. */
export function linearScale(lo: number, hi: number, a: number, b: number, n = 5): Scale {
  if (hi <= lo) {
    hi = lo + 1;
  }
  const span = hi - lo;
  const step = niceStep(span / n);
  const first = Math.ceil(lo / step) * step;
  const ticks: number[] = [];
  for (let t = first; t <= hi + 1e-9; t += step) {
    ticks.push(Number(t.toPrecision(12)));
  }
  const scale = ((v: number) => a + ((v - lo) / span) * (b - a)) as Scale;
  scale.ticks = ticks;
  return scale;
}

/** Log10 scale: ticks at powers of ten covering [lo, hi], lo > 0. */
export function logScale(lo: number, hi: number, a: number, b: number): Scale {
  const llo = Math.log10(lo);
  const lhi = Math.log10(hi <= lo ? lo * 10 : hi);
  const ticks: number[] = [];
  for (let e = Math.ceil(llo - 1e-9); e <= Math.floor(lhi + 1e-9); e++) {
    ticks.push(Math.pow(10, e));
  }
  const scale = ((v: number) => a + ((Math.log10(v) - llo) / (lhi - llo)) * (b - a)) as Scale;
  scale.ticks = ticks;
  return scale;
}

function niceStep(raw: number): number {
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  const r = raw / mag;
  if (r <= 1) return mag;
  if (r <= 2) return 2 * mag;
  if (r <= 5) return 5 * mag;
  return 10 * mag;
}

export class Svg {
  private parts: string[] = [];

  constructor(title: string) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" viewBox="0 0 ${WIDTH} ${HEIGHT}">`,
      `<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`,
      `<text x="${WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="16">${escapeXml(title)}</text>`,
    );
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash?: string): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: [number, number][], stroke: string, dash?: string): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="1.5"${d}/>`);
  }

  circle(x: number, y: number, color: string, filled: boolean): void {
    const fill = filled ? color : "white";
    this.parts.push(
      `<circle cx="${fmt(x)}" cy="${fmt(y)}" r="4" fill="${fill}" stroke="${color}" stroke-width="1.5"/>`,
    );
  }

  text(x: number, y: number, s: string, anchor = "middle", size = 12): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" text-anchor="${anchor}" font-family="sans-serif" font-size="${size}">${escapeXml(s)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function drawAxes(
  svg: Svg,
  xs: Scale,
  ys: Scale,
  xLabel: string,
  yLabel: string,
  tickFmt: (t: number) => string = (t) => String(t),
): void {
  const { left, bottom, top, right } = MARGIN;
  const x0 = left;
  const x1 = WIDTH - right;
  const y0 = HEIGHT - bottom;
  const y1 = top;
  svg.line(x0, y0, x1, y0, "#000");
  svg.line(x0, y0, x0, y1, "#000");
  for (const t of xs.ticks) {
    const px = xs(t);
    svg.line(px, y0, px, y0 + 5, "#000");
    svg.text(px, y0 + 20, tickFmt(t));
  }
  for (const t of ys.ticks) {
    const py = ys(t);
    svg.line(x0 - 5, py, x0, py, "#000");
    svg.text(x0 - 8, py + 4, tickFmt(t), "end");
  }
  svg.text((x0 + x1) / 2, HEIGHT - 16, xLabel);
  svg.text(16, (y0 + y1) / 2, yLabel, "middle", 12);
}

function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}
