/**
 * Minimal deterministic SVG builder. Everything is plain string assembly
 * with fixed-precision coordinates, so identical inputs always produce
 * byte-identical files.
 */

export const FONT = "font-family=\"Helvetica, Arial, sans-serif\"";

export function fmt(v: number): string {
  if (!Number.isFinite(v)) throw new Error(`non-finite coordinate ${v}`);
  const s = v.toFixed(2);
  return s === "-0.00" ? "0.00" : s;
}

export interface Scale {
  (value: number): number;
  domain: [number, number];
  range: [number, number];
}

export function linearScale(domain: [number, number], range: [number, number]): Scale {
  const [d0, d1] = domain;
  const [r0, r1] = range;
  const span = d1 - d0 === 0 ? 1 : d1 - d0;
  const scale = ((v: number) => r0 + ((v - d0) / span) * (r1 - r0)) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

export function logScale(domain: [number, number], range: [number, number]): Scale {
  const inner = linearScale([Math.log10(domain[0]), Math.log10(domain[1])], range);
  const scale = ((v: number) => inner(Math.log10(v))) as Scale;
  scale.domain = domain;
  scale.range = range;
  return scale;
}

/** Round-numbered ticks covering the domain, roughly `count` of them. */
export function ticks(domain: [number, number], count = 5): number[] {
  const [lo, hi] = domain;
  if (lo === hi) return [lo];
  const step = tickStep(lo, hi, count);
  const start = Math.ceil(lo / step) * step;
  const out: number[] = [];
  for (let v = start; v <= hi + step * 1e-9; v += step) {
    out.push(Math.round(v / step) * step);
  }
  return out;
}

function tickStep(lo: number, hi: number, count: number): number {
  const raw = (hi - lo) / count;
  const power = Math.floor(Math.log10(raw));
  const base = Math.pow(10, power);
  const err = raw / base;
  if (err >= 5) return 10 * base;
  if (err >= 2) return 5 * base;
  if (err >= 1) return 2 * base;
  return base;
}

export function tickLabel(v: number): string {
  if (v !== 0 && (Math.abs(v) < 0.01 || Math.abs(v) >= 10000)) return v.toExponential(0);
  return String(Math.round(v * 1000) / 1000);
}

export class SvgDoc {
  private parts: string[] = [];

  constructor(readonly width: number, readonly height: number) {
    this.parts.push(
      `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
        `viewBox="0 0 ${width} ${height}">`,
      `<rect x="0" y="0" width="${width}" height="${height}" fill="white"/>`,
    );
  }

  raw(s: string): void {
    this.parts.push(s);
  }

  line(x1: number, y1: number, x2: number, y2: number, stroke: string, width = 1, dash = ""): void {
    const d = dash ? ` stroke-dasharray="${dash}"` : "";
    this.parts.push(
      `<line x1="${fmt(x1)}" y1="${fmt(y1)}" x2="${fmt(x2)}" y2="${fmt(y2)}" ` +
        `stroke="${stroke}" stroke-width="${width}"${d}/>`,
    );
  }

  polyline(points: Array<[number, number]>, stroke: string, width = 1.5): void {
    const pts = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
    this.parts.push(`<polyline points="${pts}" fill="none" stroke="${stroke}" stroke-width="${width}"/>`);
  }

  rect(x: number, y: number, w: number, h: number, fill: string, stroke = "none"): void {
    this.parts.push(
      `<rect x="${fmt(x)}" y="${fmt(y)}" width="${fmt(w)}" height="${fmt(h)}" ` +
        `fill="${fill}" stroke="${stroke}"/>`,
    );
  }

  circle(cx: number, cy: number, r: number, fill: string, opacity = 1): void {
    const op = opacity === 1 ? "" : ` fill-opacity="${opacity}"`;
    this.parts.push(`<circle cx="${fmt(cx)}" cy="${fmt(cy)}" r="${fmt(r)}" fill="${fill}"${op}/>`);
  }

  text(x: number, y: number, content: string, size = 11, anchor = "middle", fill = "#222"): void {
    this.parts.push(
      `<text x="${fmt(x)}" y="${fmt(y)}" ${FONT} font-size="${size}" ` +
        `text-anchor="${anchor}" fill="${fill}">${escapeXml(content)}</text>`,
    );
  }

  render(): string {
    return this.parts.join("\n") + "\n</svg>\n";
  }
}

export function escapeXml(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export interface Frame {
  x0: number;
  y0: number;
  w: number;
  h: number;
}

/** Axis frame with tick marks and labels; returns the inner plotting frame. */
export function drawAxes(
  doc: SvgDoc,
  frame: Frame,
  xScale: Scale,
  yScale: Scale,
  opts: {
    xTicks: number[];
    yTicks: number[];
    xLabel?: string;
    yLabel?: string;
    xTickLabel?: (v: number) => string;
  },
): void {
  const { x0, y0, w, h } = frame;
  const xlab = opts.xTickLabel ?? tickLabel;
  doc.line(x0, y0 + h, x0 + w, y0 + h, "#222");
  doc.line(x0, y0, x0, y0 + h, "#222");
  for (const t of opts.xTicks) {
    const px = xScale(t);
    doc.line(px, y0 + h, px, y0 + h + 4, "#222");
    doc.text(px, y0 + h + 16, xlab(t), 10);
  }
  for (const t of opts.yTicks) {
    const py = yScale(t);
    doc.line(x0 - 4, py, x0, py, "#222");
    doc.text(x0 - 7, py + 3.5, tickLabel(t), 10, "end");
    doc.line(x0, py, x0 + w, py, "#eee");
  }
  if (opts.xLabel) doc.text(x0 + w / 2, y0 + h + 32, opts.xLabel, 12);
  if (opts.yLabel) {
    doc.raw(
      `<text x="${fmt(x0 - 38)}" y="${fmt(y0 + h / 2)}" ${FONT} font-size="12" text-anchor="middle" ` +
        `fill="#222" transform="rotate(-90 ${fmt(x0 - 38)} ${fmt(y0 + h / 2)})">${escapeXml(opts.yLabel)}</text>`,
    );
  }
}

/** Grayscale for heatmaps: 0 -> white (good), 1 -> dark (bad). */
export function grayShade(t: number): string {
  const clamped = Math.max(0, Math.min(1, t));
  const level = Math.round(245 - clamped * 190);
  return `rgb(${level},${level},${level})`;
}

export const MASK_COLORS: Record<string, string> = {
  "000": "#1f77b4",
  "001": "#17becf",
  "010": "#2ca02c",
  "011": "#98df8a",
  "100": "#d62728",
  "101": "#ff7f0e",
  "110": "#e377c2",
  "111": "#8c564b",
};
