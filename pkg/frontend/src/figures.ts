/**
 * Figure renderers. Each function maps already-parsed CSV rows to an SVG
 * string; no statistics are computed here beyond reading the mean/sem
 * columns the primary component emitted.
 */

import { PrototypeRow, SummaryRow, TauSummaryRow } from "./csv.js";
import {
  Frame,
  MASK_COLORS,
  SvgDoc,
  drawAxes,
  fmt,
  grayShade,
  linearScale,
  logScale,
  tickLabel,
} from "./svg.js";

export const MASKS = ["000", "001", "010", "011", "100", "101", "110", "111"];
export const FAMILY_ORDER = ["000", "001", "010", "011", "100", "101", "110", "111"];

const MASK_NAMES: Record<string, string> = {
  "000": "Std",
  "001": "Sep",
  "010": "Cov",
  "011": "Cov+Sep",
  "100": "Ovl",
  "101": "Ovl+Sep",
  "110": "Ovl+Cov",
  "111": "Full",
};

function byMask(rows: SummaryRow[]): Map<string, SummaryRow[]> {
  const out = new Map<string, SummaryRow[]>();
  for (const mask of MASKS) {
    const cells = rows.filter((r) => r.mask === mask).sort((a, b) => a.n - b.n);
    if (cells.length > 0) out.set(mask, cells);
  }
  return out;
}

function errorBar(doc: SvgDoc, x: number, yLo: number, yHi: number, color: string): void {
  doc.line(x, yLo, x, yHi, color, 1);
  doc.line(x - 3, yLo, x + 3, yLo, color, 1);
  doc.line(x - 3, yHi, x + 3, yHi, color, 1);
}

function legend(doc: SvgDoc, x: number, y: number, masks: string[]): void {
  masks.forEach((mask, i) => {
    const yy = y + i * 16;
    doc.line(x, yy - 4, x + 18, yy - 4, MASK_COLORS[mask], 2);
    doc.text(x + 24, yy, `${mask} ${MASK_NAMES[mask]}`, 10, "start");
  });
}

/** Mean-with-SEM line plot versus dataset size, all masks. */
function meanSemLines(
  rows: SummaryRow[],
  metric: "E" | "S",
  title: string,
  yLabel: string,
): string {
  const doc = new SvgDoc(640, 420);
  const frame: Frame = { x0: 60, y0: 40, w: 470, h: 320 };
  const series = byMask(rows);
  const nValues = [...new Set(rows.map((r) => r.n))].sort((a, b) => a - b);

  let yMax = 0;
  for (const cells of series.values()) {
    for (const c of cells) {
      yMax = Math.max(yMax, (metric === "E" ? c.mean_E + c.sem_E : c.mean_S + c.sem_S));
    }
  }
  const xScale = logScale([nValues[0], nValues[nValues.length - 1]], [frame.x0 + 15, frame.x0 + frame.w - 15]);
  const yScale = linearScale([0, yMax * 1.05], [frame.y0 + frame.h, frame.y0]);

  doc.text(320, 20, title, 13);
  drawAxes(doc, frame, xScale, yScale, {
    xTicks: nValues,
    yTicks: yTicksFor(yMax * 1.05),
    xLabel: "dataset size N",
    yLabel,
    xTickLabel: (v) => String(v),
  });

  for (const [mask, cells] of series) {
    const color = MASK_COLORS[mask];
    const pts: Array<[number, number]> = [];
    for (const c of cells) {
      const mean = metric === "E" ? c.mean_E : c.mean_S;
      const semV = metric === "E" ? c.sem_E : c.sem_S;
      const x = xScale(c.n);
      pts.push([x, yScale(mean)]);
      errorBar(doc, x, yScale(mean - semV), yScale(mean + semV), color);
    }
    doc.polyline(pts, color, 1.8);
    for (const [x, y] of pts) doc.circle(x, y, 2.6, color);
  }
  legend(doc, frame.x0 + frame.w + 12, frame.y0 + 12, [...series.keys()]);
  return doc.render();
}

function yTicksFor(max: number): number[] {
  const step = max > 2 ? 0.5 : max > 0.8 ? 0.2 : max > 0.4 ? 0.1 : 0.05;
  const out: number[] = [];
  for (let v = 0; v <= max + 1e-9; v += step) out.push(Math.round(v * 100) / 100);
  return out;
}

export function figErrorVsN(summary: SummaryRow[]): string {
  return meanSemLines(summary, "E", "Reconstruction error by mask (mean with SEM)", "reconstruction error E");
}

export function figSpecializationVsN(summary: SummaryRow[]): string {
  return meanSemLines(summary, "S", "Specialization ratio by mask (mean with SEM)", "specialization ratio S");
}

/** Family-grouped heatmap with a white separator after the overlap-free block. */
function heatmap(rows: SummaryRow[], metric: "E" | "S", title: string): string {
  const nValues = [...new Set(rows.map((r) => r.n))].sort((a, b) => a - b);
  const cellW = 58;
  const cellH = 34;
  const sepW = 8; // white gap between the mask families
  const x0 = 70;
  const y0 = 50;
  const width = x0 + 8 * cellW + sepW + 30;
  const height = y0 + nValues.length * cellH + 40;
  const doc = new SvgDoc(width, height);
  doc.text(width / 2, 22, title, 13);

  const values = new Map<string, number>();
  let lo = Infinity;
  let hi = -Infinity;
  for (const r of rows) {
    const v = metric === "E" ? r.mean_E : r.mean_S;
    values.set(`${r.n}|${r.mask}`, v);
    lo = Math.min(lo, v);
    hi = Math.max(hi, v);
  }
  const span = hi - lo === 0 ? 1 : hi - lo;

  FAMILY_ORDER.forEach((mask, col) => {
    const cx = x0 + col * cellW + (col >= 4 ? sepW : 0);
    doc.text(cx + cellW / 2, y0 - 8, mask, 11);
    nValues.forEach((n, row) => {
      const v = values.get(`${n}|${mask}`);
      if (v === undefined) return;
      const cy = y0 + row * cellH;
      // lighter is better: scale darkness by how poor the value is
      const t = metric === "E" ? (v - lo) / span : (hi - v) / span;
      doc.rect(cx, cy, cellW - 2, cellH - 2, grayShade(t), "#ccc");
      doc.text(cx + cellW / 2, cy + cellH / 2 + 3.5, v.toFixed(3), 10, "middle", t > 0.55 ? "#fff" : "#222");
    });
  });
  nValues.forEach((n, row) => {
    doc.text(x0 - 10, y0 + row * cellH + cellH / 2 + 3.5, `N=${n}`, 11, "end");
  });
  // explicit separator band
  doc.rect(x0 + 4 * cellW, y0 - 2, sepW, nValues.length * cellH + 2, "white");
  doc.text(x0 + 2 * cellW, height - 12, "overlap-free", 11);
  doc.text(x0 + 6 * cellW + sepW, height - 12, "overlap-active", 11);
  return doc.render();
}

export function figErrorHeatmap(summary: SummaryRow[]): string {
  return heatmap(summary, "E", "Mean reconstruction error (lighter is better)");
}

export function figSpecializationHeatmap(summary: SummaryRow[]): string {
  return heatmap(summary, "S", "Mean specialization ratio (lighter is better)");
}

/**
 * Prototype strip plot: one row per mask, markers at the prototype
 * locations with area proportional to mean activation, input range shaded.
 */
export function figPrototypes(dumps: Array<{ mask: string; rows: PrototypeRow[] }>): string {
  const doc = new SvgDoc(640, 90 + dumps.length * 70);
  const frame: Frame = { x0: 60, y0: 45, w: 540, h: dumps.length * 70 };
  let xLo = 0;
  let xHi = 1;
  for (const d of dumps) {
    for (const r of d.rows) {
      xLo = Math.min(xLo, r.x_hat);
      xHi = Math.max(xHi, r.x_hat);
    }
  }
  xLo = Math.max(xLo, -3);
  xHi = Math.min(xHi, 4);
  const xScale = linearScale([xLo - 0.05, xHi + 0.05], [frame.x0, frame.x0 + frame.w]);

  const n = dumps[0]?.rows.length ?? 0;
  doc.text(320, 20, `Prototype locations at N=${n} (marker area ~ mean activation)`, 13);
  // shade the input range [0,1]
  doc.rect(xScale(0), frame.y0 - 8, xScale(1) - xScale(0), frame.h - 20, "#e8f0fe");

  dumps.forEach((dump, i) => {
    const cy = frame.y0 + i * 70 + 22;
    doc.line(xScale(xLo - 0.05), cy, xScale(xHi + 0.05), cy, "#aaa");
    doc.text(frame.x0 - 8, cy + 4, `${dump.mask} ${MASK_NAMES[dump.mask]}`, 11, "end");
    for (const r of dump.rows) {
      if (r.x_hat < xLo || r.x_hat > xHi) continue;
      const radius = 1.2 + 7.0 * Math.sqrt(Math.max(r.mean_activation, 0));
      doc.circle(xScale(r.x_hat), cy, radius, MASK_COLORS[dump.mask], 0.55);
    }
    const clipped = dump.rows.filter((r) => r.x_hat < xLo || r.x_hat > xHi).length;
    if (clipped > 0) {
      doc.text(frame.x0 + frame.w, cy - 12, `${clipped} outside plot`, 9, "end", "#666");
    }
  });

  const axisY = frame.y0 + frame.h - 20;
  for (const t of [xLo, 0, 0.5, 1, xHi]) {
    doc.line(xScale(t), axisY, xScale(t), axisY + 4, "#222");
    doc.text(xScale(t), axisY + 16, tickLabel(t), 10);
  }
  doc.text(320, axisY + 32, "prototype location", 12);
  return doc.render();
}

/** Four-panel temperature sweep: expelled fraction, hull distance, E, S. */
export function figTauSweep(rows: TauSummaryRow[]): string {
  const doc = new SvgDoc(640, 480);
  const panels: Array<{ key: keyof TauSummaryRow; sem?: keyof TauSummaryRow; label: string }> = [
    { key: "mean_expelled_frac", label: "expelled fraction" },
    { key: "mean_hull_dist", label: "distance from hull" },
    { key: "mean_E", sem: "sem_E", label: "reconstruction error E" },
    { key: "mean_S", sem: "sem_S", label: "specialization ratio S" },
  ];
  doc.text(320, 20, "Temperature sweep on the separation-only mask (N=30)", 13);
  const sorted = [...rows].sort((a, b) => a.tau - b.tau);

  panels.forEach((panel, idx) => {
    const col = idx % 2;
    const row = Math.floor(idx / 2);
    const frame: Frame = { x0: 60 + col * 300, y0: 50 + row * 210, w: 230, h: 150 };
    const xScale = logScale(
      [sorted[0].tau, sorted[sorted.length - 1].tau],
      [frame.x0 + 10, frame.x0 + frame.w - 10],
    );
    let hi = 0;
    for (const r of sorted) {
      const v = r[panel.key] as number;
      const s = panel.sem ? (r[panel.sem] as number) : 0;
      hi = Math.max(hi, v + s);
    }
    const yScale = linearScale([0, hi * 1.08], [frame.y0 + frame.h, frame.y0]);
    drawAxes(doc, frame, xScale, yScale, {
      xTicks: sorted.map((r) => r.tau),
      yTicks: yTicksFor(hi * 1.08),
      xLabel: "tau",
      xTickLabel: (v) => tickLabel(v),
    });
    doc.text(frame.x0 + frame.w / 2, frame.y0 - 8, panel.label, 11);
    const pts: Array<[number, number]> = sorted.map((r) => [
      xScale(r.tau),
      yScale(r[panel.key] as number),
    ]);
    if (panel.sem) {
      for (const r of sorted) {
        const v = r[panel.key] as number;
        const s = r[panel.sem] as number;
        errorBar(doc, xScale(r.tau), yScale(v - s), yScale(v + s), "#2ca02c");
      }
    }
    doc.polyline(pts, "#2ca02c", 1.8);
    for (const [x, y] of pts) doc.circle(x, y, 2.6, "#2ca02c");
  });
  return doc.render();
}

/**
 * Representative reconstructions: originals vs reconstructed pairs for a
 * few masks on one dataset; prototypes outside the plotted window become
 * edge arrows annotated with their location.
 */
export function figRepresentative(dumps: Array<{ mask: string; rows: PrototypeRow[] }>): string {
  const panelW = 200;
  const doc = new SvgDoc(60 + dumps.length * (panelW + 20), 320);
  const n = dumps[0]?.rows.length ?? 0;
  doc.text((60 + dumps.length * (panelW + 20)) / 2, 20, `Representative reconstructions at N=${n}`, 13);

  const X_WINDOW: [number, number] = [-0.5, 1.5];

  dumps.forEach((dump, idx) => {
    const frame: Frame = { x0: 50 + idx * (panelW + 20), y0: 50, w: panelW, h: 200 };
    const xScale = linearScale(X_WINDOW, [frame.x0, frame.x0 + frame.w]);
    let yLo = 0;
    let yHi = 1;
    for (const r of dump.rows) {
      if (r.x_hat >= X_WINDOW[0] && r.x_hat <= X_WINDOW[1]) {
        yLo = Math.min(yLo, r.y_hat);
        yHi = Math.max(yHi, r.y_hat);
      }
    }
    const yScale = linearScale([yLo - 0.05, yHi + 0.05], [frame.y0 + frame.h, frame.y0]);
    drawAxes(doc, frame, xScale, yScale, {
      xTicks: [-0.5, 0, 0.5, 1, 1.5],
      yTicks: yTicksFor(yHi),
      xLabel: "x",
    });
    doc.rect(xScale(0), frame.y0, xScale(1) - xScale(0), frame.h, "#e8f0fe");
    doc.text(frame.x0 + frame.w / 2, frame.y0 - 8,
      `${dump.mask} ${MASK_NAMES[dump.mask]} (E=${dump.rows[0].run_E.toFixed(3)})`, 11);

    dump.rows.forEach((r, i) => {
      // original pair
      doc.circle(xScale(r.x), yScale(r.y), 4, "#1f77b4", 0.85);
      doc.text(xScale(r.x), yScale(r.y) - 7, `o${i + 1}`, 8, "middle", "#1f77b4");
    });
    let arrowSlot = 0;
    dump.rows.forEach((r, i) => {
      if (r.x_hat >= X_WINDOW[0] && r.x_hat <= X_WINDOW[1]) {
        const px = xScale(r.x_hat);
        const py = yScale(Math.max(Math.min(r.y_hat, yHi + 0.05), yLo - 0.05));
        doc.line(px - 4, py - 4, px + 4, py + 4, "#ff7f0e", 1.6);
        doc.line(px - 4, py + 4, px + 4, py - 4, "#ff7f0e", 1.6);
        doc.text(px, py + 14, `r${i + 1}`, 8, "middle", "#ff7f0e");
      } else {
        const right = r.x_hat > X_WINDOW[1];
        const ex = right ? frame.x0 + frame.w : frame.x0;
        const ey = frame.y0 + 16 + arrowSlot * 18;
        arrowSlot += 1;
        const dir = right ? 1 : -1;
        doc.line(ex - dir * 16, ey, ex - dir * 3, ey, "#ff7f0e", 1.6);
        doc.raw(
          `<path d="M ${fmt(ex - dir * 3)} ${fmt(ey)} l ${fmt(-dir * 6)} -3.5 l 0 7 z" fill="#ff7f0e"/>`,
        );
        doc.text(ex - dir * 20, ey + 3.5, `r${i + 1} x=${r.x_hat.toFixed(2)}`, 8, right ? "end" : "start", "#ff7f0e");
      }
    });
  });
  return doc.render();
}
