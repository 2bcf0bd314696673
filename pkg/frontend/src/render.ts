/**
 * Orchestrates figure rendering from an artifact directory. Each figure
 * declares its input files; missing or empty inputs skip that figure and
 * the batch reports failure while still writing everything renderable.
 */

import { existsSync, mkdirSync, writeFileSync } from "fs";
import { join } from "path";

import { readPrototypes, readSummary, readTauSummary } from "./csv.js";
import {
  figErrorHeatmap,
  figErrorVsN,
  figPrototypes,
  figRepresentative,
  figSpecializationHeatmap,
  figSpecializationVsN,
  figTauSweep,
} from "./figures.js";

export interface FigureSpec {
  id: string;
  file: string;
  inputs: (dir: string) => string[];
  render: (dir: string) => string;
  default: boolean;
}

const protoFiles = (dir: string, n: number, masks: string[]) =>
  masks.map((m) => join(dir, `prototypes_${n}_${m}.csv`));

function nonEmpty<T>(rows: T[], path: string): T[] {
  if (rows.length === 0) throw new Error(`no data rows in ${path}`);
  return rows;
}

const summary = (dir: string) => nonEmpty(readSummary(join(dir, "summary.csv")), "summary.csv");

export const FIGURES: FigureSpec[] = [
  {
    id: "fig1",
    file: "fig1_error_vs_n.svg",
    inputs: (dir) => [join(dir, "summary.csv")],
    render: (dir) => figErrorVsN(summary(dir)),
    default: true,
  },
  {
    id: "fig2",
    file: "fig2_error_heatmap.svg",
    inputs: (dir) => [join(dir, "summary.csv")],
    render: (dir) => figErrorHeatmap(summary(dir)),
    default: true,
  },
  {
    id: "fig3",
    file: "fig3_prototypes.svg",
    inputs: (dir) => protoFiles(dir, 100, ["000", "010", "100"]),
    render: (dir) =>
      figPrototypes(
        ["000", "010", "100"].map((mask) => ({
          mask,
          rows: nonEmpty(readPrototypes(join(dir, `prototypes_100_${mask}.csv`)), `prototypes_100_${mask}.csv`),
        })),
      ),
    default: true,
  },
  {
    id: "fig4",
    file: "fig4_tau_sweep.svg",
    inputs: (dir) => [join(dir, "tau_summary.csv")],
    render: (dir) => figTauSweep(nonEmpty(readTauSummary(join(dir, "tau_summary.csv")), "tau_summary.csv")),
    default: true,
  },
  {
    id: "fig5",
    file: "fig5_specialization_vs_n.svg",
    inputs: (dir) => [join(dir, "summary.csv")],
    render: (dir) => figSpecializationVsN(summary(dir)),
    default: false, // extra view; render with --only fig5
  },
  {
    id: "fig6",
    file: "fig6_specialization_heatmap.svg",
    inputs: (dir) => [join(dir, "summary.csv")],
    render: (dir) => figSpecializationHeatmap(summary(dir)),
    default: true,
  },
  {
    id: "fig7",
    file: "fig7_representative.svg",
    inputs: (dir) => protoFiles(dir, 5, ["000", "010", "111"]),
    render: (dir) =>
      figRepresentative(
        ["000", "010", "111"].map((mask) => ({
          mask,
          rows: nonEmpty(readPrototypes(join(dir, `prototypes_5_${mask}.csv`)), `prototypes_5_${mask}.csv`),
        })),
      ),
    default: true,
  },
];

export interface RenderResult {
  written: string[];
  skipped: Array<{ id: string; reason: string }>;
}

function inputProblem(spec: FigureSpec, dir: string): string | null {
  for (const path of spec.inputs(dir)) {
    if (!existsSync(path)) return `missing ${path}`;
  }
  return null;
}

export function renderAll(artifactDir: string, outDir: string, only?: string[]): RenderResult {
  const wanted = only
    ? FIGURES.filter((f) => only.includes(f.id))
    : FIGURES.filter((f) => f.default);
  if (only) {
    const known = new Set(FIGURES.map((f) => f.id));
    for (const id of only) {
      if (!known.has(id)) throw new Error(`unknown figure id '${id}' (expected fig1..fig7)`);
    }
  }

  mkdirSync(outDir, { recursive: true });
  const result: RenderResult = { written: [], skipped: [] };
  for (const spec of wanted) {
    const problem = inputProblem(spec, artifactDir);
    if (problem) {
      result.skipped.push({ id: spec.id, reason: problem });
      continue;
    }
    let svg: string;
    try {
      svg = spec.render(artifactDir);
    } catch (err) {
      result.skipped.push({ id: spec.id, reason: String(err) });
      continue;
    }
    const path = join(outDir, spec.file);
    writeFileSync(path, svg);
    result.written.push(path);
  }
  return result;
}
