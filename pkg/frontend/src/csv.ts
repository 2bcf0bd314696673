/**
 * Typed readers for the workbench artifact CSVs. The schemas are part of
 * the primary component's public interface; readers validate headers and
 * fail loudly on drift.
 */

import { readFileSync } from "fs";
import Papa from "papaparse";

export interface RunRow {
  n: number;
  dataset_id: number;
  init_id: number;
  mask: string;
  E: number;
  S: number;
  expelled_frac: number;
  hull_dist_mean: number;
}

export interface SummaryRow {
  n: number;
  mask: string;
  k: number;
  mean_E: number;
  std_E: number;
  sem_E: number;
  mean_S: number;
  std_S: number;
  sem_S: number;
  mean_expelled_frac: number;
}

export interface TauSummaryRow {
  tau: number;
  k: number;
  mean_expelled_frac: number;
  mean_hull_dist: number;
  mean_E: number;
  sem_E: number;
  mean_S: number;
  sem_S: number;
}

export interface PrototypeRow {
  x_hat: number;
  mean_activation: number;
  y_hat: number;
  x: number;
  y: number;
  n: number;
  mask: string;
  run_E: number;
}

function parseCsv(path: string): Record<string, string>[] {
  const text = readFileSync(path, "utf8");
  const result = Papa.parse<Record<string, string>>(text.trim(), {
    header: true,
    skipEmptyLines: true,
  });
  if (result.errors.length > 0) {
    throw new Error(`${path}: ${result.errors[0].message}`);
  }
  return result.data;
}

function requireFields(path: string, rows: Record<string, string>[], fields: string[]): void {
  if (rows.length === 0) return;
  for (const f of fields) {
    if (!(f in rows[0])) throw new Error(`${path}: missing column '${f}'`);
  }
}

const num = (row: Record<string, string>, key: string): number => Number(row[key]);

export function readRuns(path: string): RunRow[] {
  const rows = parseCsv(path);
  requireFields(path, rows, ["n", "mask", "E", "S", "expelled_frac", "hull_dist_mean"]);
  return rows.map((r) => ({
    n: num(r, "n"),
    dataset_id: num(r, "dataset_id"),
    init_id: num(r, "init_id"),
    mask: r.mask,
    E: num(r, "E"),
    S: num(r, "S"),
    expelled_frac: num(r, "expelled_frac"),
    hull_dist_mean: num(r, "hull_dist_mean"),
  }));
}

export function readSummary(path: string): SummaryRow[] {
  const rows = parseCsv(path);
  requireFields(path, rows, ["n", "mask", "k", "mean_E", "sem_E", "mean_S", "sem_S"]);
  return rows.map((r) => ({
    n: num(r, "n"),
    mask: r.mask,
    k: num(r, "k"),
    mean_E: num(r, "mean_E"),
    std_E: num(r, "std_E"),
    sem_E: num(r, "sem_E"),
    mean_S: num(r, "mean_S"),
    std_S: num(r, "std_S"),
    sem_S: num(r, "sem_S"),
    mean_expelled_frac: num(r, "mean_expelled_frac"),
  }));
}

export function readTauSummary(path: string): TauSummaryRow[] {
  const rows = parseCsv(path);
  requireFields(path, rows, ["tau", "mean_expelled_frac", "mean_hull_dist", "mean_E", "mean_S"]);
  return rows.map((r) => ({
    tau: num(r, "tau"),
    k: num(r, "k"),
    mean_expelled_frac: num(r, "mean_expelled_frac"),
    mean_hull_dist: num(r, "mean_hull_dist"),
    mean_E: num(r, "mean_E"),
    sem_E: num(r, "sem_E"),
    mean_S: num(r, "mean_S"),
    sem_S: num(r, "sem_S"),
  }));
}

export function readPrototypes(path: string): PrototypeRow[] {
  const rows = parseCsv(path);
  requireFields(path, rows, ["x_hat", "mean_activation", "y_hat", "x", "y", "run_E"]);
  return rows.map((r) => ({
    x_hat: num(r, "x_hat"),
    mean_activation: num(r, "mean_activation"),
    y_hat: num(r, "y_hat"),
    x: num(r, "x"),
    y: num(r, "y"),
    n: num(r, "n"),
    mask: r.mask,
    run_E: num(r, "run_E"),
  }));
}

/** SEM with the (k-1) std divisor, matching the primary's convention. */
export function sem(values: number[]): number {
  const k = values.length;
  if (k <= 1) return 0;
  const mean = values.reduce((a, b) => a + b, 0) / k;
  const varSum = values.reduce((a, b) => a + (b - mean) * (b - mean), 0);
  return Math.sqrt(varSum / (k - 1)) / Math.sqrt(k);
}
