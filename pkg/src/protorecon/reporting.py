"""Artifact persistence: CSV files, plus/minus significance text, tables.md.

Floats are written with repr() (shortest round-trip form) so a parse of
runs.csv reproduces the records exactly and deterministic reruns produce
byte-identical files (modulo the wall-clock runtime column).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import numpy as np

from .harness import (
    EffectRow,
    FamilyFitRow,
    FIGURE_CELLS,
    GridConfig,
    RUNS_COLUMNS,
    RunRecord,
    SummaryCell,
    cell_records,
    effect_table,
    family_fit_table,
    prototype_dump,
    significance_matrices,
    summarize,
    tau_summary,
)
from .losses import MASKS
from .stats import PairwiseMatrix

SUMMARY_COLUMNS = (
    "n", "mask", "k",
    "mean_E", "std_E", "sem_E", "mean_S", "std_S", "sem_S",
    "mean_L_fit", "mean_L_overlap", "mean_L_coverage", "mean_L_separation",
    "mean_expelled_frac", "mean_hull_dist",
)
EFFECT_COLUMNS = ("n", "mean_baseline", "mean_coverage", "delta_e", "rel_reduction_pct", "cohen_d")
FAMILY_COLUMNS = ("n", "fit_overlap_free", "fit_overlap_active", "ratio")
TAU_SWEEP_COLUMNS = ("tau",) + RUNS_COLUMNS
TAU_SUMMARY_COLUMNS = (
    "tau", "k", "mean_expelled_frac", "mean_hull_dist",
    "mean_E", "std_E", "sem_E", "mean_S", "std_S", "sem_S",
)
PROTO_COLUMNS = ("x_hat", "mean_activation", "y_hat", "x", "y", "n", "mask", "dataset_id", "init_id", "run_E")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _record_row(r: RunRecord) -> list[str]:
    return [_fmt(getattr(r, col)) for col in RUNS_COLUMNS]


def write_runs_csv(records: list[RunRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RUNS_COLUMNS)
        for r in records:
            writer.writerow(_record_row(r))


def read_runs_csv(path: Path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != RUNS_COLUMNS:
            raise ValueError(f"unexpected runs.csv header in {path}")
        for row in reader:
            records.append(RunRecord(
                n=int(row["n"]), dataset_id=int(row["dataset_id"]),
                init_id=int(row["init_id"]), mask=row["mask"],
                dataset_seed=int(row["dataset_seed"]), init_seed=int(row["init_seed"]),
                E=float(row["E"]), S=float(row["S"]),
                L_fit=float(row["L_fit"]), L_overlap=float(row["L_overlap"]),
                L_coverage=float(row["L_coverage"]), L_separation=float(row["L_separation"]),
                expelled_frac=float(row["expelled_frac"]),
                hull_dist_mean=float(row["hull_dist_mean"]),
                runtime_ms=float(row["runtime_ms"]),
            ))
    return records


def write_tau_sweep_csv(records: list[RunRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TAU_SWEEP_COLUMNS)
        for r in records:
            writer.writerow([_fmt(r.tau)] + _record_row(r))


def read_tau_sweep_csv(path: Path) -> list[RunRecord]:
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TAU_SWEEP_COLUMNS:
            raise ValueError(f"unexpected tau_sweep.csv header in {path}")
        for row in reader:
            records.append(RunRecord(
                n=int(row["n"]), dataset_id=int(row["dataset_id"]),
                init_id=int(row["init_id"]), mask=row["mask"],
                dataset_seed=int(row["dataset_seed"]), init_seed=int(row["init_seed"]),
                E=float(row["E"]), S=float(row["S"]),
                L_fit=float(row["L_fit"]), L_overlap=float(row["L_overlap"]),
                L_coverage=float(row["L_coverage"]), L_separation=float(row["L_separation"]),
                expelled_frac=float(row["expelled_frac"]),
                hull_dist_mean=float(row["hull_dist_mean"]),
                runtime_ms=float(row["runtime_ms"]),
                tau=float(row["tau"]),
            ))
    return records


def write_summary_csv(cells: list[SummaryCell], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SUMMARY_COLUMNS)
        for cell in cells:
            writer.writerow([_fmt(getattr(cell, col)) for col in SUMMARY_COLUMNS])


def write_effect_csv(rows: list[EffectRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EFFECT_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in EFFECT_COLUMNS])


def write_family_csv(rows: list[FamilyFitRow], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(FAMILY_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(getattr(row, col)) for col in FAMILY_COLUMNS])


def write_tau_summary_csv(rows: list[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TAU_SUMMARY_COLUMNS)
        for row in rows:
            writer.writerow([_fmt(row[col]) for col in TAU_SUMMARY_COLUMNS])


def write_prototypes_csv(dump: dict, path: Path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PROTO_COLUMNS)
        for i in range(len(dump["x_hat"])):
            writer.writerow([
                _fmt(float(dump["x_hat"][i])),
                _fmt(float(dump["mean_activation"][i])),
                _fmt(float(dump["y_hat"][i])),
                _fmt(float(dump["x"][i])),
                _fmt(float(dump["y"][i])),
                dump["n"], dump["mask"], dump["dataset_id"], dump["init_id"],
                _fmt(float(dump["E"])),
            ])


def render_matrix_text(matrix: PairwiseMatrix) -> str:
    """Plus/minus grid with '=' on the diagonal, one row per mask."""
    width = max(len(lbl) for lbl in matrix.labels)
    out = io.StringIO()
    header = " " * (width + 1) + " ".join(f"{lbl:>{width}}" for lbl in matrix.labels)
    out.write(header + "\n")
    for i, lbl in enumerate(matrix.labels):
        cells = " ".join(f"{matrix.verdicts[i, j]:>{width}}" for j in range(len(matrix.labels)))
        out.write(f"{lbl:>{width}} {cells}\n")
    return out.getvalue()


def write_significance_txt(matrix: PairwiseMatrix, n: int, path: Path) -> None:
    body = (
        f"pairwise reconstruction-error comparisons at n={n}\n"
        f"'+' significant after Holm at alpha={matrix.alpha}, '-' not, '=' self\n\n"
    )
    path.write_text(body + render_matrix_text(matrix))


# ---------------------------------------------------------------------------
# tables.md

def _md_table(headers: list[str], rows: list[list[str]]) -> str:
    lines = ["| " + " | ".join(headers) + " |",
             "| " + " | ".join("---" for _ in headers) + " |"]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_tables_md(records: list[RunRecord], sweep_records: list[RunRecord] | None = None) -> str:
    cells = summarize(records)
    by_key = {(c.n, c.mask): c for c in cells}
    n_values = sorted({r.n for r in records})
    masks = [m for m in MASKS if any(r.mask == m for r in records)]

    out = io.StringIO()
    out.write("# Result tables\n\n")

    out.write("## Mean reconstruction error by mask\n\n")
    rows = [[str(n)] + [f"{by_key[(n, m)].mean_E:.3f}" if (n, m) in by_key else "-" for m in masks]
            for n in n_values]
    out.write(_md_table(["N"] + list(masks), rows) + "\n")

    out.write("## Coverage-only effect vs baseline\n\n")
    rows = [[str(r.n), f"{r.mean_baseline:.3f}", f"{r.mean_coverage:.3f}",
             f"{r.delta_e:.3f}", f"{r.rel_reduction_pct:.1f}", f"{r.cohen_d:.2f}"]
            for r in effect_table(records)]
    out.write(_md_table(["N", "E baseline", "E coverage", "delta E", "rel. red. (%)", "Cohen d"], rows) + "\n")

    out.write("## Mean fitting loss by family\n\n")
    rows = [[str(r.n), f"{r.fit_overlap_free:.4f}", f"{r.fit_overlap_active:.4f}", f"{r.ratio:.3f}"]
            for r in family_fit_table(records)]
    out.write(_md_table(["N", "fit (overlap-free)", "fit (overlap-active)", "ratio"], rows) + "\n")

    out.write("## Mean expelled fraction by mask\n\n")
    rows = [[str(n)] + [f"{by_key[(n, m)].mean_expelled_frac:.2f}" if (n, m) in by_key else "-" for m in masks]
            for n in n_values]
    out.write(_md_table(["N"] + list(masks), rows) + "\n")

    out.write("## Specialization ratio (mean +/- std)\n\n")
    spec_masks = [m for m in ("000", "010", "111") if m in masks]
    rows = []
    for m in spec_masks:
        row = [{"000": "baseline", "010": "coverage", "111": "full"}[m]]
        for n in n_values:
            c = by_key.get((n, m))
            row.append(f"{c.mean_S:.3f} +/- {c.std_S:.3f}" if c else "-")
        rows.append(row)
    out.write(_md_table(["mask"] + [str(n) for n in n_values], rows) + "\n")

    if sweep_records:
        out.write("## Separation temperature sweep (mask 001, N=30)\n\n")
        rows = [[f"{r['tau']:g}", f"{r['mean_expelled_frac']:.2f}", f"{r['mean_hull_dist']:.2f}",
                 f"{r['mean_E']:.3f}", f"{r['mean_S']:.3f}"]
                for r in tau_summary(sweep_records)]
        out.write(_md_table(["tau", "frac. expelled", "dist. from hull", "E", "S"], rows) + "\n")

    out.write("## Pairwise significance of reconstruction error\n\n")
    for n, matrix in significance_matrices(records).items():
        out.write(f"### N = {n}\n\n```\n{render_matrix_text(matrix)}```\n\n")

    return out.getvalue()


def emit_outputs(
    records: list[RunRecord],
    out_dir: Path,
    cfg: GridConfig | None = None,
    sweep_records: list[RunRecord] | None = None,
) -> list[Path]:
    """Write the complete artifact set; returns the written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    def _w(path: Path):
        written.append(path)
        return path

    write_runs_csv(records, _w(out_dir / "runs.csv"))
    if records:
        write_summary_csv(summarize(records), _w(out_dir / "summary.csv"))
        write_effect_csv(effect_table(records), _w(out_dir / "effect.csv"))
        write_family_csv(family_fit_table(records), _w(out_dir / "family_fit.csv"))
        for n, matrix in significance_matrices(records).items():
            write_significance_txt(matrix, n, _w(out_dir / f"significance_{n}.txt"))
    else:
        # headers-only files so downstream tooling can still parse
        write_summary_csv([], _w(out_dir / "summary.csv"))
        write_effect_csv([], _w(out_dir / "effect.csv"))
        write_family_csv([], _w(out_dir / "family_fit.csv"))

    if sweep_records is not None:
        write_tau_sweep_csv(sweep_records, _w(out_dir / "tau_sweep.csv"))
        write_tau_summary_csv(tau_summary(sweep_records), _w(out_dir / "tau_summary.csv"))

    if cfg is not None and records:
        for n, mask in FIGURE_CELLS:
            if cell_records(records, n, mask):
                dump = prototype_dump(cfg, records, n, mask)
                write_prototypes_csv(dump, _w(out_dir / f"prototypes_{n}_{mask}.csv"))

    write_tables_md(records, sweep_records, _w(out_dir / "tables.md"))
    return written


def write_tables_md(records, sweep_records, path: Path) -> None:
    if records:
        path.write_text(render_tables_md(records, sweep_records))
    else:
        path.write_text("# Result tables\n\n(no runs)\n")
