"""Experiment orchestration: the 480-run ablation grid, the temperature
sweep, and aggregation of run records into summary tables.

Every run is a pure function of (master_seed, n, dataset_id, init_id,
mask) plus the shared hyperparameters, so the grid can execute in any
order or process count and still produce the identical record set.
"""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import stats
from .datagen import SeedContext, derive_seed, sample_dataset
from .losses import LossConfig, MASKS, total_loss
from .metrics import (
    expelled_fraction,
    hull_distance_mean,
    mean_activations,
    reconstruction_error,
    specialization_ratio,
)
from .model import prototypes, reconstruct
from .optim import TrainConfig, train

DEFAULT_MASTER_SEED = 15
DEFAULT_N_LIST = (3, 5, 10, 30, 50, 100)
DEFAULT_TAUS = (0.001, 0.01, 0.1, 1.0, 10.0)
OVERLAP_FREE = ("000", "001", "010", "011")
OVERLAP_ACTIVE = ("100", "101", "110", "111")

# cells whose median run gets a prototype dump for the figures
FIGURE_CELLS = ((100, "000"), (100, "010"), (100, "100"), (5, "000"), (5, "010"), (5, "111"))


@dataclass(frozen=True)
class GridConfig:
    master_seed: int = DEFAULT_MASTER_SEED
    n_list: tuple[int, ...] = DEFAULT_N_LIST
    datasets_per_n: int = 5
    inits_per_dataset: int = 2
    masks: tuple[str, ...] = MASKS
    lambda_coeff: float = 0.01
    tau: float = 0.01
    epochs: int = 200
    lr: float = 1e-3
    output_dir: Path = Path("artifacts")
    jobs: int = 1
    literal_seed_tuple: bool = False

    def loss_cfg(self, mask: str, tau: float | None = None) -> LossConfig:
        return LossConfig(
            mask=mask,
            lambda_o=self.lambda_coeff,
            lambda_c=self.lambda_coeff,
            lambda_s=self.lambda_coeff,
            tau=self.tau if tau is None else tau,
        )

    def train_cfg(self, mask: str, tau: float | None = None) -> TrainConfig:
        return TrainConfig(epochs=self.epochs, lr=self.lr, loss_cfg=self.loss_cfg(mask, tau))


@dataclass(frozen=True)
class RunRecord:
    n: int
    dataset_id: int
    init_id: int
    mask: str
    dataset_seed: int
    init_seed: int
    E: float
    S: float
    L_fit: float
    L_overlap: float
    L_coverage: float
    L_separation: float
    expelled_frac: float
    hull_dist_mean: float
    runtime_ms: float
    tau: float = 0.01  # only serialized for sweep records

    def sort_key(self):
        return (self.n, self.dataset_id, self.init_id, self.mask, self.tau)


RUNS_COLUMNS = (
    "n", "dataset_id", "init_id", "mask", "dataset_seed", "init_seed",
    "E", "S", "L_fit", "L_overlap", "L_coverage", "L_separation",
    "expelled_frac", "hull_dist_mean", "runtime_ms",
)


def _dataset_digest(x: np.ndarray, y: np.ndarray) -> str:
    return hashlib.blake2b(x.tobytes() + y.tobytes(), digest_size=16).hexdigest()


def execute_run(cfg: GridConfig, n: int, dataset_id: int, init_id: int, mask: str,
                tau: float | None = None) -> tuple[RunRecord, str]:
    """One fully seeded training run; returns the record and the dataset digest."""
    ctx = SeedContext(
        master_seed=cfg.master_seed, n=n, dataset_id=dataset_id,
        init_id=init_id, mask=mask, literal_tuple=cfg.literal_seed_tuple,
    )
    dataset_seed = derive_seed(ctx, "dataset")
    init_seed = derive_seed(ctx, "init")
    d = sample_dataset(n, dataset_seed)

    run = train(d, cfg.train_cfg(mask, tau), seed=init_seed)
    p = run.final_params
    protos = prototypes(p)
    recon = reconstruct(p)
    bd = total_loss(p, d, cfg.loss_cfg(mask, tau))

    record = RunRecord(
        n=n, dataset_id=dataset_id, init_id=init_id, mask=mask,
        dataset_seed=dataset_seed, init_seed=init_seed,
        E=reconstruction_error(d, recon),
        S=specialization_ratio(d, protos),
        L_fit=bd.fit, L_overlap=bd.overlap,
        L_coverage=bd.coverage, L_separation=bd.separation,
        expelled_frac=expelled_fraction(protos),
        hull_dist_mean=hull_distance_mean(protos, d.x),
        runtime_ms=run.elapsed_s * 1e3,
        tau=cfg.tau if tau is None else tau,
    )
    return record, _dataset_digest(d.x, d.y)


def _worker(args) -> tuple[RunRecord, str]:
    cfg, n, dataset_id, init_id, mask, tau = args
    return execute_run(cfg, n, dataset_id, init_id, mask, tau)


def _execute_all(cfg: GridConfig, specs: list[tuple]) -> list[RunRecord]:
    tasks = [(cfg, *spec) for spec in specs]
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_worker, tasks, chunksize=8))
    else:
        results = [_worker(t) for t in tasks]

    # the dataset must be bit-identical across every (init, mask) of a cell
    digests: dict[tuple[int, int], str] = {}
    for (rec, digest) in results:
        key = (rec.n, rec.dataset_id)
        if digests.setdefault(key, digest) != digest:
            raise RuntimeError(f"dataset mismatch across runs of cell {key}")
    records = [rec for rec, _ in results]
    records.sort(key=RunRecord.sort_key)
    return records


def run_grid(cfg: GridConfig) -> list[RunRecord]:
    """The full protocol grid: len(n_list) x masks x datasets x inits runs."""
    specs = [
        (n, ds, init, mask, None)
        for n in cfg.n_list
        for ds in range(cfg.datasets_per_n)
        for init in range(cfg.inits_per_dataset)
        for mask in cfg.masks
    ]
    return _execute_all(cfg, specs)


def run_tau_sweep(cfg: GridConfig, taus=DEFAULT_TAUS, n: int = 30, mask: str = "001") -> list[RunRecord]:
    """Temperature sweep on one mask, same dataset/init pairing as the grid."""
    if any(t <= 0.0 for t in taus):
        raise ValueError("taus must be positive")
    specs = [
        (n, ds, init, mask, float(tau))
        for tau in taus
        for ds in range(cfg.datasets_per_n)
        for init in range(cfg.inits_per_dataset)
    ]
    return _execute_all(cfg, specs)


# ---------------------------------------------------------------------------
# Aggregation

def _mean_std_sem(values: np.ndarray) -> tuple[float, float, float]:
    k = values.size
    mean = float(values.mean())
    std = float(values.std(ddof=1)) if k > 1 else 0.0
    return mean, std, std / math.sqrt(k)


@dataclass(frozen=True)
class SummaryCell:
    n: int
    mask: str
    k: int
    mean_E: float
    std_E: float
    sem_E: float
    mean_S: float
    std_S: float
    sem_S: float
    mean_L_fit: float
    mean_L_overlap: float
    mean_L_coverage: float
    mean_L_separation: float
    mean_expelled_frac: float
    mean_hull_dist: float
    runs: tuple[RunRecord, ...] = field(repr=False, default=())


def cell_records(records: list[RunRecord], n: int, mask: str) -> list[RunRecord]:
    # canonical order so aggregate floating-point sums ignore input order
    return sorted(
        (r for r in records if r.n == n and r.mask == mask),
        key=RunRecord.sort_key,
    )


def summarize(records: list[RunRecord]) -> list[SummaryCell]:
    """Per-(n, mask) aggregates, ordered by (n, mask)."""
    if not records:
        raise ValueError("no records to summarize")
    keys = sorted({(r.n, r.mask) for r in records})
    cells = []
    for n, mask in keys:
        runs = cell_records(records, n, mask)
        e = np.array([r.E for r in runs])
        s = np.array([r.S for r in runs])
        mean_e, std_e, sem_e = _mean_std_sem(e)
        mean_s, std_s, sem_s = _mean_std_sem(s)
        cells.append(SummaryCell(
            n=n, mask=mask, k=len(runs),
            mean_E=mean_e, std_E=std_e, sem_E=sem_e,
            mean_S=mean_s, std_S=std_s, sem_S=sem_s,
            mean_L_fit=float(np.mean([r.L_fit for r in runs])),
            mean_L_overlap=float(np.mean([r.L_overlap for r in runs])),
            mean_L_coverage=float(np.mean([r.L_coverage for r in runs])),
            mean_L_separation=float(np.mean([r.L_separation for r in runs])),
            mean_expelled_frac=float(np.mean([r.expelled_frac for r in runs])),
            mean_hull_dist=float(np.mean([r.hull_dist_mean for r in runs])),
            runs=tuple(runs),
        ))
    return cells


@dataclass(frozen=True)
class EffectRow:
    n: int
    mean_baseline: float
    mean_coverage: float
    delta_e: float
    rel_reduction_pct: float
    cohen_d: float


def effect_table(records: list[RunRecord]) -> list[EffectRow]:
    """Coverage-only vs baseline effect on E, per dataset size."""
    rows = []
    for n in sorted({r.n for r in records}):
        base = [r.E for r in cell_records(records, n, "000")]
        cov = [r.E for r in cell_records(records, n, "010")]
        if not base or not cov:
            raise ValueError(f"masks 000 and 010 required at n={n}")
        mb, mc = float(np.mean(base)), float(np.mean(cov))
        delta = mb - mc
        rel = 100.0 * delta / mb if mb != 0.0 else float("nan")
        try:
            d_val = stats.cohen_d(base, cov)
        except stats.StatNotApplicable:
            d_val = 0.0
        rows.append(EffectRow(n, mb, mc, delta, rel, d_val))
    return rows


@dataclass(frozen=True)
class FamilyFitRow:
    n: int
    fit_overlap_free: float
    fit_overlap_active: float
    ratio: float


def family_fit_table(records: list[RunRecord]) -> list[FamilyFitRow]:
    """Mean fitting loss per mask family (overlap-free vs overlap-active)."""
    records = sorted(records, key=RunRecord.sort_key)
    rows = []
    for n in sorted({r.n for r in records}):
        free = [r.L_fit for r in records if r.n == n and r.mask in OVERLAP_FREE]
        active = [r.L_fit for r in records if r.n == n and r.mask in OVERLAP_ACTIVE]
        if not free or not active:
            raise ValueError(f"both families required at n={n}")
        f, a = float(np.mean(free)), float(np.mean(active))
        rows.append(FamilyFitRow(n, f, a, a / f))
    return rows


def select_median_run(records: list[RunRecord], n: int, mask: str) -> RunRecord:
    """The ceil(k/2)-th smallest-E run of a cell (lower median for even k)."""
    cell = cell_records(records, n, mask)
    if not cell:
        raise ValueError(f"empty cell (n={n}, mask={mask})")
    cell.sort(key=lambda r: (r.E, r.dataset_id, r.init_id))
    return cell[(len(cell) - 1) // 2]


def significance_matrices(records: list[RunRecord], alpha: float = stats.ALPHA) -> dict[int, stats.PairwiseMatrix]:
    """Per-n Holm-corrected pairwise matrix over the masks present."""
    out = {}
    for n in sorted({r.n for r in records}):
        masks = [m for m in MASKS if cell_records(records, n, m)]
        cells = {m: np.array([r.E for r in cell_records(records, n, m)]) for m in masks}
        out[n] = stats.significance_matrix(cells, alpha=alpha)
    return out


def tau_summary(sweep_records: list[RunRecord]) -> list[dict]:
    """Per-tau aggregates of the sweep (expelled fraction, hull distance, E, S)."""
    sweep_records = sorted(sweep_records, key=RunRecord.sort_key)
    rows = []
    for tau in sorted({r.tau for r in sweep_records}):
        runs = [r for r in sweep_records if r.tau == tau]
        e = np.array([r.E for r in runs])
        s = np.array([r.S for r in runs])
        mean_e, std_e, sem_e = _mean_std_sem(e)
        mean_s, std_s, sem_s = _mean_std_sem(s)
        rows.append({
            "tau": tau,
            "k": len(runs),
            "mean_expelled_frac": float(np.mean([r.expelled_frac for r in runs])),
            "mean_hull_dist": float(np.mean([r.hull_dist_mean for r in runs])),
            "mean_E": mean_e, "std_E": std_e, "sem_E": sem_e,
            "mean_S": mean_s, "std_S": std_s, "sem_S": sem_s,
        })
    return rows


def prototype_dump(cfg: GridConfig, records: list[RunRecord], n: int, mask: str) -> dict:
    """Re-run the cell's median-E run and capture prototype-level detail."""
    rec = select_median_run(records, n, mask)
    d = sample_dataset(n, rec.dataset_seed)
    run = train(d, cfg.train_cfg(mask, rec.tau), seed=rec.init_seed)
    p = run.final_params
    recon = reconstruct(p)
    order = np.argsort(-p.b / p.w, kind="stable")
    acts = mean_activations(p, d)[order]
    return {
        "n": n, "mask": mask,
        "dataset_id": rec.dataset_id, "init_id": rec.init_id, "E": rec.E,
        "x_hat": recon.x_hat, "mean_activation": acts, "y_hat": recon.y_hat,
        "x": d.x, "y": d.y,
    }
