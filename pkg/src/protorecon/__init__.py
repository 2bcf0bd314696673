"""Prototype-based reconstruction workbench for tiny Gaussian MLPs."""

from .datagen import SeedContext, derive_seed, min_separation, sample_dataset
from .harness import GridConfig, RunRecord, run_grid, run_tau_sweep, summarize
from .losses import LossBreakdown, LossConfig, MASKS, total_loss
from .metrics import reconstruction_error, specialization_ratio
from .model import Dataset, Params, Reconstruction, forward, init_params, prototypes, reconstruct
from .optim import TrainConfig, TrainedRun, train

__version__ = "0.1.0"

__all__ = [
    "Dataset", "GridConfig", "LossBreakdown", "LossConfig", "MASKS",
    "Params", "Reconstruction", "RunRecord", "SeedContext", "TrainConfig",
    "TrainedRun", "derive_seed", "forward", "init_params", "min_separation",
    "prototypes", "reconstruct", "reconstruction_error", "run_grid",
    "run_tau_sweep", "sample_dataset", "specialization_ratio", "summarize",
    "total_loss", "train",
]
