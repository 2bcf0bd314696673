"""Reconstruction error, specialization ratio, and expulsion diagnostics."""

from __future__ import annotations

import numpy as np

from . import kernels
from .model import Dataset, Params, Reconstruction


def assign_min_cost(cost: np.ndarray) -> np.ndarray:
    """Exact minimum-total-cost assignment; perm[i] is the column of row i."""
    cost = np.asarray(cost, dtype=float)
    if cost.ndim != 2 or cost.shape[0] != cost.shape[1]:
        raise ValueError("cost matrix must be square")
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost matrix must be finite")
    return kernels.get_backend().hungarian(cost)


def reconstruction_error(d: Dataset, r: Reconstruction) -> float:
    """Permutation-invariant mean L1 distance between data and reconstruction.

    (1/N) min over assignments of sum_i |x_i - xh_{pi(i)}| + |y_i - yh_{pi(i)}|.
    """
    n = d.size
    if r.size != n:
        raise ValueError(f"size mismatch: dataset {n} vs reconstruction {r.size}")
    cost = np.abs(d.x[:, None] - r.x_hat[None, :]) + np.abs(d.y[:, None] - r.y_hat[None, :])
    perm = assign_min_cost(cost)
    return float(cost[np.arange(n), perm].sum()) / n


def specialization_ratio(d: Dataset, protos: np.ndarray) -> float:
    """Fraction of distinct units chosen as some input's nearest prototype.

    Argmin ties go to the lowest unit index.
    """
    d2 = (d.x[:, None] - protos[None, :]) ** 2
    winners = np.argmin(d2, axis=1)
    return len(np.unique(winners)) / protos.shape[0]


def expelled_fraction(protos: np.ndarray) -> float:
    """Fraction of prototypes strictly outside [0,1]."""
    if protos.size == 0:
        return 0.0
    return float(np.mean((protos < 0.0) | (protos > 1.0)))


def hull_distance_mean(protos: np.ndarray, xs: np.ndarray) -> float:
    """Mean distance from the input hull [min xs, max xs], zero inside."""
    if xs.size == 0:
        raise ValueError("xs must be nonempty")
    lo, hi = float(np.min(xs)), float(np.max(xs))
    dist = np.maximum(0.0, np.maximum(lo - protos, protos - hi))
    return float(np.mean(dist))


def mean_activation(p: Params, d: Dataset, j: int) -> float:
    """Mean Gaussian activation of unit j over the training inputs."""
    z = p.w[j] * d.x + p.b[j]
    return float(np.mean(np.exp(-z * z)))


def mean_activations(p: Params, d: Dataset) -> np.ndarray:
    """Per-unit mean activations as a vector (unit index order)."""
    z = np.outer(d.x, p.w) + p.b
    return np.exp(-z * z).mean(axis=0)
