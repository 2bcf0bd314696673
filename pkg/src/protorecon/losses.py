"""Fitting loss, the three structural losses, masked total, and gradients.

Component conventions:
  fit        = (1/N) sum_i (f(x_i) - y_i)^2
  overlap    = sum_i sum_{j<k} sig(w_j x_i + b_j) sig(w_k x_i + b_k)
  coverage   = sum_i min_j (x_i - xh_j)^2
  separation = sum_{j<k} exp(-(xh_j - xh_k)^2 / tau)
  total      = fit + m_o*l_o*overlap + m_c*l_c*coverage + m_s*l_s*separation

All four components are evaluated on every call regardless of the mask;
the mask gates only the total and the gradient.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .model import Dataset, Params

MASKS = ("000", "001", "010", "011", "100", "101", "110", "111")


@dataclass(frozen=True)
class LossConfig:
    """Ablation mask plus coefficients. Mask order is overlap-coverage-separation."""

    mask: str = "000"
    lambda_o: float = 0.01
    lambda_c: float = 0.01
    lambda_s: float = 0.01
    tau: float = 0.01

    def __post_init__(self):
        if self.mask not in MASKS:
            raise ValueError(f"mask must be one of {MASKS}, got {self.mask!r}")
        if self.tau <= 0.0:
            raise ValueError("tau must be positive")
        if min(self.lambda_o, self.lambda_c, self.lambda_s) < 0.0:
            raise ValueError("lambda coefficients must be nonnegative")

    @property
    def m_o(self) -> int:
        return int(self.mask[0])

    @property
    def m_c(self) -> int:
        return int(self.mask[1])

    @property
    def m_s(self) -> int:
        return int(self.mask[2])


@dataclass(frozen=True)
class LossBreakdown:
    fit: float
    overlap: float
    coverage: float
    separation: float
    total: float


@dataclass
class Gradient:
    """Partials of the masked total loss, shaped like Params."""

    da: np.ndarray
    dw: np.ndarray
    db: np.ndarray
    dc: float


def _eval(p: Params, d: Dataset, cfg: LossConfig, backend=None):
    k = backend if backend is not None else kernels.get_backend()
    return k.loss_and_grad(
        d.x, d.y, p.a, p.w, p.b, p.c,
        cfg.m_o, cfg.m_c, cfg.m_s,
        cfg.lambda_o, cfg.lambda_c, cfg.lambda_s, cfg.tau,
    )


def fit_loss(p: Params, d: Dataset) -> float:
    return _eval(p, d, LossConfig())[0]


def overlap_loss(p: Params, d: Dataset) -> float:
    return _eval(p, d, LossConfig())[1]


def coverage_loss(p: Params, d: Dataset) -> float:
    return _eval(p, d, LossConfig())[2]


def separation_loss(p: Params, tau: float) -> float:
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    # separation depends on the dataset only through its existence; feed a
    # dummy point so the fused kernel can run.
    dummy = Dataset(x=np.zeros(1), y=np.zeros(1))
    cfg = LossConfig(tau=tau)
    return _eval(p, dummy, cfg)[3]


def total_loss(p: Params, d: Dataset, cfg: LossConfig) -> LossBreakdown:
    fit, ov, cov, sep = _eval(p, d, cfg)[:4]
    total = (
        fit
        + cfg.m_o * cfg.lambda_o * ov
        + cfg.m_c * cfg.lambda_c * cov
        + cfg.m_s * cfg.lambda_s * sep
    )
    return LossBreakdown(fit=fit, overlap=ov, coverage=cov, separation=sep, total=total)


def grad_total(p: Params, d: Dataset, cfg: LossConfig) -> Gradient:
    _, _, _, _, da, dw, db, dc = _eval(p, d, cfg)
    return Gradient(da=da, dw=dw, db=db, dc=float(dc))


def loss_and_grad(p: Params, d: Dataset, cfg: LossConfig) -> tuple[LossBreakdown, Gradient]:
    """Breakdown and gradient in one fused kernel call (the training path)."""
    fit, ov, cov, sep, da, dw, db, dc = _eval(p, d, cfg)
    total = (
        fit
        + cfg.m_o * cfg.lambda_o * ov
        + cfg.m_c * cfg.lambda_c * cov
        + cfg.m_s * cfg.lambda_s * sep
    )
    bd = LossBreakdown(fit=fit, overlap=ov, coverage=cov, separation=sep, total=total)
    return bd, Gradient(da=da, dw=dw, db=db, dc=float(dc))
