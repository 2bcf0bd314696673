"""Numeric verification of the structural-loss bounds.

Three executable checks: expelling a prototype further cannot lower the
coverage loss; the overlap loss is bounded by C(N,2)*N*exp(-w_min^2*D^2/2)
for minimum prototype gap D; the separation loss is bounded by
C(N,2)*exp(-D^2/tau). Each has a random-configuration suite plus a few
adversarial boundary configs; violations beyond SLACK fail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .losses import coverage_loss, overlap_loss, separation_loss
from .model import Dataset, Params, W_FLOOR, prototypes

SLACK = 1e-12


def check_coverage_monotone(p: Params, d: Dataset, j: int, eps: float) -> bool:
    """Move expelled prototype j by eps further from [0,1]; coverage must not drop."""
    if eps <= 0.0:
        raise ValueError("eps must be positive")
    xh = prototypes(p)
    if 0.0 <= xh[j] <= 1.0:
        raise ValueError(f"prototype {j} at {xh[j]:.4f} is not expelled")
    before = coverage_loss(p, d)
    direction = 1.0 if xh[j] > 1.0 else -1.0
    moved = p.copy()
    moved.b[j] = -p.w[j] * (xh[j] + direction * eps)
    after = coverage_loss(moved, d)
    return after >= before - SLACK


def _min_gap(xh: np.ndarray) -> float:
    s = np.sort(xh)
    return float(np.min(np.diff(s)))


def overlap_bound(p: Params, d: Dataset) -> tuple[float, float]:
    """(overlap loss, its separation-based upper bound)."""
    n = p.width
    if n < 2:
        raise ValueError("bound needs width >= 2")
    w_min = float(np.min(np.abs(p.w)))
    delta = _min_gap(prototypes(p))
    lhs = overlap_loss(p, d)
    rhs = math.comb(n, 2) * d.size * math.exp(-(w_min**2) * delta**2 / 2.0)
    return lhs, rhs


def separation_bound(p: Params, tau: float) -> tuple[float, float]:
    """(separation loss, its minimum-gap upper bound)."""
    n = p.width
    if n < 2:
        raise ValueError("bound needs width >= 2")
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    delta = _min_gap(prototypes(p))
    lhs = separation_loss(p, tau)
    rhs = math.comb(n, 2) * math.exp(-(delta**2) / tau)
    return lhs, rhs


@dataclass
class BoundReport:
    config_count: int
    max_violation: float  # <= SLACK when the suite passes
    worst_config_seed: int

    @property
    def passed(self) -> bool:
        return self.max_violation <= SLACK


def _random_config(rng: np.random.Generator, n_units: int, proto_span: float = 3.0):
    """Params with prototypes placed directly (b derived), plus a dataset."""
    n_pts = int(rng.integers(2, 31))
    x = np.sort(rng.uniform(0.0, 1.0, n_pts))
    y = rng.uniform(0.0, 1.0, n_pts)
    d = Dataset(x=x, y=y)
    a = rng.uniform(-1.0, 1.0, n_units)
    sign = np.where(rng.integers(0, 2, n_units) == 1, 1.0, -1.0)
    w = sign * rng.uniform(W_FLOOR, 3.0, n_units)
    xh = rng.uniform(-proto_span, proto_span, n_units)
    b = -w * xh
    return Params(a=a, w=w, b=b, c=float(rng.uniform(-0.5, 0.5))), d


def run_overlap_suite(n_configs: int = 10000, seed: int = 0) -> BoundReport:
    worst = -np.inf
    worst_seed = seed
    count = 0
    for i in range(n_configs):
        rng = np.random.default_rng(seed + i)
        n_units = int(rng.integers(2, 21))
        p, d = _random_config(rng, n_units)
        if i % 10 == 0:
            # adversarial: coincident prototypes and floor weights
            p.w[:] = np.where(p.w >= 0, W_FLOOR, -W_FLOOR)
            p.b[:] = -p.w * p.b[0] / p.w[0]
        lhs, rhs = overlap_bound(p, d)
        v = lhs - rhs
        if v > worst:
            worst, worst_seed = v, seed + i
        count += 1
    return BoundReport(count, float(worst), worst_seed)


def run_separation_suite(n_configs: int = 10000, seed: int = 0) -> BoundReport:
    worst = -np.inf
    worst_seed = seed
    count = 0
    for i in range(n_configs):
        rng = np.random.default_rng(seed + i)
        n_units = int(rng.integers(2, 21))
        p, _ = _random_config(rng, n_units, proto_span=25.0)
        tau = float(10.0 ** rng.uniform(-3, 1))
        if i % 10 == 0:
            p.b[:] = -p.w * (-p.b[0] / p.w[0])  # all prototypes coincide
        lhs, rhs = separation_bound(p, tau)
        v = lhs - rhs
        if v > worst:
            worst, worst_seed = v, seed + i
        count += 1
    return BoundReport(count, float(worst), worst_seed)


def run_coverage_suite(n_configs: int = 10000, seed: int = 0) -> BoundReport:
    worst = -np.inf
    worst_seed = seed
    count = 0
    for i in range(n_configs):
        rng = np.random.default_rng(seed + i)
        n_units = int(rng.integers(1, 21))
        p, d = _random_config(rng, n_units)
        j = int(rng.integers(0, n_units))
        side = 1.0 if rng.integers(0, 2) == 1 else -1.0
        # force prototype j outside [0,1], sometimes barely so
        margin = 1e-9 if i % 7 == 0 else float(rng.uniform(1e-4, 2.0))
        xh_j = 1.0 + margin if side > 0 else -margin
        p.b[j] = -p.w[j] * xh_j
        eps = float(rng.uniform(1e-6, 1.0))
        before = coverage_loss(p, d)
        moved = p.copy()
        moved.b[j] = -p.w[j] * (xh_j + side * eps)
        after = coverage_loss(moved, d)
        v = before - after
        if v > worst:
            worst, worst_seed = v, seed + i
        count += 1
    return BoundReport(count, float(worst), worst_seed)
