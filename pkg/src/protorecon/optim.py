"""Adam with post-step weight projection and the full-batch training loop."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .losses import Gradient, LossBreakdown, LossConfig, loss_and_grad
from .model import Dataset, Params, W_FLOOR, init_params, project_weights


@dataclass
class AdamState:
    """First/second moment accumulators shaped like Params, plus step count."""

    m_a: np.ndarray
    m_w: np.ndarray
    m_b: np.ndarray
    m_c: float
    v_a: np.ndarray
    v_w: np.ndarray
    v_b: np.ndarray
    v_c: float
    t: int = 0

    @classmethod
    def zeros(cls, n: int) -> "AdamState":
        return cls(
            m_a=np.zeros(n), m_w=np.zeros(n), m_b=np.zeros(n), m_c=0.0,
            v_a=np.zeros(n), v_w=np.zeros(n), v_b=np.zeros(n), v_c=0.0,
            t=0,
        )


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    lr: float = 1e-3
    loss_cfg: LossConfig = field(default_factory=LossConfig)
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    record_history: bool = False

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.lr <= 0.0:
            raise ValueError("lr must be positive")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ValueError("betas must lie in [0, 1)")
        if self.eps <= 0.0:
            raise ValueError("eps must be positive")


@dataclass
class TrainedRun:
    final_params: Params
    seed: int
    elapsed_s: float
    history: list[LossBreakdown] | None = None


def _adam_update(m, v, g, beta1, beta2):
    m[:] = beta1 * m + (1.0 - beta1) * g
    v[:] = beta2 * v + (1.0 - beta2) * (g * g)


def adam_step(state: AdamState, p: Params, g: Gradient, cfg: TrainConfig) -> tuple[AdamState, Params]:
    """One bias-corrected Adam step followed by the weight projection.

    Mutates and returns `state`; returns a fresh Params (inputs untouched).
    """
    state.t += 1
    bc1 = 1.0 - cfg.beta1 ** state.t
    bc2 = 1.0 - cfg.beta2 ** state.t

    _adam_update(state.m_a, state.v_a, g.da, cfg.beta1, cfg.beta2)
    _adam_update(state.m_w, state.v_w, g.dw, cfg.beta1, cfg.beta2)
    _adam_update(state.m_b, state.v_b, g.db, cfg.beta1, cfg.beta2)
    state.m_c = cfg.beta1 * state.m_c + (1.0 - cfg.beta1) * g.dc
    state.v_c = cfg.beta2 * state.v_c + (1.0 - cfg.beta2) * (g.dc * g.dc)

    def step(theta, m, v):
        return theta - cfg.lr * (m / bc1) / (np.sqrt(v / bc2) + cfg.eps)

    new = Params(
        a=step(p.a, state.m_a, state.v_a),
        w=step(p.w, state.m_w, state.v_w),
        b=step(p.b, state.m_b, state.v_b),
        c=float(step(p.c, state.m_c, state.v_c)),
    )
    return state, project_weights(new)


def train(d: Dataset, cfg: TrainConfig, seed: int) -> TrainedRun:
    """Train a width-N model on the N-point dataset: one full-batch Adam
    step per epoch, projecting after every step.

    Deterministic: output is a pure function of (d, cfg, seed). Raises if
    any parameter goes non-finite.
    """
    t0 = time.perf_counter()
    n = d.size
    rng = np.random.default_rng(seed)
    p = init_params(n, rng)
    state = AdamState.zeros(n)
    history: list[LossBreakdown] | None = [] if cfg.record_history else None

    for _ in range(cfg.epochs):
        bd, g = loss_and_grad(p, d, cfg.loss_cfg)
        if history is not None:
            history.append(bd)
        state, p = adam_step(state, p, g, cfg)
        assert np.all(np.abs(p.w) >= W_FLOOR - 1e-15), "projection invariant violated"

    if not (
        np.all(np.isfinite(p.a))
        and np.all(np.isfinite(p.w))
        and np.all(np.isfinite(p.b))
        and np.isfinite(p.c)
    ):
        raise FloatingPointError(f"non-finite parameters after training (seed={seed})")

    return TrainedRun(
        final_params=p,
        seed=seed,
        elapsed_s=time.perf_counter() - t0,
        history=history,
    )
