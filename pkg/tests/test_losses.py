import math

import numpy as np
import pytest

from protorecon.kernels import available_backends, get_backend
from protorecon.losses import (
    LossConfig,
    MASKS,
    coverage_loss,
    fit_loss,
    grad_total,
    overlap_loss,
    separation_loss,
    total_loss,
)
from protorecon.model import Dataset, Params, forward, prototypes
from tests.conftest import random_dataset, random_params

BACKENDS = available_backends()


def brute_components(p: Params, d: Dataset, tau: float):
    """Independent per-point/per-pair recomputation of all four losses."""
    n = d.size
    u = p.width
    sig = lambda j, x: math.exp(-((p.w[j] * x + p.b[j]) ** 2))
    fit = sum((forward(p, float(x)) - y) ** 2 for x, y in zip(d.x, d.y)) / n
    ov = sum(
        sig(j, x) * sig(k, x)
        for x in d.x
        for j in range(u)
        for k in range(j + 1, u)
    )
    xh = [-p.b[j] / p.w[j] for j in range(u)]
    cov = sum(min((x - xx) ** 2 for xx in xh) for x in d.x)
    sep = sum(
        math.exp(-((xh[j] - xh[k]) ** 2) / tau)
        for j in range(u)
        for k in range(j + 1, u)
    )
    return fit, ov, cov, sep


class TestFitLoss:
    def test_interpolating_model_is_zero(self):
        p = Params(a=np.zeros(2), w=np.ones(2), b=np.zeros(2), c=0.25)
        d = Dataset(x=np.array([0.1, 0.9]), y=np.array([0.25, 0.25]))
        assert fit_loss(p, d) == 0.0

    def test_constant_zero_model(self):
        p = Params(a=np.zeros(3), w=np.ones(3), b=np.zeros(3), c=0.0)
        d = Dataset(x=np.linspace(0, 1, 4), y=np.full(4, 0.5))
        assert fit_loss(p, d) == pytest.approx(0.25, abs=1e-15)

    def test_matches_per_point_recomputation(self, rng):
        for _ in range(10):
            p = random_params(rng, int(rng.integers(1, 9)))
            d = random_dataset(rng, int(rng.integers(2, 9)))
            assert fit_loss(p, d) == pytest.approx(brute_components(p, d, 0.01)[0], rel=1e-12)


class TestOverlapLoss:
    def test_single_unit_no_pairs(self, rng):
        p = random_params(rng, 1)
        d = random_dataset(rng, 5)
        assert overlap_loss(p, d) == 0.0

    def test_two_coincident_units_single_input(self):
        p = Params(a=np.zeros(2), w=np.ones(2), b=np.zeros(2), c=0.0)
        d = Dataset(x=np.array([0.0]), y=np.array([0.0]))
        assert overlap_loss(p, d) == pytest.approx(1.0, abs=1e-15)

    def test_matches_pairwise_recomputation(self, rng):
        for _ in range(10):
            p = random_params(rng, int(rng.integers(2, 8)))
            d = random_dataset(rng, int(rng.integers(2, 8)))
            assert overlap_loss(p, d) == pytest.approx(brute_components(p, d, 0.01)[1], rel=1e-12)


class TestCoverageLoss:
    def test_prototype_at_each_input(self):
        x = np.array([0.2, 0.5, 0.9])
        w = np.ones(3)
        p = Params(a=np.zeros(3), w=w, b=-x, c=0.0)
        d = Dataset(x=x, y=np.zeros(3))
        assert coverage_loss(p, d) == 0.0

    def test_two_prototypes_at_origin(self):
        p = Params(a=np.zeros(2), w=np.ones(2), b=np.zeros(2), c=0.0)
        d = Dataset(x=np.array([0.0, 1.0]), y=np.zeros(2))
        assert coverage_loss(p, d) == pytest.approx(1.0, abs=1e-15)

    def test_matches_min_recomputation(self, rng):
        for _ in range(10):
            p = random_params(rng, int(rng.integers(1, 8)))
            d = random_dataset(rng, int(rng.integers(2, 8)))
            assert coverage_loss(p, d) == pytest.approx(brute_components(p, d, 0.01)[2], rel=1e-12)


class TestSeparationLoss:
    def test_coincident_prototypes(self):
        n = 5
        p = Params(a=np.zeros(n), w=np.ones(n), b=np.full(n, -0.3), c=0.0)
        assert separation_loss(p, 0.01) == pytest.approx(math.comb(n, 2), rel=1e-12)

    def test_two_prototypes_point_one_apart(self):
        p = Params(a=np.zeros(2), w=np.ones(2), b=np.array([-0.2, -0.3]), c=0.0)
        assert separation_loss(p, 0.01) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_invalid_tau(self, rng):
        p = random_params(rng, 3)
        with pytest.raises(ValueError):
            separation_loss(p, 0.0)
        with pytest.raises(ValueError):
            separation_loss(p, -1.0)

    def test_matches_pairwise_recomputation(self, rng):
        for _ in range(10):
            p = random_params(rng, int(rng.integers(2, 8)))
            tau = float(10.0 ** rng.uniform(-3, 1))
            expected = brute_components(p, random_dataset(rng, 2), tau)[3]
            assert separation_loss(p, tau) == pytest.approx(expected, rel=1e-12)


class TestTotalLoss:
    def test_baseline_mask_is_fit_only(self, rng):
        p = random_params(rng, 5)
        d = random_dataset(rng, 5)
        bd = total_loss(p, d, LossConfig(mask="000"))
        assert bd.total == bd.fit

    def test_full_mask_zero_lambdas(self, rng):
        p = random_params(rng, 5)
        d = random_dataset(rng, 5)
        cfg = LossConfig(mask="111", lambda_o=0.0, lambda_c=0.0, lambda_s=0.0)
        bd = total_loss(p, d, cfg)
        assert bd.total == bd.fit

    def test_coverage_only_additivity(self, rng):
        p = random_params(rng, 5)
        d = random_dataset(rng, 5)
        bd = total_loss(p, d, LossConfig(mask="010", lambda_c=0.01))
        assert bd.total == pytest.approx(bd.fit + 0.01 * bd.coverage, abs=1e-15)

    @pytest.mark.parametrize("mask", MASKS)
    def test_breakdown_recombines(self, rng, mask):
        p = random_params(rng, 6)
        d = random_dataset(rng, 6)
        cfg = LossConfig(mask=mask, lambda_o=0.02, lambda_c=0.03, lambda_s=0.05, tau=0.1)
        bd = total_loss(p, d, cfg)
        recombined = (
            bd.fit
            + cfg.m_o * cfg.lambda_o * bd.overlap
            + cfg.m_c * cfg.lambda_c * bd.coverage
            + cfg.m_s * cfg.lambda_s * bd.separation
        )
        assert bd.total == pytest.approx(recombined, abs=1e-12)
        assert min(bd.fit, bd.overlap, bd.coverage, bd.separation) >= 0.0

    def test_components_reported_when_masked_off(self, rng):
        p = random_params(rng, 4)
        d = random_dataset(rng, 4)
        off = total_loss(p, d, LossConfig(mask="000"))
        on = total_loss(p, d, LossConfig(mask="111"))
        for field in ("fit", "overlap", "coverage", "separation"):
            assert getattr(off, field) == getattr(on, field)

    def test_invalid_mask_rejected(self):
        with pytest.raises(ValueError):
            LossConfig(mask="012")
        with pytest.raises(ValueError):
            LossConfig(mask="0100")


# ---------------------------------------------------------------------------
# gradients

def _total_scalar(k, d, theta, n, cfg):
    res = k.loss_and_grad(
        d.x, d.y, theta[:n], theta[n : 2 * n], theta[2 * n : 3 * n], theta[3 * n],
        cfg.m_o, cfg.m_c, cfg.m_s, cfg.lambda_o, cfg.lambda_c, cfg.lambda_s, cfg.tau,
    )
    return (
        res[0]
        + cfg.m_o * cfg.lambda_o * res[1]
        + cfg.m_c * cfg.lambda_c * res[2]
        + cfg.m_s * cfg.lambda_s * res[3]
    )


def finite_difference_gradient(k, p, d, cfg, h=1e-6):
    n = p.width
    theta = np.concatenate([p.a, p.w, p.b, [p.c]])
    grad = np.zeros_like(theta)
    for i in range(theta.size):
        plus, minus = theta.copy(), theta.copy()
        plus[i] += h
        minus[i] -= h
        grad[i] = (_total_scalar(k, d, plus, n, cfg) - _total_scalar(k, d, minus, n, cfg)) / (2 * h)
    return grad


def coverage_argmin_is_strict(p, d, margin=1e-3):
    xh = prototypes(p)
    d2 = np.sort((d.x[:, None] - xh[None, :]) ** 2, axis=1)
    return p.width == 1 or np.all(d2[:, 1] - d2[:, 0] > margin)


def sample_strict_case(rng, n_lo=2, n_hi=8):
    while True:
        p = random_params(rng, int(rng.integers(n_lo, n_hi)))
        d = random_dataset(rng, int(rng.integers(2, 8)))
        if coverage_argmin_is_strict(p, d):
            return p, d


class TestGradTotal:
    def test_zero_at_perfect_constant_fit(self):
        p = Params(a=np.zeros(3), w=np.full(3, 0.5), b=np.full(3, 0.2), c=0.4)
        d = Dataset(x=np.array([0.1, 0.6, 0.9]), y=np.full(3, 0.4))
        g = grad_total(p, d, LossConfig(mask="000"))
        assert np.all(g.da == 0.0) or np.allclose(g.da, 0.0, atol=1e-15)
        assert np.allclose(g.dw, 0.0, atol=1e-15)
        assert np.allclose(g.db, 0.0, atol=1e-15)
        assert g.dc == 0.0

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_matches_finite_differences(self, backend):
        rng = np.random.default_rng(77)
        k = get_backend(backend)
        for trial in range(40):
            p, d = sample_strict_case(rng)
            cfg = LossConfig(mask=MASKS[trial % 8], tau=0.01)
            res = k.loss_and_grad(
                d.x, d.y, p.a, p.w, p.b, p.c,
                cfg.m_o, cfg.m_c, cfg.m_s,
                cfg.lambda_o, cfg.lambda_c, cfg.lambda_s, cfg.tau,
            )
            analytic = np.concatenate([res[4], res[5], res[6], [res[7]]])
            numeric = finite_difference_gradient(k, p, d, cfg)
            denom = np.maximum.reduce([np.abs(analytic), np.abs(numeric), np.full_like(analytic, 1e-8)])
            assert np.max(np.abs(analytic - numeric) / denom) < 1e-5

    def test_coverage_term_linear_in_lambda(self, rng):
        p, d = sample_strict_case(rng)
        base = grad_total(p, d, LossConfig(mask="000"))
        g1 = grad_total(p, d, LossConfig(mask="010", lambda_c=0.01))
        g2 = grad_total(p, d, LossConfig(mask="010", lambda_c=0.02))
        contrib1 = g1.dw - base.dw
        contrib2 = g2.dw - base.dw
        assert np.allclose(contrib2, 2.0 * contrib1, rtol=1e-9, atol=1e-15)

    def test_permutation_equivariance(self, rng):
        p = random_params(rng, 7)
        d = random_dataset(rng, 5)
        cfg = LossConfig(mask="111")
        perm = rng.permutation(7)
        pp = Params(a=p.a[perm], w=p.w[perm], b=p.b[perm], c=p.c)
        bd, bd_p = total_loss(p, d, cfg), total_loss(pp, d, cfg)
        assert bd.total == pytest.approx(bd_p.total, rel=1e-12)
        g, gp = grad_total(p, d, cfg), grad_total(pp, d, cfg)
        assert np.allclose(g.da[perm], gp.da, atol=1e-12)
        assert np.allclose(g.dw[perm], gp.dw, atol=1e-12)
        assert np.allclose(g.db[perm], gp.db, atol=1e-12)
        assert g.dc == pytest.approx(gp.dc, abs=1e-12)
