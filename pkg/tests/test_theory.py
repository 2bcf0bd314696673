import math

import numpy as np
import pytest

from protorecon.losses import coverage_loss, separation_loss
from protorecon.model import Dataset, Params
from protorecon.theory import (
    SLACK,
    check_coverage_monotone,
    overlap_bound,
    run_coverage_suite,
    run_overlap_suite,
    run_separation_suite,
    separation_bound,
)
from tests.conftest import random_dataset


def params_with_prototypes(xh, w_mag=1.0):
    xh = np.asarray(xh, dtype=float)
    w = np.full(xh.size, w_mag)
    return Params(a=np.zeros(xh.size), w=w, b=-w * xh, c=0.0)


class TestCoverageMonotone:
    def test_expelled_right_prototype(self, rng):
        d = random_dataset(rng, 6)
        p = params_with_prototypes([0.2, 0.8, 1.5])
        assert check_coverage_monotone(p, d, j=2, eps=0.1)

    def test_irrelevant_prototype_leaves_value_unchanged(self, rng):
        d = random_dataset(rng, 6)
        p = params_with_prototypes([0.2, 0.8, 1.5])
        before = coverage_loss(p, d)
        moved = p.copy()
        moved.b[2] = -p.w[2] * (1.5 + 0.1)
        assert coverage_loss(moved, d) == pytest.approx(before, abs=1e-15)

    def test_argmin_prototype_strictly_increases_value(self):
        d = Dataset(x=np.array([0.4, 0.6]), y=np.zeros(2))
        p = params_with_prototypes([1.2, 1.3])
        before = coverage_loss(p, d)
        moved = p.copy()
        moved.b[0] = -p.w[0] * 1.4
        assert coverage_loss(moved, d) > before
        assert check_coverage_monotone(p, d, j=0, eps=0.2)

    def test_inside_prototype_rejected(self, rng):
        d = random_dataset(rng, 4)
        p = params_with_prototypes([0.5, 1.5])
        with pytest.raises(ValueError):
            check_coverage_monotone(p, d, j=0, eps=0.1)

    def test_left_side(self, rng):
        d = random_dataset(rng, 4)
        p = params_with_prototypes([-0.3, 0.5])
        assert check_coverage_monotone(p, d, j=0, eps=0.5)


class TestOverlapBound:
    def test_coincident_prototypes_trivial_bound(self, rng):
        n = 6
        p = params_with_prototypes(np.full(n, 0.4))
        d = random_dataset(rng, 5)
        lhs, rhs = overlap_bound(p, d)
        assert rhs == pytest.approx(math.comb(n, 2) * d.size, rel=1e-12)
        assert lhs <= rhs + SLACK

    def test_wide_gap_plugin(self, rng):
        # gap 20 with |w| = 0.1 gives the bound C(n,2)*n_pts*exp(-2)
        p = params_with_prototypes([0.0, 20.0], w_mag=0.1)
        d = random_dataset(rng, 3)
        lhs, rhs = overlap_bound(p, d)
        assert rhs == pytest.approx(1 * 3 * math.exp(-2.0), rel=1e-12)
        assert lhs <= rhs + SLACK

    def test_width_one_rejected(self, rng):
        p = params_with_prototypes([0.5])
        with pytest.raises(ValueError):
            overlap_bound(p, random_dataset(rng, 3))

    def test_random_suite(self):
        report = run_overlap_suite(n_configs=1000, seed=10)
        assert report.passed, f"violation {report.max_violation} at seed {report.worst_config_seed}"
        assert report.config_count == 1000

    def test_tightness_sweep(self, rng):
        d = random_dataset(rng, 4)
        prev_rhs = np.inf
        for gap in (1.0, 2.0, 5.0, 10.0, 20.0):
            p = params_with_prototypes([0.0, gap], w_mag=0.5)
            lhs, rhs = overlap_bound(p, d)
            assert lhs <= rhs + SLACK
            assert rhs < prev_rhs
            prev_rhs = rhs
        assert rhs < 1e-10


class TestSeparationBound:
    def test_equality_at_zero_gap(self):
        n = 4
        p = params_with_prototypes(np.full(n, 0.7))
        lhs, rhs = separation_bound(p, 0.01)
        assert lhs == pytest.approx(math.comb(n, 2), rel=1e-12)
        assert rhs == pytest.approx(math.comb(n, 2), rel=1e-12)

    def test_equality_for_single_pair(self):
        p = params_with_prototypes([0.1, 0.6])
        tau = 0.05
        lhs, rhs = separation_bound(p, tau)
        assert lhs == pytest.approx(math.exp(-0.25 / tau), rel=1e-12)
        assert lhs == pytest.approx(rhs, rel=1e-12)

    def test_invalid_args(self):
        p = params_with_prototypes([0.1, 0.6])
        with pytest.raises(ValueError):
            separation_bound(p, 0.0)
        with pytest.raises(ValueError):
            separation_bound(params_with_prototypes([0.5]), 0.1)

    def test_random_suite(self):
        report = run_separation_suite(n_configs=1000, seed=20)
        assert report.passed, f"violation {report.max_violation} at seed {report.worst_config_seed}"

    def test_bound_matches_separation_loss_definition(self, rng):
        for _ in range(20):
            xh = rng.uniform(-2, 3, int(rng.integers(2, 9)))
            p = params_with_prototypes(xh)
            tau = float(10.0 ** rng.uniform(-2, 1))
            lhs, rhs = separation_bound(p, tau)
            assert lhs == pytest.approx(separation_loss(p, tau), rel=1e-12)
            assert lhs <= rhs + SLACK


class TestCoverageSuite:
    def test_random_suite(self):
        report = run_coverage_suite(n_configs=1000, seed=30)
        assert report.passed, f"violation {report.max_violation} at seed {report.worst_config_seed}"
        assert report.config_count == 1000
