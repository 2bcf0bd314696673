import itertools
import math

import numpy as np
import pytest

from protorecon.stats import (
    StatNotApplicable,
    cohen_d,
    compare_groups,
    holm_correct,
    mann_whitney,
    shapiro_wilk,
    significance_matrix,
    welch_t,
)

# Frozen reference values (scipy.stats 1.15) for the fixed fixtures below.
SW_FIXTURE = np.array([0.62, 0.13, 0.89, 0.45, 0.71, 0.33, 0.58, 0.24, 0.95, 0.49])
SW_FIXTURE_W = 0.9752368197730061
SW_FIXTURE_P = 0.9347070314868542

SW_BIMODAL = np.array([0.01, 0.011, 0.012, 0.013, 0.014, 0.99, 0.991, 0.992, 0.993, 0.994])
SW_BIMODAL_W = 0.6579292767010998
SW_BIMODAL_P = 0.0002733793143680945

WELCH_A = np.array([0.52, 0.61, 0.44, 0.58, 0.49, 0.55, 0.62, 0.47])
WELCH_B = np.array([0.71, 0.83, 0.65, 0.79, 0.74, 0.69])
WELCH_P = 0.00016662420584135707


def enumeration_mw_p(a, b):
    """Literal two-sided Mann-Whitney p over every n-subset of pooled midranks."""
    pooled = np.concatenate([a, b])
    big_n, n = pooled.size, len(a)
    order = np.argsort(pooled, kind="stable")
    ranks = np.empty(big_n)
    sv = pooled[order]
    i = 0
    while i < big_n:
        j = i
        while j + 1 < big_n and sv[j + 1] == sv[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    u_obs = ranks[:n].sum() - n * (n + 1) / 2
    us = np.array([
        ranks[list(comb)].sum() - n * (n + 1) / 2
        for comb in itertools.combinations(range(big_n), n)
    ])
    p_le = np.mean(us <= u_obs + 1e-9)
    p_ge = np.mean(us >= u_obs - 1e-9)
    return min(1.0, 2 * min(p_le, p_ge))


class TestShapiroWilk:
    def test_zero_variance_not_applicable(self):
        with pytest.raises(StatNotApplicable):
            shapiro_wilk(np.full(10, 0.4))

    def test_too_small_not_applicable(self):
        with pytest.raises(StatNotApplicable):
            shapiro_wilk(np.array([0.1, 0.2]))

    def test_fixture_matches_reference(self):
        w, p = shapiro_wilk(SW_FIXTURE)
        assert w == pytest.approx(SW_FIXTURE_W, abs=1e-3)
        assert p == pytest.approx(SW_FIXTURE_P, abs=1e-2)

    def test_bimodal_rejected(self):
        w, p = shapiro_wilk(SW_BIMODAL)
        assert w == pytest.approx(SW_BIMODAL_W, abs=1e-3)
        assert p == pytest.approx(SW_BIMODAL_P, abs=1e-2)
        assert p < 0.05

    def test_sorted_input_not_required(self):
        w1, p1 = shapiro_wilk(SW_FIXTURE)
        w2, p2 = shapiro_wilk(np.sort(SW_FIXTURE)[::-1])
        assert w1 == w2 and p1 == p2

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 11, 12, 25, 50])
    def test_normal_data_usually_accepted(self, n):
        rng = np.random.default_rng(n)
        accepted = sum(shapiro_wilk(rng.normal(size=n))[1] > 0.05 for _ in range(40))
        assert accepted >= 30


class TestWelch:
    def test_identical_groups(self):
        a = np.array([0.1, 0.5, 0.9, 0.3])
        assert welch_t(a, a.copy()) == pytest.approx(1.0, abs=1e-15)

    def test_fixture_matches_reference(self):
        assert welch_t(WELCH_A, WELCH_B) == pytest.approx(WELCH_P, abs=1e-6)

    def test_separated_means(self):
        rng = np.random.default_rng(0)
        a = rng.normal(0.0, 1.0, 10)
        b = rng.normal(10.0, 1.0, 10)
        assert welch_t(a, b) < 1e-6

    def test_degenerate_not_applicable(self):
        with pytest.raises(StatNotApplicable):
            welch_t(np.full(5, 1.0), np.full(5, 2.0))
        with pytest.raises(StatNotApplicable):
            welch_t(np.array([1.0]), np.array([1.0, 2.0]))


class TestMannWhitney:
    def test_identical_samples_give_p_one(self):
        a = np.array([0.1, 0.2, 0.3, 0.4])
        assert mann_whitney(a, a.copy()) == 1.0

    def test_fully_separated_five_vs_five(self):
        a = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
        assert mann_whitney(a, a + 1.0) == pytest.approx(2 / math.comb(10, 5), abs=1e-15)

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 7])
    def test_exact_equals_enumeration(self, n):
        rng = np.random.default_rng(n * 13)
        for trial in range(12):
            a = rng.uniform(0, 1, n)
            b = rng.uniform(0, 1, n)
            if trial % 3 == 0:  # force ties
                a = np.round(a, 1)
                b = np.round(b, 1)
            assert mann_whitney(a, b) == pytest.approx(enumeration_mw_p(a, b), abs=1e-12)

    def test_ten_vs_ten_fixture_equals_enumeration(self):
        a = np.array([0.51, 0.57, 0.51, 0.97, 0.61, 0.57, 0.29, 0.55, 0.47, 0.61])
        b = np.array([1.13, 0.45, 0.51, 0.59, 0.47, 0.55, 1.14, 0.58, 0.97, 0.24])
        assert mann_whitney(a, b) == pytest.approx(enumeration_mw_p(a, b), abs=1e-12)

    def test_asymptotic_branch_reasonable(self):
        rng = np.random.default_rng(5)
        a = rng.normal(0, 1, 40)
        b = rng.normal(2, 1, 40)
        assert mann_whitney(a, b) < 1e-6
        same = rng.normal(0, 1, 40)
        assert mann_whitney(same, same.copy()) == pytest.approx(1.0)


class TestCompareGroups:
    def test_routes_normal_pairs_to_welch(self):
        rng = np.random.default_rng(11)
        a = rng.normal(0.5, 0.1, 10)
        b = rng.normal(0.7, 0.1, 10)
        assert shapiro_wilk(a)[1] > 0.05 and shapiro_wilk(b)[1] > 0.05
        assert compare_groups(a, b) == welch_t(a, b)

    def test_routes_bimodal_to_mann_whitney(self):
        rng = np.random.default_rng(12)
        a = rng.normal(0.5, 0.1, 10)
        assert shapiro_wilk(SW_BIMODAL)[1] <= 0.05
        assert compare_groups(a, SW_BIMODAL) == mann_whitney(a, SW_BIMODAL)

    def test_constant_group_falls_back(self):
        rng = np.random.default_rng(13)
        a = np.full(10, 0.25)
        b = rng.normal(0.5, 0.1, 10)
        assert compare_groups(a, b) == mann_whitney(a, b)


class TestHolm:
    def test_single_p_unchanged(self):
        assert holm_correct([0.03])[0] == pytest.approx(0.03)

    def test_two_value_example(self):
        adj = holm_correct([0.01, 0.04])
        assert adj[0] == pytest.approx(0.02, abs=1e-15)
        assert adj[1] == pytest.approx(0.04, abs=1e-15)

    def test_properties_on_random_vectors(self):
        rng = np.random.default_rng(3)
        for _ in range(500):
            m = int(rng.integers(1, 30))
            p = rng.uniform(0, 1, m)
            adj = holm_correct(p)
            assert np.all(adj >= p - 1e-15)
            assert np.all(adj <= 1.0)
            order = np.argsort(p, kind="stable")
            assert np.all(np.diff(adj[order]) >= -1e-15)
            perm = rng.permutation(m)
            assert np.allclose(holm_correct(p[perm]), adj[perm], atol=1e-15)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            holm_correct([0.5, 1.2])


class TestCohenD:
    def test_equal_groups(self):
        a = np.array([0.1, 0.4, 0.7])
        assert cohen_d(a, a.copy()) == 0.0

    def test_unit_variance_unit_shift(self):
        a = np.array([-1.0, 0.0, 1.0])  # sample variance exactly 1
        assert cohen_d(a + 1.0, a) == pytest.approx(1.0, abs=1e-15)

    def test_sign_flips_when_swapped(self, rng):
        a = rng.normal(0, 1, 10)
        b = rng.normal(1, 1, 10)
        assert cohen_d(a, b) == pytest.approx(-cohen_d(b, a), abs=1e-15)

    def test_zero_pooled_sd_not_applicable(self):
        with pytest.raises(StatNotApplicable):
            cohen_d(np.full(5, 1.0), np.full(5, 2.0))


class TestSignificanceMatrix:
    def test_identical_groups_nothing_significant(self):
        rng = np.random.default_rng(21)
        base = rng.normal(0.5, 0.1, 10)
        cells = {f"{i:03b}": base.copy() for i in range(8)}
        m = significance_matrix(cells)
        off_diag = m.verdicts[~np.eye(8, dtype=bool)]
        assert np.all(off_diag == "-")
        assert np.all(np.diag(m.verdicts) == "=")

    def test_shifted_group_lights_up(self):
        rng = np.random.default_rng(22)
        cells = {f"{i:03b}": rng.normal(0.5, 0.01, 10) for i in range(8)}
        cells["100"] = cells["100"] + 1.0  # 100 sigma away
        m = significance_matrix(cells)
        idx = m.labels.index("100")
        for j in range(8):
            if j != idx:
                assert m.verdicts[idx, j] == "+"

    def test_symmetry(self):
        rng = np.random.default_rng(23)
        cells = {f"{i:03b}": rng.normal(i * 0.2, 0.1, 10) for i in range(8)}
        m = significance_matrix(cells)
        assert np.array_equal(m.verdicts, m.verdicts.T)
        assert np.allclose(m.adjusted_p, m.adjusted_p.T, equal_nan=True)
        assert np.all(m.adjusted_p[~np.eye(8, dtype=bool)] >= m.raw_p[~np.eye(8, dtype=bool)] - 1e-15)
