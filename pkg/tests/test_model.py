import math

import numpy as np
import pytest

from protorecon.model import (
    Params,
    W_FLOOR,
    forward,
    init_params,
    project_weights,
    prototypes,
    reconstruct,
)


class TestInitParams:
    def test_deterministic_given_seed(self):
        p1 = init_params(5, np.random.default_rng(7))
        p2 = init_params(5, np.random.default_rng(7))
        assert np.array_equal(p1.a, p2.a)
        assert np.array_equal(p1.w, p2.w)
        assert np.array_equal(p1.b, p2.b)
        assert p1.c == p2.c

    def test_w_magnitude_in_init_interval(self, rng):
        for _ in range(50):
            p = init_params(20, rng)
            mag = np.abs(p.w)
            assert np.all(mag >= W_FLOOR)
            assert np.all(mag < 1.0)

    def test_a_b_c_bounds(self, rng):
        p = init_params(200, rng)
        for v in (p.a, p.b, np.array([p.c])):
            assert np.all(np.abs(v) < 0.1)

    def test_c_mean_near_zero_over_many_draws(self):
        rng = np.random.default_rng(2)
        cs = [init_params(1, rng).c for _ in range(10_000)]
        assert abs(np.mean(cs)) < 0.01

    def test_w_sign_is_fair(self):
        rng = np.random.default_rng(3)
        p = init_params(10_000, rng)
        assert abs(np.mean(p.w > 0) - 0.5) < 0.02

    def test_zero_width_rejected(self, rng):
        with pytest.raises(ValueError):
            init_params(0, rng)


class TestForward:
    def test_constant_model(self):
        p = Params(a=np.zeros(3), w=np.full(3, 0.5), b=np.zeros(3), c=0.3)
        for x in (0.0, 0.4, 1.0, -2.0):
            assert forward(p, x) == pytest.approx(0.3, abs=0)

    def test_single_unit_at_peak(self):
        p = Params(a=np.array([1.0]), w=np.array([1.0]), b=np.array([0.0]), c=0.0)
        assert forward(p, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_single_unit_off_peak(self):
        p = Params(a=np.array([1.0]), w=np.array([1.0]), b=np.array([0.0]), c=0.0)
        assert forward(p, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-12)

    def test_vector_input(self, rng):
        from tests.conftest import random_params

        p = random_params(rng, 6)
        xs = rng.uniform(0, 1, 11)
        vec = forward(p, xs)
        assert vec.shape == (11,)
        for xi, vi in zip(xs, vec):
            assert forward(p, float(xi)) == pytest.approx(vi, abs=1e-15)

    def test_linear_in_output_layer(self, rng):
        from tests.conftest import random_params

        p = random_params(rng, 8)
        doubled = Params(a=2 * p.a, w=p.w.copy(), b=p.b.copy(), c=2 * p.c)
        zeroed = Params(a=np.zeros(8), w=p.w.copy(), b=p.b.copy(), c=0.0)
        for x in rng.uniform(-1, 2, 20):
            lhs = forward(doubled, float(x))
            rhs = 2 * forward(p, float(x)) - forward(zeroed, float(x))
            assert lhs == pytest.approx(rhs, abs=1e-12)


class TestPrototypes:
    @pytest.mark.parametrize(
        "w, b, expected",
        [(2.0, -1.0, 0.5), (-0.5, 0.25, 0.5), (0.1, 1.0, -10.0)],
    )
    def test_closed_form(self, w, b, expected):
        p = Params(a=np.array([1.0]), w=np.array([w]), b=np.array([b]), c=0.0)
        assert prototypes(p)[0] == pytest.approx(expected, rel=1e-12)

    def test_scale_invariance(self, rng):
        from tests.conftest import random_params

        p = random_params(rng, 10, w_lo=0.5)
        base = prototypes(p)
        for t in (0.2, 0.7, 1.0, 3.5):
            scaled = Params(a=p.a, w=t * p.w, b=t * p.b, c=p.c)
            assert np.allclose(prototypes(scaled), base, atol=1e-12)

    def test_rejects_sub_floor_weights(self):
        p = Params(a=np.ones(2), w=np.array([0.5, 0.05]), b=np.zeros(2), c=0.0)
        with pytest.raises(ValueError):
            prototypes(p)


class TestReconstruct:
    def test_constant_model_pairs(self):
        # prototypes at 0.2 and 0.8, output everywhere 0.5
        w = np.array([1.0, 1.0])
        b = np.array([-0.2, -0.8])
        p = Params(a=np.zeros(2), w=w, b=b, c=0.5)
        r = reconstruct(p)
        assert np.allclose(r.x_hat, [0.2, 0.8])
        assert np.allclose(r.y_hat, [0.5, 0.5])

    def test_sorted_even_when_units_are_not(self, rng):
        from tests.conftest import random_params

        for _ in range(20):
            p = random_params(rng, 7)
            r = reconstruct(p)
            assert np.all(np.diff(r.x_hat) >= 0)
            assert r.size == p.width

    def test_y_hat_matches_forward(self, rng):
        from tests.conftest import random_params

        p = random_params(rng, 9)
        r = reconstruct(p)
        assert np.array_equal(np.asarray(forward(p, r.x_hat)), r.y_hat)

    def test_tie_keeps_lower_unit_first(self):
        # both prototypes at exactly 0.5 but with different outputs is
        # impossible for a shared model; check stability via the sort order
        w = np.array([2.0, 1.0])
        b = np.array([-1.0, -0.5])
        p = Params(a=np.array([0.3, -0.2]), w=w, b=b, c=0.1)
        r = reconstruct(p)
        assert np.allclose(r.x_hat, [0.5, 0.5])
        order = np.argsort(prototypes(p), kind="stable")
        assert list(order) == [0, 1]


class TestProjectWeights:
    @pytest.mark.parametrize(
        "w_in, w_out",
        [(0.05, 0.1), (-0.02, -0.1), (0.5, 0.5), (0.0, 0.1), (-0.1, -0.1)],
    )
    def test_per_weight(self, w_in, w_out):
        p = Params(a=np.ones(1), w=np.array([w_in]), b=np.ones(1), c=0.0)
        assert project_weights(p).w[0] == w_out

    def test_idempotent(self, rng):
        p = Params(a=np.zeros(4), w=rng.uniform(-0.2, 0.2, 4), b=np.zeros(4), c=0.0)
        once = project_weights(p)
        twice = project_weights(once)
        assert np.array_equal(once.w, twice.w)

    def test_other_fields_untouched(self, rng):
        from tests.conftest import random_params

        p = random_params(rng, 5)
        q = project_weights(p)
        assert np.array_equal(p.a, q.a)
        assert np.array_equal(p.b, q.b)
        assert p.c == q.c
