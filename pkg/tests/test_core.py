"""Group-agnostic layer: sinc helpers, metric, curves, field, integration."""

import numpy as np
import pytest

from groupflow import (
    conditional_field,
    distance,
    exp_curve,
    integrate_field,
    left_pushforward,
    make_group,
    metric_sq_norm,
    recip_sinc,
    sinc,
)
from groupflow.core import check_weights


class TestSinc:
    def test_matches_direct_evaluation_away_from_zero(self):
        x = np.linspace(1e-3, 3.0, 500)
        assert np.allclose(sinc(x), np.sin(x) / x, rtol=0, atol=1e-15)
        assert np.allclose(recip_sinc(x), x / np.sin(x), rtol=0, atol=1e-12)

    def test_series_branch_continuous_at_cutoff(self):
        # Compare the series branch against direct evaluation on both sides
        # of the switch point; they must agree to within one ulp.
        for x in (1e-5, 5e-5, 9.9e-5, 1.01e-4, 2e-4):
            assert sinc(x) == pytest.approx(np.sin(x) / x, abs=3e-16)
            assert recip_sinc(x) == pytest.approx(x / np.sin(x), abs=3e-16)

    def test_values_at_zero(self):
        assert sinc(0.0) == 1.0
        assert recip_sinc(0.0) == 1.0

    def test_symmetry(self):
        x = np.array([0.3, 1.2, 2.9, 1e-6])
        assert np.array_equal(sinc(x), sinc(-x))
        assert np.array_equal(recip_sinc(x), recip_sinc(-x))

    def test_reciprocal_relation(self):
        x = np.linspace(-3.0, 3.0, 301)
        assert np.allclose(sinc(x) * recip_sinc(x), 1.0, atol=1e-13)


class TestMetric:
    def test_zero_vector(self):
        g = make_group("se2")
        assert metric_sq_norm(g, np.zeros(3)) == 0.0

    def test_unit_weights_euclidean(self):
        g = make_group("se2")
        assert metric_sq_norm(g, np.array([3.0, 4.0, 0.0])) == 25.0

    def test_weighted_sum(self):
        g = make_group("se2")
        got = metric_sq_norm(g, np.array([1.0, 1.0, 1.0]), np.array([2.0, 1.0, 1.0]))
        assert got == 4.0

    def test_rejects_bad_weights(self):
        g = make_group("se2")
        with pytest.raises(ValueError):
            check_weights(g, np.array([1.0, -1.0, 1.0]))
        with pytest.raises(ValueError):
            check_weights(g, np.array([1.0, 1.0]))

    def test_left_pushforward_is_isometry(self, any_group, rng):
        g = any_group.random_elements(rng, 10)
        alg = rng.standard_normal((10, any_group.dim))
        pushed = left_pushforward(any_group, g, alg)
        assert np.array_equal(
            metric_sq_norm(any_group, pushed), metric_sq_norm(any_group, alg)
        )


class TestExpCurve:
    def test_constant_curve(self, any_group, rng):
        g = any_group.random_elements(rng, 8)
        for t in (0.0, 0.3, 1.0):
            assert np.max(distance(any_group, exp_curve(any_group, g, g, t), g)) < 1e-12

    def test_endpoints(self, any_group, rng):
        g0 = any_group.random_elements(rng, 16)
        g1 = any_group.random_elements(rng, 16)
        at0 = exp_curve(any_group, g0, g1, 0.0)
        at1 = exp_curve(any_group, g0, g1, 1.0)
        assert np.max(distance(any_group, at0, g0)) < 1e-12
        assert np.max(distance(any_group, at1, g1)) < 1e-9

    def test_translation_curve_is_line_segment(self, rng):
        g = make_group("r2")
        x0 = g.random_elements(rng, 32)
        x1 = g.random_elements(rng, 32)
        for t in (0.0, 0.25, 0.5, 0.8, 1.0):
            np.testing.assert_allclose(
                exp_curve(g, x0, x1, t), (1 - t) * x0 + t * x1, atol=1e-12, rtol=0
            )

    def test_rejects_t_outside_unit_interval(self, rng):
        g = make_group("se2")
        g0 = g.random_elements(rng, 2)
        with pytest.raises(ValueError):
            exp_curve(g, g0, g0, -0.1)
        with pytest.raises(ValueError):
            exp_curve(g, g0, g0, 1.1)

    def test_per_sample_t_broadcast(self, rng):
        g = make_group("se2")
        g0 = g.random_elements(rng, 5)
        g1 = g.random_elements(rng, 5)
        ts = np.array([0.0, 0.2, 0.5, 0.8, 1.0])
        batched = exp_curve(g, g0, g1, ts)
        for i, t in enumerate(ts):
            single = exp_curve(g, g0[i], g1[i], float(t))
            np.testing.assert_allclose(batched[i], single, atol=1e-14)


class TestConditionalField:
    def test_zero_at_target(self, any_group, rng):
        g1 = any_group.random_elements(rng, 8)
        field = conditional_field(any_group, g1, g1, 0.5)
        assert np.max(np.abs(field)) < 1e-12

    def test_translation_form(self, rng):
        g = make_group("r2")
        x = g.random_elements(rng, 32)
        x1 = g.random_elements(rng, 32)
        for t in (0.0, 0.3, 0.9):
            np.testing.assert_allclose(
                conditional_field(g, x, x1, t), (x1 - x) / (1 - t), atol=1e-12, rtol=0
            )

    def test_constant_along_curve(self, any_group, rng):
        # Along gamma the (1-t)-scaled log collapses to the full-step log.
        g0 = any_group.random_elements(rng, 16)
        g1 = any_group.random_elements(rng, 16)
        full = any_group.log(any_group.product(any_group.inverse(g0), g1))
        for t in (0.0, 0.25, 0.5, 0.9):
            g_t = exp_curve(any_group, g0, g1, t)
            field = conditional_field(any_group, g_t, g1, t)
            np.testing.assert_allclose(field, full, atol=1e-8, rtol=0)

    def test_rejects_t_at_pole(self, rng):
        g = make_group("se2")
        g0 = g.random_elements(rng, 2)
        with pytest.raises(ValueError):
            conditional_field(g, g0, g0, 1.0)


class TestIntegrateField:
    def test_zero_field_is_constant(self, any_group, rng):
        g0 = any_group.random_elements(rng, 4)
        times, traj = integrate_field(
            any_group, lambda g, t: np.zeros((4, any_group.dim)), g0, steps=10
        )
        assert times[0] == 0.0 and times[-1] == 1.0
        assert len(traj) == 11
        assert np.max(distance(any_group, traj[-1], g0)) < 1e-12

    def test_conditional_field_reaches_target(self, any_group, rng):
        g0 = any_group.random_elements(rng, 8)
        g1 = any_group.random_elements(rng, 8)
        _, traj = integrate_field(
            any_group,
            lambda g, t: conditional_field(any_group, g, g1, t),
            g0,
            steps=100,
        )
        assert np.max(distance(any_group, traj[-1], g1)) < 1e-9

    def test_translation_trajectory_matches_segment(self, rng):
        g = make_group("r2")
        x0 = g.random_elements(rng, 8)
        x1 = g.random_elements(rng, 8)
        times, traj = integrate_field(
            g, lambda x, t: conditional_field(g, x, x1, t), x0, steps=50
        )
        for t, x in zip(times, traj):
            np.testing.assert_allclose(x, (1 - t) * x0 + t * x1, atol=1e-6)

    def test_non_finite_field_aborts_with_step_index(self, rng):
        g = make_group("r1")
        x0 = g.random_elements(rng, 2)

        def bad_field(x, t):
            if t >= 0.5:
                return np.full((2, 1), np.nan)
            return np.ones((2, 1))

        with pytest.raises(FloatingPointError, match="step 5"):
            integrate_field(g, bad_field, x0, steps=10)

    def test_rejects_zero_steps(self, rng):
        g = make_group("r1")
        with pytest.raises(ValueError):
            integrate_field(g, lambda x, t: x, g.random_elements(rng, 1), steps=0)


class TestDistance:
    def test_identity_of_indiscernibles(self, any_group, rng):
        g = any_group.random_elements(rng, 8)
        assert np.max(distance(any_group, g, g)) < 1e-12

    def test_symmetry(self, any_group, rng):
        g = any_group.random_elements(rng, 8)
        h = any_group.random_elements(rng, 8)
        np.testing.assert_allclose(
            distance(any_group, g, h), distance(any_group, h, g), atol=1e-9
        )

    def test_left_invariance(self, any_group, rng):
        g = any_group.random_elements(rng, 8)
        h = any_group.random_elements(rng, 8)
        k = any_group.random_elements(rng, 8)
        shifted = distance(
            any_group, any_group.product(k, g), any_group.product(k, h)
        )
        np.testing.assert_allclose(distance(any_group, g, h), shifted, atol=1e-9)
