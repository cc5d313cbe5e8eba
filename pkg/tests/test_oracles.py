"""The reference implementations themselves, validated against scipy.

The rest of the suite trusts these oracles; this module pins them to an
independent well-known implementation before they are used anywhere else.
"""

import numpy as np
import pytest
from scipy.linalg import expm, logm

from oracles import (
    _batched_db_sqrtm,
    batched_matrix_logm,
    batched_series_expm,
    finite_difference_gradient,
    mercator_logm,
    rot_z,
    se2_algebra_matrices,
    se2_algebra_matrix,
    se2_matrices,
    se2_to_matrix,
    series_expm,
)


def _random_se2_matrices(rng, n, max_angle=np.pi - 1e-3):
    g = np.column_stack(
        [
            rng.standard_normal(n),
            rng.standard_normal(n),
            rng.uniform(-max_angle, max_angle, n),
        ]
    )
    return se2_matrices(g)


class TestBatchedConstructors:
    def test_se2_matrices_match_scalar_helper(self, rng):
        g = rng.standard_normal((20, 3))
        batch = se2_matrices(g)
        for i in range(20):
            assert np.array_equal(batch[i], se2_to_matrix(g[i]))

    def test_se2_algebra_matrices_match_scalar_helper(self, rng):
        v = rng.standard_normal((20, 3))
        batch = se2_algebra_matrices(v)
        for i in range(20):
            assert np.array_equal(batch[i], se2_algebra_matrix(v[i]))


class TestExpOracles:
    def test_series_expm_matches_scipy(self, rng):
        for _ in range(50):
            a = se2_algebra_matrix(rng.standard_normal(3) * 2.0)
            np.testing.assert_allclose(series_expm(a), expm(a), atol=1e-13)

    def test_batched_series_expm_matches_scipy(self, rng):
        vs = rng.standard_normal((100, 3)) * 2.0
        ours = batched_series_expm(se2_algebra_matrices(vs))
        for i in range(100):
            np.testing.assert_allclose(
                ours[i], expm(se2_algebra_matrix(vs[i])), atol=1e-13
            )


class TestLogOracles:
    def test_mercator_matches_scipy_inside_disc(self, rng):
        for _ in range(30):
            axis = rng.standard_normal(3)
            axis /= np.linalg.norm(axis)
            q = rng.uniform(0.05, 0.9)
            r = series_expm(
                q
                * np.array(
                    [
                        [0, -axis[2], axis[1]],
                        [axis[2], 0, -axis[0]],
                        [-axis[1], axis[0], 0],
                    ]
                )
            )
            np.testing.assert_allclose(
                mercator_logm(r), np.real(logm(r)), atol=1e-12
            )

    def test_db_sqrt_squares_back(self, rng):
        mats = _random_se2_matrices(rng, 50)
        roots = _batched_db_sqrtm(mats)
        np.testing.assert_allclose(roots @ roots, mats, atol=1e-12)

    def test_batched_log_matches_scipy_bulk(self, rng):
        mats = _random_se2_matrices(rng, 100)
        ours = batched_matrix_logm(mats)
        for i in range(100):
            np.testing.assert_allclose(
                ours[i], np.real(logm(mats[i])), atol=1e-11
            )

    def test_batched_log_near_branch_point(self, rng):
        # Principal-log conditioning is eps/gap near angle pi; at a gap of
        # 1e-5 both routes still agree to ~1e-10.
        gaps = np.array([1e-3, 1e-4, 1e-5])
        g = np.column_stack(
            [
                rng.standard_normal(3),
                rng.standard_normal(3),
                np.pi - gaps,
            ]
        )
        mats = se2_matrices(g)
        ours = batched_matrix_logm(mats)
        for i in range(3):
            np.testing.assert_allclose(
                ours[i], np.real(logm(mats[i])), atol=1e-9
            )

    def test_batched_log_inverts_exp(self, rng):
        vs = rng.standard_normal((50, 3))
        vs[:, 2] = rng.uniform(-2.5, 2.5, 50)
        mats = batched_series_expm(se2_algebra_matrices(vs))
        back = batched_matrix_logm(mats)
        np.testing.assert_allclose(back, se2_algebra_matrices(vs), atol=1e-11)


class TestFiniteDifferences:
    def test_gradient_of_quadratic(self):
        p = np.array([1.0, -2.0, 0.5])

        def loss():
            return float(np.sum(p * p) + 3.0 * p[0])

        (grad,) = finite_difference_gradient(loss, [p])
        np.testing.assert_allclose(grad, 2.0 * p + np.array([3.0, 0, 0]), atol=1e-8)


class TestKnownRotation:
    def test_quarter_turn_log_is_pi_half_about_z(self):
        want = np.array([[0, -np.pi / 2, 0], [np.pi / 2, 0, 0], [0, 0, 0.0]])
        got = batched_matrix_logm(rot_z(np.pi / 2)[None])[0]
        np.testing.assert_allclose(got, want, atol=1e-12)
        np.testing.assert_allclose(np.real(logm(rot_z(np.pi / 2))), want, atol=1e-12)
