"""Distribution presets: construction identities, determinism, validity."""

import numpy as np
import pytest

from groupflow import make_group
from groupflow.distributions import (
    DistributionSpec,
    parse_spec,
    point_spec,
    sample,
)
from oracles import rot_y, rot_z


class TestParseSpec:
    def test_full_and_bare_ids_agree(self):
        group = make_group("se2")
        assert parse_spec("se2-hline", group) == parse_spec("hline", group)

    def test_spec_id_roundtrip(self):
        group = make_group("se2")
        assert parse_spec("hline", group).spec_id == "se2-hline"

    def test_product_ids(self):
        group = make_group("se2xr2")
        spec = parse_spec("se2-hline+r2-gaussian", group)
        assert spec.kind == "product"
        assert [f.kind for f in spec.factors] == ["hline", "gaussian"]
        bare = parse_spec("hline+gaussian", group)
        assert bare == spec

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown distribution kind"):
            parse_spec("se2-blob", make_group("se2"))

    def test_rejects_wrong_group(self):
        with pytest.raises(ValueError, match="does not belong"):
            parse_spec("se2-hline", make_group("so3"))

    def test_rejects_line_on_translation_group(self):
        with pytest.raises(ValueError, match="only defined"):
            parse_spec("hline", make_group("r2"))

    def test_rejects_wrong_product_arity(self):
        with pytest.raises(ValueError, match="parts"):
            parse_spec("hline", make_group("se2xr2"))

    def test_point_location_syntax(self):
        group = make_group("r1")
        spec = parse_spec("r1-point@1", group)
        assert spec.kind == "point" and spec.loc == (1.0,)
        with pytest.raises(ValueError, match="location"):
            parse_spec("point@1,2", group)

    def test_parameter_overrides(self):
        group = make_group("se2")
        spec = parse_spec("circle", group, {"radius": 1.0, "sigma": 0.0})
        assert spec.radius == 1.0 and spec.sigma == 0.0
        with pytest.raises(ValueError, match="unknown distribution parameters"):
            parse_spec("circle", group, {"wobble": 3.0})


class TestSE2Samplers:
    def test_hline_noise_free_geometry(self, rng):
        group = make_group("se2")
        spec = parse_spec("hline", group, {"sigma": 0.0})
        g = sample(spec, group, 500, rng)
        assert np.all(np.abs(g[:, 0]) <= 1.0)
        assert np.array_equal(g[:, 1], np.zeros(500))
        assert np.array_equal(g[:, 2], np.zeros(500))

    def test_vline_noise_free_geometry(self, rng):
        group = make_group("se2")
        spec = parse_spec("vline", group, {"sigma": 0.0})
        g = sample(spec, group, 500, rng)
        assert np.array_equal(g[:, 0], np.zeros(500))
        assert np.all(np.abs(g[:, 1]) <= 1.0)
        assert np.all(g[:, 2] == np.pi / 2)

    def test_circle_radius_and_tangent(self, rng):
        group = make_group("se2")
        spec = parse_spec("circle", group, {"sigma": 0.0, "radius": 1.0})
        g = sample(spec, group, 500, rng)
        np.testing.assert_allclose(
            g[:, 0] ** 2 + g[:, 1] ** 2, np.ones(500), atol=1e-12
        )
        alpha = np.arctan2(g[:, 1], g[:, 0])
        # Orientation is the tangent direction: alpha + pi/2, wrapped.
        expect = np.mod(alpha + np.pi / 2 + np.pi, 2 * np.pi) - np.pi
        diff = np.mod(g[:, 2] - expect + np.pi, 2 * np.pi) - np.pi
        np.testing.assert_allclose(diff, np.zeros(500), atol=1e-12)

    def test_point_at_origin(self, rng):
        group = make_group("se2")
        spec = parse_spec("point", group)
        g = sample(spec, group, 10, rng)
        assert np.array_equal(g, np.zeros((10, 3)))

    def test_jitter_scale(self, rng):
        group = make_group("se2")
        spec = parse_spec("hline", group, {"sigma": 0.05})
        g = sample(spec, group, 4000, rng)
        assert 0.03 < np.std(g[:, 1]) < 0.07
        assert 0.03 < np.std(g[:, 2]) < 0.07


class TestSO3Samplers:
    def test_all_samples_are_rotations(self, rng):
        group = make_group("so3")
        for kind in ("hline", "vline", "circle", "point", "gaussian"):
            spec = parse_spec(kind, group)
            g = sample(spec, group, 200, rng)
            assert np.max(group.element_defect(g)) < 1e-12, kind

    def test_hline_is_equator_arc(self, rng):
        group = make_group("so3")
        spec = parse_spec("hline", group, {"sigma": 0.0})
        g = sample(spec, group, 400, rng)
        pos = g @ np.array([0.0, 0.0, 1.0])
        # exp(s A_z) R_y(pi/2) moves the reference point along the equator.
        np.testing.assert_allclose(pos[:, 2], np.zeros(400), atol=1e-12)
        np.testing.assert_allclose(
            np.linalg.norm(pos, axis=1), np.ones(400), atol=1e-12
        )
        angles = np.arctan2(pos[:, 1], pos[:, 0])
        assert np.all(np.abs(angles) <= np.pi / 4 + 1e-12)

    def test_vline_is_meridian_arc(self, rng):
        group = make_group("so3")
        spec = parse_spec("vline", group, {"sigma": 0.0})
        g = sample(spec, group, 400, rng)
        pos = g @ np.array([0.0, 0.0, 1.0])
        np.testing.assert_allclose(pos[:, 1], np.zeros(400), atol=1e-12)
        assert np.all(pos[:, 0] >= np.cos(np.pi / 4) - 1e-12)

    def test_circle_covers_full_equator(self, rng):
        group = make_group("so3")
        spec = parse_spec("circle", group, {"sigma": 0.0})
        g = sample(spec, group, 2000, rng)
        pos = g @ np.array([0.0, 0.0, 1.0])
        np.testing.assert_allclose(pos[:, 2], np.zeros(2000), atol=1e-12)
        angles = np.arctan2(pos[:, 1], pos[:, 0])
        hist, _ = np.histogram(angles, bins=8, range=(-np.pi, np.pi))
        assert hist.min() > 150  # roughly uniform over the circle

    def test_line_construction_matches_rotation_formula(self, rng):
        group = make_group("so3")
        spec = parse_spec("hline", group, {"sigma": 0.0})
        g = sample(spec, group, 50, rng)
        pos = g @ np.array([0.0, 0.0, 1.0])
        for row, p in zip(g, pos):
            s = np.arctan2(p[1], p[0])
            np.testing.assert_allclose(row, rot_z(s) @ rot_y(np.pi / 2), atol=1e-12)


class TestGeneralProperties:
    def test_determinism(self, any_group):
        spec = (
            parse_spec("gaussian", any_group)
            if any_group.name.startswith("r")
            else parse_spec(
                "+".join("circle" if f.name in ("se2", "so3") else "gaussian"
                         for f in getattr(any_group, "factors", [any_group])),
                any_group,
            )
        )
        a = sample(spec, any_group, 64, np.random.default_rng(5))
        b = sample(spec, any_group, 64, np.random.default_rng(5))
        if isinstance(a, tuple):
            assert all(np.array_equal(x, y) for x, y in zip(a, b))
        else:
            assert np.array_equal(a, b)

    def test_samples_pass_group_invariants(self, any_group, rng):
        if any_group.name.startswith("r"):
            spec = parse_spec("gaussian", any_group)
        elif any_group.name == "se2xr2":
            spec = parse_spec("circle+gaussian", any_group)
        else:
            spec = parse_spec("circle", any_group)
        g = sample(spec, any_group, 300, rng)
        assert np.max(any_group.element_defect(g)) < 1e-12

    def test_point_spec_helper(self, rng):
        group = make_group("se2xr2")
        spec = point_spec(group, [1.0, 2.0, 0.5, -1.0, 3.0])
        g = sample(spec, group, 4, rng)
        np.testing.assert_allclose(g[0], np.tile([1.0, 2.0, 0.5], (4, 1)))
        np.testing.assert_allclose(g[1], np.tile([-1.0, 3.0], (4, 1)))

    def test_product_sampling_is_factorwise(self, rng):
        group = make_group("se2xr2")
        spec = parse_spec("hline+gaussian", group)
        g = sample(spec, group, 100, rng)
        assert isinstance(g, tuple) and len(g) == 2
        assert g[0].shape == (100, 3) and g[1].shape == (100, 2)

    def test_rejects_bad_sample_size(self, rng):
        group = make_group("se2")
        with pytest.raises(ValueError):
            sample(parse_spec("hline", group), group, 0, rng)

    def test_rejects_group_mismatch(self, rng):
        se2 = make_group("se2")
        spec = parse_spec("hline", se2)
        with pytest.raises(ValueError, match="belongs to group"):
            sample(spec, make_group("so3"), 10, rng)

    def test_negative_sigma_rejected(self):
        with pytest.raises(ValueError, match="sigma"):
            parse_spec("hline", make_group("se2"), {"sigma": -0.1})
