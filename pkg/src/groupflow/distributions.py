"""Named toy distributions on the shipped groups.

Preset ids are ``<group>-<kind>`` (se2-hline, so3-circle, r2-gaussian, ...);
product distributions join factor ids with '+' (se2-hline+r2-gaussian).
Numeric parameters (extent, radius, sigma, loc) have defaults chosen for the
desk-scale experiments and can be overridden per spec.

Construction conventions:

* lines span s in Uniform[-extent, extent] along their axis, orientation
  along the line;
* circles have tangent orientations (angle alpha + pi/2 at polar angle
  alpha);
* rotation-group lines are 90 degree great-circle arcs exp(s A_axis) R_base
  with s in Uniform[-pi/4, pi/4], the circle a full great circle;
* jitter: Gaussian sigma on each coordinate for vector-like payloads
  (angles re-wrapped), right-multiplication by exp(sigma * normal) for
  rotations so samples stay exactly on the group.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .core import Array, Group
from .groups import SE2, SO3, ProductGroup, Translation, wrap_angle

LINE_EXTENT = 1.0
CIRCLE_RADIUS = 0.7
JITTER_SIGMA = 0.05
ARC_HALF_ANGLE = np.pi / 4

KINDS = ("point", "gaussian", "hline", "vline", "circle")


@dataclass(frozen=True)
class DistributionSpec:
    """One named distribution, bound to a group id."""

    group_id: str
    kind: str
    extent: float = LINE_EXTENT
    radius: float = CIRCLE_RADIUS
    sigma: float = JITTER_SIGMA
    loc: tuple[float, ...] | None = None
    factors: tuple["DistributionSpec", ...] = field(default=())

    @property
    def spec_id(self) -> str:
        if self.factors:
            return "+".join(f.spec_id for f in self.factors)
        return f"{self.group_id}-{self.kind}"


def parse_spec(
    spec_id: str, group: Group, overrides: dict[str, float] | None = None
) -> DistributionSpec:
    """Resolve a preset id against a group, with optional parameter overrides.

    Bare kinds are shorthand for ``<group>-<kind>``; for product groups a
    '+'-joined id must provide one part per factor (each part may be bare).
    Unknown ids or group mismatches raise ValueError.
    """
    overrides = dict(overrides or {})
    if isinstance(group, ProductGroup):
        parts = spec_id.split("+")
        if len(parts) != len(group.factors):
            raise ValueError(
                f"distribution '{spec_id}' must have {len(group.factors)} "
                f"'+'-separated parts for group {group.name}"
            )
        factors = tuple(
            parse_spec(part, fac, overrides)
            for part, fac in zip(parts, group.factors)
        )
        return DistributionSpec(group_id=group.name, kind="product", factors=factors)

    prefix = group.name + "-"
    if spec_id.startswith(prefix):
        kind = spec_id[len(prefix):]
    elif "-" in spec_id.split("@", 1)[0]:
        # Dashed prefix present but not this group's.
        raise ValueError(
            f"distribution '{spec_id}' does not belong to group {group.name}"
        )
    else:
        kind = spec_id
    loc = None
    if kind.startswith("point@"):
        values = kind[len("point@"):]
        try:
            loc = tuple(float(v) for v in values.split(","))
        except ValueError:
            raise ValueError(f"bad point location '{values}'") from None
        if len(loc) != group.n_coords:
            raise ValueError(
                f"point location needs {group.n_coords} values for {group.name}"
            )
        kind = "point"
    if kind not in KINDS:
        raise ValueError(
            f"unknown distribution kind '{kind}' (choose from {KINDS})"
        )
    if kind in ("hline", "vline") and not isinstance(group, SE2 | SO3):
        raise ValueError(f"'{kind}' is only defined on se2 and so3")
    if kind == "circle" and not isinstance(group, SE2 | SO3):
        raise ValueError("'circle' is only defined on se2 and so3")

    spec = DistributionSpec(group_id=group.name, kind=kind, loc=loc)
    if kind == "point" and "sigma" not in overrides:
        overrides["sigma"] = 0.0
    known = {"extent", "radius", "sigma"}
    bad = set(overrides) - known
    if bad:
        raise ValueError(f"unknown distribution parameters: {sorted(bad)}")
    if overrides:
        spec = replace(spec, **overrides)
    if spec.sigma < 0:
        raise ValueError("sigma must be >= 0")
    return spec


def point_spec(group: Group, loc) -> DistributionSpec:
    """Point mass at an explicit location (coords layout of the group)."""
    if isinstance(group, ProductGroup):
        coords = np.asarray(loc, dtype=float)
        parts = np.split(coords, np.cumsum([f.n_coords for f in group.factors])[:-1])
        return DistributionSpec(
            group_id=group.name,
            kind="product",
            factors=tuple(
                point_spec(f, p) for f, p in zip(group.factors, parts)
            ),
        )
    return DistributionSpec(
        group_id=group.name,
        kind="point",
        sigma=0.0,
        loc=tuple(float(v) for v in np.atleast_1d(np.asarray(loc, dtype=float))),
    )


def _jitter_coords(coords: Array, sigma: float, rng: np.random.Generator) -> Array:
    if sigma > 0:
        coords = coords + sigma * rng.standard_normal(coords.shape)
    return coords


def _sample_se2(spec: DistributionSpec, n: int, rng: np.random.Generator) -> Array:
    out = np.zeros((n, 3))
    if spec.kind == "point":
        if spec.loc is not None:
            out[:] = np.asarray(spec.loc, dtype=float)
    elif spec.kind == "hline":
        out[:, 0] = rng.uniform(-spec.extent, spec.extent, n)
    elif spec.kind == "vline":
        out[:, 1] = rng.uniform(-spec.extent, spec.extent, n)
        out[:, 2] = np.pi / 2
    elif spec.kind == "circle":
        alpha = rng.uniform(-np.pi, np.pi, n)
        out[:, 0] = spec.radius * np.cos(alpha)
        out[:, 1] = spec.radius * np.sin(alpha)
        out[:, 2] = alpha + np.pi / 2
    elif spec.kind == "gaussian":
        out[:, :2] = rng.standard_normal((n, 2))
    else:
        raise ValueError(f"unknown se2 distribution kind '{spec.kind}'")
    out = _jitter_coords(out, spec.sigma, rng)
    out[:, 2] = wrap_angle(out[:, 2])
    return out


def _rot_x(a: Array) -> Array:
    a = np.asarray(a, dtype=float)
    c, s = np.cos(a), np.sin(a)
    out = np.zeros(a.shape + (3, 3))
    out[..., 0, 0] = 1
    out[..., 1, 1] = c
    out[..., 1, 2] = -s
    out[..., 2, 1] = s
    out[..., 2, 2] = c
    return out


def _rot_y(a: Array) -> Array:
    a = np.asarray(a, dtype=float)
    c, s = np.cos(a), np.sin(a)
    out = np.zeros(a.shape + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 2] = s
    out[..., 1, 1] = 1
    out[..., 2, 0] = -s
    out[..., 2, 2] = c
    return out


def _rot_z(a: Array) -> Array:
    a = np.asarray(a, dtype=float)
    c, s = np.cos(a), np.sin(a)
    out = np.zeros(a.shape + (3, 3))
    out[..., 0, 0] = c
    out[..., 0, 1] = -s
    out[..., 1, 0] = s
    out[..., 1, 1] = c
    out[..., 2, 2] = 1
    return out


def _sample_so3(spec: DistributionSpec, n: int, rng: np.random.Generator) -> Array:
    group = SO3()
    base = _rot_y(np.pi / 2)
    if spec.kind == "point":
        if spec.loc is None:
            out = np.broadcast_to(np.eye(3), (n, 3, 3)).copy()
        else:
            out = np.broadcast_to(
                group.from_coords(np.asarray(spec.loc, dtype=float)), (n, 3, 3)
            ).copy()
    elif spec.kind == "hline":
        s = rng.uniform(-ARC_HALF_ANGLE, ARC_HALF_ANGLE, n)
        out = _rot_z(s) @ base
    elif spec.kind == "vline":
        s = rng.uniform(-ARC_HALF_ANGLE, ARC_HALF_ANGLE, n)
        out = _rot_y(s) @ base
    elif spec.kind == "circle":
        alpha = rng.uniform(-np.pi, np.pi, n)
        out = _rot_z(alpha) @ base
    elif spec.kind == "gaussian":
        out = group.exp(spec.extent * rng.standard_normal((n, 3)))
        return out if spec.sigma == 0 else group.product(
            out, group.exp(spec.sigma * rng.standard_normal((n, 3)))
        )
    else:
        raise ValueError(f"unknown so3 distribution kind '{spec.kind}'")
    if spec.sigma > 0:
        out = out @ group.exp(spec.sigma * rng.standard_normal((n, 3)))
    return out


def _sample_translation(
    spec: DistributionSpec, d: int, n: int, rng: np.random.Generator
) -> Array:
    if spec.kind == "point":
        out = np.zeros((n, d))
        if spec.loc is not None:
            out[:] = np.asarray(spec.loc, dtype=float)
        return _jitter_coords(out, spec.sigma, rng) if spec.sigma > 0 else out
    if spec.kind == "gaussian":
        return spec.extent * rng.standard_normal((n, d))
    raise ValueError(f"unknown r{d} distribution kind '{spec.kind}'")


def sample(spec: DistributionSpec, group: Group, n: int, rng: np.random.Generator):
    """Draw n i.i.d. samples; payload layout is the group's."""
    if n < 1:
        raise ValueError("sample size must be >= 1")
    if spec.group_id != group.name:
        raise ValueError(
            f"spec '{spec.spec_id}' belongs to group {spec.group_id}, "
            f"not {group.name}"
        )
    if isinstance(group, ProductGroup):
        if spec.kind != "product" or len(spec.factors) != len(group.factors):
            raise ValueError(f"spec '{spec.spec_id}' does not match {group.name}")
        return tuple(
            sample(fs, fg, n, rng) for fs, fg in zip(spec.factors, group.factors)
        )
    if isinstance(group, SE2):
        return _sample_se2(spec, n, rng)
    if isinstance(group, SO3):
        return _sample_so3(spec, n, rng)
    if isinstance(group, Translation):
        return _sample_translation(spec, group.d, n, rng)
    raise ValueError(f"no samplers for group {group.name}")
