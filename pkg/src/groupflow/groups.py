"""Concrete groups: translations, planar roto-translations, rotations, products.

All payloads are plain numpy arrays (tuples of arrays for product groups)
with arbitrary leading batch axes:

* ``Translation(d)``  -- payload ``(..., d)``, the coordinates themselves.
* ``SE2``             -- payload ``(..., 3)`` holding (x, y, theta) with the
  angle always stored in [-pi, pi).
* ``SO3``             -- payload ``(..., 3, 3)`` rotation matrices.
* ``ProductGroup``    -- payload is a tuple of factor payloads; every
  operation acts factor-wise and algebra vectors are concatenations.
"""

from __future__ import annotations

import numpy as np

from .core import Array, Group, check_algebra, recip_sinc, sinc

TWO_PI = 2.0 * np.pi

# Rotation angle below which SO3.log switches from the antisymmetric-part
# formula to the symmetric-part branch (axis recovery stays well conditioned
# when sin(q) vanishes near q = pi).
SO3_PI_BRANCH = 1e-6


def wrap_angle(theta: Array | float) -> Array:
    """Map angles into the canonical interval [-pi, pi)."""
    theta = np.asarray(theta, dtype=float)
    wrapped = np.mod(theta + np.pi, TWO_PI) - np.pi
    # Rounding in the mod can land exactly on +pi; fold it onto the branch.
    return np.where(wrapped >= np.pi, wrapped - TWO_PI, wrapped)


class Translation(Group):
    """The additive group on R^d; exp and log are the identity map."""

    def __init__(self, d: int):
        if d < 1:
            raise ValueError("translation group needs d >= 1")
        self.d = d
        self.name = f"r{d}"
        self.dim = d
        self.feature_dim = d
        self.feature_tag = f"r{d}:coords"
        self.coord_names = tuple(f"x{i}" for i in range(d))

    def _check(self, g) -> Array:
        g = np.asarray(g, dtype=float)
        if g.shape[-1:] != (self.d,):
            raise ValueError(f"{self.name} element must have last dimension {self.d}")
        return g

    def identity(self):
        return np.zeros(self.d)

    def product(self, g, h):
        return self._check(g) + self._check(h)

    def inverse(self, g):
        return -self._check(g)

    def exp(self, alg):
        return check_algebra(self, alg).copy()

    def log(self, g):
        return self._check(g).copy()

    def features(self, g):
        return self._check(g).copy()

    def random_elements(self, rng, n):
        return rng.standard_normal((n, self.d))

    def element_defect(self, g):
        g = self._check(g)
        return np.zeros(g.shape[:-1])

    def to_coords(self, g):
        return self._check(g).copy()

    def from_coords(self, coords):
        return self._check(coords).copy()


class SE2(Group):
    """Roto-translations of the plane, stored as (x, y, theta).

    The closed forms below are the coordinate expressions of the 3x3
    homogeneous matrix product/exponential/logarithm, with the algebra basis
    (d/dx, d/dy, d/dtheta) at the identity. Half-angle identities reduce the
    translation part of exp to sinc(theta/2) times a rotation by theta/2,
    which is exact for every theta and numerically stable at the identity;
    log divides by the same sinc and is smooth on all of R^2 x [-pi, pi).
    """

    name = "se2"
    dim = 3
    feature_dim = 4
    feature_tag = "se2:xy-cos-sin"
    coord_names = ("x", "y", "theta")

    def _check(self, g) -> Array:
        g = np.asarray(g, dtype=float)
        if g.shape[-1:] != (3,):
            raise ValueError("se2 element must have last dimension 3")
        return g

    def identity(self):
        return np.zeros(3)

    def product(self, g, h):
        g = self._check(g)
        h = self._check(h)
        cos_t = np.cos(g[..., 2])
        sin_t = np.sin(g[..., 2])
        out = np.empty(np.broadcast_shapes(g.shape, h.shape))
        out[..., 0] = g[..., 0] + cos_t * h[..., 0] - sin_t * h[..., 1]
        out[..., 1] = g[..., 1] + sin_t * h[..., 0] + cos_t * h[..., 1]
        out[..., 2] = wrap_angle(g[..., 2] + h[..., 2])
        return out

    def inverse(self, g):
        g = self._check(g)
        cos_t = np.cos(g[..., 2])
        sin_t = np.sin(g[..., 2])
        out = np.empty_like(g)
        out[..., 0] = -(cos_t * g[..., 0] + sin_t * g[..., 1])
        out[..., 1] = -(-sin_t * g[..., 0] + cos_t * g[..., 1])
        out[..., 2] = wrap_angle(-g[..., 2])
        return out

    def exp(self, alg):
        alg = check_algebra(self, alg)
        half = 0.5 * alg[..., 2]
        s = sinc(half)
        cos_h = np.cos(half)
        sin_h = np.sin(half)
        out = np.empty_like(alg)
        out[..., 0] = s * (alg[..., 0] * cos_h - alg[..., 1] * sin_h)
        out[..., 1] = s * (alg[..., 0] * sin_h + alg[..., 1] * cos_h)
        out[..., 2] = wrap_angle(alg[..., 2])
        return out

    def log(self, g):
        g = self._check(g)
        half = 0.5 * g[..., 2]
        r = recip_sinc(half)
        cos_h = np.cos(half)
        sin_h = np.sin(half)
        out = np.empty_like(g)
        out[..., 0] = r * (g[..., 0] * cos_h + g[..., 1] * sin_h)
        out[..., 1] = r * (-g[..., 0] * sin_h + g[..., 1] * cos_h)
        out[..., 2] = g[..., 2]
        return out

    def features(self, g):
        g = self._check(g)
        return np.stack(
            [g[..., 0], g[..., 1], np.cos(g[..., 2]), np.sin(g[..., 2])], axis=-1
        )

    def random_elements(self, rng, n):
        out = np.empty((n, 3))
        out[:, :2] = rng.standard_normal((n, 2))
        out[:, 2] = rng.uniform(-np.pi, np.pi, n)
        return out

    def element_defect(self, g):
        g = self._check(g)
        return np.maximum(np.abs(g[..., 2]) - np.pi, 0.0)

    def to_coords(self, g):
        return self._check(g).copy()

    def from_coords(self, coords):
        coords = self._check(coords).copy()
        coords[..., 2] = wrap_angle(coords[..., 2])
        return coords


def skew(v: Array) -> Array:
    """Map (..., 3) axis coordinates to (..., 3, 3) skew-symmetric matrices."""
    v = np.asarray(v, dtype=float)
    out = np.zeros(v.shape[:-1] + (3, 3))
    out[..., 0, 1] = -v[..., 2]
    out[..., 0, 2] = v[..., 1]
    out[..., 1, 0] = v[..., 2]
    out[..., 1, 2] = -v[..., 0]
    out[..., 2, 0] = -v[..., 1]
    out[..., 2, 1] = v[..., 0]
    return out


def unskew(m: Array) -> Array:
    """Inverse of :func:`skew` on skew-symmetric (..., 3, 3) matrices."""
    m = np.asarray(m, dtype=float)
    return np.stack([m[..., 2, 1], m[..., 0, 2], m[..., 1, 0]], axis=-1)


class SO3(Group):
    """3D rotations as 3x3 matrices.

    exp is the Rodrigues formula in its sinc-stable form

        R = I + sinc(q) K + 0.5 sinc(q/2)^2 K^2,   q = |c|, K = skew(c),

    and log recovers q from atan2 of the antisymmetric/trace parts (the same
    angle arccos((tr R - 1)/2) would give, but conditioned well at both ends
    of [0, pi]). For q within ``SO3_PI_BRANCH`` of pi the axis comes from the
    symmetric part (outer product n n^T), where the antisymmetric part
    degenerates; at q = pi exactly the sign convention makes the component of
    largest magnitude positive.
    """

    name = "so3"
    dim = 3
    feature_dim = 9
    feature_tag = "so3:mat9"
    coord_names = ("r00", "r01", "r02", "r10", "r11", "r12", "r20", "r21", "r22")

    def _check(self, g) -> Array:
        g = np.asarray(g, dtype=float)
        if g.shape[-2:] != (3, 3):
            raise ValueError("so3 element must be a (..., 3, 3) matrix")
        return g

    def identity(self):
        return np.eye(3)

    def product(self, g, h):
        return self._check(g) @ self._check(h)

    def inverse(self, g):
        return np.swapaxes(self._check(g), -1, -2).copy()

    def exp(self, alg):
        alg = check_algebra(self, alg)
        q = np.linalg.norm(alg, axis=-1)
        k = skew(alg)
        a = sinc(q)[..., None, None]
        b = (0.5 * sinc(0.5 * q) ** 2)[..., None, None]
        return np.eye(3) + a * k + b * (k @ k)

    def log(self, g):
        g = self._check(g)
        anti = 0.5 * unskew(g - np.swapaxes(g, -1, -2))
        sin_q = np.linalg.norm(anti, axis=-1)
        trace = np.trace(g, axis1=-2, axis2=-1)
        cos_q = 0.5 * (trace - 1.0)
        q = np.arctan2(np.clip(sin_q, 0.0, None), np.clip(cos_q, -1.0, 1.0))
        out = recip_sinc(q)[..., None] * anti

        near_pi = q > np.pi - SO3_PI_BRANCH
        if np.any(near_pi):
            flat_g = g[near_pi].reshape(-1, 3, 3)
            flat_q = np.atleast_1d(q[near_pi]).reshape(-1)
            flat_anti = anti[near_pi].reshape(-1, 3)
            fixed = np.empty_like(flat_anti)
            for i in range(flat_g.shape[0]):
                fixed[i] = self._log_near_pi(flat_g[i], flat_q[i], flat_anti[i])
            out[near_pi] = fixed.reshape(out[near_pi].shape)
        return out

    @staticmethod
    def _log_near_pi(g: Array, q: float, anti: Array) -> Array:
        # n n^T = (sym(R) - cos(q) I) / (1 - cos(q)); 1 - cos(q) ~ 2 here.
        cos_q = np.cos(q)
        outer = (0.5 * (g + g.T) - cos_q * np.eye(3)) / (1.0 - cos_q)
        j = int(np.argmax(np.diag(outer)))
        n = outer[:, j] / np.sqrt(max(outer[j, j], np.finfo(float).tiny))
        n = n / np.linalg.norm(n)
        dot = float(n @ anti)
        if abs(dot) > 10 * np.finfo(float).eps:
            # anti = sin(q) n with sin(q) >= 0, so it carries the sign of n.
            if dot < 0:
                n = -n
        else:
            # q = pi within rounding: both signs invert; pick deterministically.
            k = int(np.argmax(np.abs(n)))
            if n[k] < 0:
                n = -n
        return q * n

    def features(self, g):
        g = self._check(g)
        return g.reshape(g.shape[:-2] + (9,)).copy()

    def random_elements(self, rng, n):
        # Uniform (Haar) rotations from unit quaternions.
        quat = rng.standard_normal((n, 4))
        quat /= np.linalg.norm(quat, axis=-1, keepdims=True)
        w, x, y, z = quat[:, 0], quat[:, 1], quat[:, 2], quat[:, 3]
        out = np.empty((n, 3, 3))
        out[:, 0, 0] = 1 - 2 * (y * y + z * z)
        out[:, 0, 1] = 2 * (x * y - w * z)
        out[:, 0, 2] = 2 * (x * z + w * y)
        out[:, 1, 0] = 2 * (x * y + w * z)
        out[:, 1, 1] = 1 - 2 * (x * x + z * z)
        out[:, 1, 2] = 2 * (y * z - w * x)
        out[:, 2, 0] = 2 * (x * z - w * y)
        out[:, 2, 1] = 2 * (y * z + w * x)
        out[:, 2, 2] = 1 - 2 * (x * x + y * y)
        return out

    def element_defect(self, g):
        g = self._check(g)
        gram = np.swapaxes(g, -1, -2) @ g - np.eye(3)
        ortho = np.linalg.norm(gram, axis=(-2, -1))
        det = np.abs(np.linalg.det(g) - 1.0)
        return np.maximum(ortho, det)

    def orthonormalize(self, g):
        """Project onto the closest rotation (polar factor via SVD).

        Utility for re-conditioning after very long products; never applied
        implicitly, so integration trajectories stay untouched.
        """
        g = self._check(g)
        u, _, vt = np.linalg.svd(g)
        r = u @ vt
        det = np.linalg.det(r)
        flip = np.where(det < 0, -1.0, 1.0)
        u = u.copy()
        u[..., :, -1] *= flip[..., None]
        return u @ vt

    def to_coords(self, g):
        g = self._check(g)
        return g.reshape(g.shape[:-2] + (9,)).copy()

    def from_coords(self, coords):
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1:] != (9,):
            raise ValueError("so3 coords must have last dimension 9")
        return coords.reshape(coords.shape[:-1] + (3, 3)).copy()


class ProductGroup(Group):
    """Direct product of groups; every operation acts factor-wise.

    Elements are tuples of factor payloads; algebra vectors concatenate the
    factor components, so dim is the sum of factor dims.
    """

    def __init__(self, factors: list[Group], name: str | None = None):
        if not factors:
            raise ValueError("product group needs at least one factor")
        self.factors = tuple(factors)
        self.name = name or "x".join(f.name for f in factors)
        self.dim = sum(f.dim for f in factors)
        self.feature_dim = sum(f.feature_dim for f in factors)
        self.feature_tag = "product(" + ",".join(f.feature_tag for f in factors) + ")"
        self.coord_names = tuple(
            f"g{i}_{c}" for i, f in enumerate(factors) for c in f.coord_names
        )
        self._alg_splits = np.cumsum([f.dim for f in factors])[:-1]
        self._coord_splits = np.cumsum([f.n_coords for f in factors])[:-1]

    def _check(self, g) -> tuple:
        if not isinstance(g, tuple) or len(g) != len(self.factors):
            raise ValueError(
                f"{self.name} element must be a tuple of {len(self.factors)} payloads"
            )
        return g

    def _split_alg(self, alg: Array) -> list[Array]:
        return np.split(check_algebra(self, alg), self._alg_splits, axis=-1)

    def identity(self):
        return tuple(f.identity() for f in self.factors)

    def product(self, g, h):
        g = self._check(g)
        h = self._check(h)
        return tuple(f.product(a, b) for f, a, b in zip(self.factors, g, h))

    def inverse(self, g):
        return tuple(f.inverse(a) for f, a in zip(self.factors, self._check(g)))

    def exp(self, alg):
        parts = self._split_alg(alg)
        return tuple(f.exp(p) for f, p in zip(self.factors, parts))

    def log(self, g):
        g = self._check(g)
        return np.concatenate(
            [f.log(a) for f, a in zip(self.factors, g)], axis=-1
        )

    def features(self, g):
        g = self._check(g)
        return np.concatenate(
            [f.features(a) for f, a in zip(self.factors, g)], axis=-1
        )

    def random_elements(self, rng, n):
        return tuple(f.random_elements(rng, n) for f in self.factors)

    def element_defect(self, g):
        g = self._check(g)
        defects = [f.element_defect(a) for f, a in zip(self.factors, g)]
        return np.max(np.stack(defects, axis=0), axis=0)

    def to_coords(self, g):
        g = self._check(g)
        return np.concatenate(
            [f.to_coords(a) for f, a in zip(self.factors, g)], axis=-1
        )

    def from_coords(self, coords):
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1:] != (self.n_coords,):
            raise ValueError(
                f"{self.name} coords must have last dimension {self.n_coords}"
            )
        parts = np.split(coords, self._coord_splits, axis=-1)
        return tuple(f.from_coords(p) for f, p in zip(self.factors, parts))


def make_group(group_id: str) -> Group:
    """Build one of the named groups: r1, r2, se2, so3, se2xr2."""
    builders = {
        "r1": lambda: Translation(1),
        "r2": lambda: Translation(2),
        "se2": SE2,
        "so3": SO3,
        "se2xr2": lambda: ProductGroup([SE2(), Translation(2)], name="se2xr2"),
    }
    try:
        return builders[group_id]()
    except KeyError:
        raise ValueError(
            f"unknown group '{group_id}' (choose from {sorted(builders)})"
        ) from None


GROUP_IDS = ("r1", "r2", "se2", "so3", "se2xr2")
