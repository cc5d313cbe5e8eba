"""Group-agnostic flow matching primitives.

Everything here is written against the :class:`Group` interface: exponential
curves between group elements, the conditional vector field whose integral
curves are those exponential curves, geometric (Lie-Euler) integration that
keeps iterates on the group by construction, and the left-invariant metric
used by the training loss.

Conventions
-----------
Algebra vectors are coordinate arrays of shape ``(..., dim)`` in a fixed
left-invariant frame at the identity. Group elements are raw numpy payloads
(or tuples of payloads for product groups); the owning :class:`Group` knows
how to interpret them. All operations broadcast over leading batch axes.
"""

from __future__ import annotations

import abc

import numpy as np

Array = np.ndarray

# Switch point between the direct evaluation of sinc-type functions and
# their Taylor expansions (removes the 0/0 at the identity).
TAYLOR_CUTOFF = 1e-4

# Multiplicative perturbation applied to sinc evaluations; nonzero only when
# a fault is injected deliberately (selfcheck fault-injection hook).
_sinc_fault = 0.0


def set_sinc_fault(scale: float) -> None:
    """Perturb all sinc evaluations by a relative factor.

    Diagnostic hook: with a nonzero scale the exp/log roundtrip checks must
    fail loudly, which is how the selfcheck command validates that its own
    checks have teeth. Always reset to 0.0 after use.
    """
    global _sinc_fault
    _sinc_fault = float(scale)


def sinc(x: Array | float) -> Array:
    """sin(x)/x, evaluated by a 4-term Taylor expansion for |x| < 1e-4."""
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < TAYLOR_CUTOFF
    series = 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    safe = np.where(small, 1.0, x)
    direct = np.sin(safe) / safe
    out = np.where(small, series, direct)
    if _sinc_fault:
        out = out * (1.0 + _sinc_fault)
    return out


def recip_sinc(x: Array | float) -> Array:
    """x/sin(x), evaluated by a 4-term Taylor expansion for |x| < 1e-4.

    Valid for |x| < pi; all callers stay inside the principal branch.
    """
    x = np.asarray(x, dtype=float)
    x2 = x * x
    small = np.abs(x) < TAYLOR_CUTOFF
    series = 1.0 + x2 / 6.0 + 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0
    safe = np.where(small, 1.0, x)
    direct = safe / np.sin(safe)
    out = np.where(small, series, direct)
    if _sinc_fault:
        out = out * (1.0 + _sinc_fault)
    return out


class Group(abc.ABC):
    """A Lie group with surjective exponential map.

    Concrete groups define the payload layout of their elements and the
    four basic operations (product, inverse, exp, log) plus the feature
    embedding used as network input. ``dim`` is the number of Lie-algebra
    basis directions; algebra vectors have that many components.
    """

    name: str
    dim: int
    feature_dim: int
    feature_tag: str
    coord_names: tuple[str, ...]

    @abc.abstractmethod
    def identity(self):
        """Identity element (unbatched payload; broadcasts against batches)."""

    @abc.abstractmethod
    def product(self, g, h):
        """Group product g*h. Raises ValueError on payload mismatch."""

    @abc.abstractmethod
    def inverse(self, g):
        """Group inverse g^-1."""

    @abc.abstractmethod
    def exp(self, alg: Array):
        """Group exponential of algebra coordinates ``(..., dim)``."""

    @abc.abstractmethod
    def log(self, g) -> Array:
        """Group logarithm, landing in the canonical restricted domain."""

    @abc.abstractmethod
    def features(self, g) -> Array:
        """Smooth injective embedding used as network input."""

    @abc.abstractmethod
    def random_elements(self, rng: np.random.Generator, n: int):
        """Test sampler: n elements covering the group's canonical domain."""

    @abc.abstractmethod
    def element_defect(self, g) -> Array:
        """Per-element violation of the group's payload invariants (>= 0)."""

    @abc.abstractmethod
    def to_coords(self, g) -> Array:
        """Flatten payloads to ``(..., n_coords)`` for CSV export."""

    @abc.abstractmethod
    def from_coords(self, coords: Array):
        """Inverse of :meth:`to_coords`."""

    @property
    def n_coords(self) -> int:
        return len(self.coord_names)

    def __repr__(self) -> str:
        return self.name


def check_algebra(group: Group, alg: Array) -> Array:
    """Validate that ``alg`` holds algebra coordinates for ``group``."""
    alg = np.asarray(alg, dtype=float)
    if alg.shape[-1:] != (group.dim,):
        raise ValueError(
            f"algebra vector for {group.name} must have last dimension "
            f"{group.dim}, got shape {alg.shape}"
        )
    return alg


def check_weights(group: Group, weights: Array | None) -> Array:
    """Resolve metric weights: None means the unit metric."""
    if weights is None:
        return np.ones(group.dim)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (group.dim,):
        raise ValueError(
            f"metric weights for {group.name} must have shape ({group.dim},), "
            f"got {weights.shape}"
        )
    if not np.all(weights > 0):
        raise ValueError("metric weights must all be positive")
    return weights


def metric_sq_norm(group: Group, alg: Array, weights: Array | None = None) -> Array:
    """Squared norm sum_i w_i * a_i^2 in the left-invariant frame."""
    alg = check_algebra(group, alg)
    weights = check_weights(group, weights)
    return np.sum(weights * alg * alg, axis=-1)


def left_pushforward(group: Group, g, alg: Array) -> Array:
    """Push an algebra vector forward by left translation with g.

    In the left-invariant frame the components are unchanged; the operation
    is kept explicit so the conditional field reads exactly like its
    tangent-space definition, and so the frame convention has a single home.
    """
    return check_algebra(group, alg)


def exp_curve(group: Group, g0, g1, t):
    """Point at parameter t on the exponential curve from g0 to g1.

    gamma(t) = g0 * exp(t * log(g0^-1 * g1)); gamma(0) = g0 and
    gamma(1) = g1. ``t`` may be a scalar or an array broadcasting against
    the batch shape of g0/g1.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0):
        raise ValueError("exp_curve parameter t must lie in [0, 1]")
    alg = group.log(group.product(group.inverse(g0), g1))
    return group.product(g0, group.exp(t[..., None] * alg if t.ndim else t * alg))


def conditional_field(group: Group, g, g1, t) -> Array:
    """Target vector field with integral curves ending in g1.

    Returns the left-invariant-frame components of
    ``left_pushforward(g, log(g^-1 g1)) / (1 - t)``. The factor 1/(1-t) has
    a pole at t = 1, so t must be strictly below 1; training never samples
    t = 1 (the time distribution is cut off at 1 - epsilon).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t >= 1.0):
        raise ValueError("conditional_field requires t in [0, 1)")
    alg = left_pushforward(group, g, group.log(group.product(group.inverse(g), g1)))
    denom = 1.0 - t
    return alg / (denom[..., None] if t.ndim else denom)


def integrate_field(group: Group, field, g0, steps: int):
    """Integrate a vector field with geometric Euler steps.

    g_{k+1} = g_k * exp(dt * field(g_k, t_k)) with dt = 1/steps and
    t_k = k/steps. Every iterate is a group element by construction.

    ``field(g, t)`` must return algebra coordinates ``(..., dim)`` for a
    batch ``g`` and scalar time ``t``. Returns ``(times, trajectory)`` where
    ``times`` has shape (steps+1,) and ``trajectory`` is the list of the
    steps+1 element batches including both endpoints.

    Raises FloatingPointError if the field returns non-finite values.
    """
    if steps < 1:
        raise ValueError("integrate_field requires steps >= 1")
    dt = 1.0 / steps
    times = np.arange(steps + 1) * dt
    times[-1] = 1.0
    g = g0
    trajectory = [g]
    for k in range(steps):
        t_k = k * dt
        alg = check_algebra(group, field(g, t_k))
        if not np.all(np.isfinite(alg)):
            raise FloatingPointError(
                f"field returned non-finite values at step {k} (t = {t_k:.6g})"
            )
        g = group.product(g, group.exp(dt * alg))
        trajectory.append(g)
    return times, trajectory


def distance(group: Group, g, h) -> Array:
    """Canonical intrinsic distance sqrt(|log(g^-1 h)|^2), unit weights."""
    alg = group.log(group.product(group.inverse(g), h))
    return np.sqrt(metric_sq_norm(group, alg))
