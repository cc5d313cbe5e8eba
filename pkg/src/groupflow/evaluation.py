"""Sample-quality metrics: energy distance, RBF MMD, permutation nulls.

Both metrics are biased V-statistics computed on the groups' feature
embeddings (chart-free, so angle wrapping cannot create artificial gaps).
The V-form makes identical batches score exactly zero; the permutation null
calibrates the resulting offset away when thresholds are needed.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .core import Array, Group, integrate_field
from .distributions import DistributionSpec, sample
from .nn import VectorFieldNet
from .training import net_field

DEFAULT_PERMUTATIONS = 200


def pairwise_sq_dists(a: Array, b: Array) -> Array:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    sq = (
        np.sum(a * a, axis=1)[:, None]
        + np.sum(b * b, axis=1)[None, :]
        - 2.0 * (a @ b.T)
    )
    return np.maximum(sq, 0.0)


def median_sq_bandwidth(pooled_sq: Array) -> float:
    """Median of the off-diagonal squared distances; 1.0 if degenerate."""
    n = pooled_sq.shape[0]
    off = pooled_sq[~np.eye(n, dtype=bool)]
    med = float(np.median(off)) if off.size else 0.0
    return med if med > 0 else 1.0


def rbf_kernel(pooled_sq: Array, bandwidth_sq: float) -> Array:
    return np.exp(-pooled_sq / (2.0 * bandwidth_sq))


def _v_statistic(matrix: Array, n: int, m: int, sign: float) -> float:
    """sign * (mean_aa + mean_bb - 2 mean_ab) over the pooled matrix."""
    aa = matrix[:n, :n]
    bb = matrix[n:, n:]
    ab = matrix[:n, n:]
    return float(
        sign * (np.mean(aa) + np.mean(bb) - 2.0 * np.mean(ab))
    )


def mmd2_biased(feats_a: Array, feats_b: Array, bandwidth_sq: float | None = None) -> float:
    """Biased squared MMD with an RBF kernel; zero for identical batches."""
    n, m = feats_a.shape[0], feats_b.shape[0]
    pooled = np.concatenate([feats_a, feats_b], axis=0)
    sq = pairwise_sq_dists(pooled, pooled)
    if bandwidth_sq is None:
        bandwidth_sq = median_sq_bandwidth(sq)
    return _v_statistic(rbf_kernel(sq, bandwidth_sq), n, m, sign=1.0)


def energy_distance(feats_a: Array, feats_b: Array) -> float:
    """V-statistic energy distance: 2 E d(a,b) - E d(a,a') - E d(b,b')."""
    n, m = feats_a.shape[0], feats_b.shape[0]
    pooled = np.concatenate([feats_a, feats_b], axis=0)
    dist = np.sqrt(pairwise_sq_dists(pooled, pooled))
    return _v_statistic(dist, n, m, sign=-1.0)


def _permuted_stats(
    matrix: Array, n: int, m: int, sign: float, n_perms: int, rng: np.random.Generator
) -> Array:
    """The V-statistic under random relabelings of the pooled sample.

    For a 0/1 group indicator s (|s| = n) and symmetric M:
        S_aa = s M s,  sM1 = s M 1,  S_bb = total - 2 sM1 + S_aa,
        S_ab = sM1 - S_aa,
    so every permutation costs one quadratic form instead of a re-slice.
    """
    total_n = n + m
    row_sums = matrix.sum(axis=1)
    total = float(row_sums.sum())
    base = np.zeros(total_n)
    base[:n] = 1.0
    indicators = rng.permuted(np.tile(base, (n_perms, 1)), axis=1)
    s_aa = np.einsum("pi,ij,pj->p", indicators, matrix, indicators)
    s_m1 = indicators @ row_sums
    s_bb = total - 2.0 * s_m1 + s_aa
    s_ab = s_m1 - s_aa
    return sign * (s_aa / n**2 + s_bb / m**2 - 2.0 * s_ab / (n * m))


@dataclass
class EvalReport:
    """Two-sample comparison summary; all fields JSON-serializable."""

    group: str
    n_generated: int
    n_reference: int
    mmd: float
    mmd_null_95: float
    mmd_null_99: float
    energy_distance: float
    energy_null_95: float
    bandwidth_sq: float
    generated_defect: float
    reference_defect: float
    trajectory_defect: float
    marginals: dict

    def to_dict(self) -> dict:
        return asdict(self)


def _marginal_summary(feats: Array) -> dict:
    return {
        "mean": [float(v) for v in feats.mean(axis=0)],
        "std": [float(v) for v in feats.std(axis=0)],
    }


def two_sample_metrics(
    group: Group,
    generated,
    reference,
    rng: np.random.Generator | None = None,
    n_perms: int = DEFAULT_PERMUTATIONS,
    trajectory_defect: float = 0.0,
) -> EvalReport:
    """Compare a generated batch against a reference batch of the same group."""
    feats_a = group.features(generated)
    feats_b = group.features(reference)
    n, m = feats_a.shape[0], feats_b.shape[0]
    if min(n, m) < 2:
        raise ValueError("two_sample_metrics needs at least 2 samples per batch")
    pooled = np.concatenate([feats_a, feats_b], axis=0)
    sq = pairwise_sq_dists(pooled, pooled)
    bandwidth_sq = median_sq_bandwidth(sq)
    kernel = rbf_kernel(sq, bandwidth_sq)
    dist = np.sqrt(sq)

    mmd = _v_statistic(kernel, n, m, sign=1.0)
    energy = _v_statistic(dist, n, m, sign=-1.0)

    if rng is None:
        rng = np.random.default_rng(0)
    mmd_null = _permuted_stats(kernel, n, m, 1.0, n_perms, rng)
    energy_null = _permuted_stats(dist, n, m, -1.0, n_perms, rng)

    return EvalReport(
        group=group.name,
        n_generated=n,
        n_reference=m,
        mmd=mmd,
        mmd_null_95=float(np.quantile(mmd_null, 0.95)),
        mmd_null_99=float(np.quantile(mmd_null, 0.99)),
        energy_distance=energy,
        energy_null_95=float(np.quantile(energy_null, 0.95)),
        bandwidth_sq=bandwidth_sq,
        generated_defect=float(np.max(group.element_defect(generated))),
        reference_defect=float(np.max(group.element_defect(reference))),
        trajectory_defect=trajectory_defect,
        marginals={
            "generated": _marginal_summary(feats_a),
            "reference": _marginal_summary(feats_b),
        },
    )


def flow_and_eval(
    group: Group,
    net: VectorFieldNet,
    source: DistributionSpec,
    target: DistributionSpec,
    steps: int,
    n: int,
    rng: np.random.Generator,
    n_perms: int = DEFAULT_PERMUTATIONS,
):
    """Integrate n source samples under the net's field and score endpoints.

    Returns (report, times, trajectory); the trajectory is the full list of
    element batches so callers can export it.
    """
    g0 = sample(source, group, n, rng)
    times, trajectory = integrate_field(group, net_field(group, net), g0, steps)
    reference = sample(target, group, n, rng)
    trajectory_defect = max(
        float(np.max(group.element_defect(g))) for g in trajectory
    )
    report = two_sample_metrics(
        group,
        trajectory[-1],
        reference,
        rng=rng,
        n_perms=n_perms,
        trajectory_defect=trajectory_defect,
    )
    return report, times, trajectory
