"""Fast self-contained property suite behind the `selfcheck` CLI command.

Each check re-derives its expectation from group axioms or closed-form
values, so the suite needs nothing beyond the package itself and finishes
in seconds. The sinc fault-injection hook exists to prove the checks can
fail: with a perturbed sinc the roundtrip checks must go red.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core
from .core import conditional_field, distance, exp_curve, integrate_field
from .distributions import parse_spec, sample
from .groups import GROUP_IDS, make_group
from .nn import forward, init_net, loss_and_grad
from .training import TrainConfig, substream, train

CHECK_SEED = 20260819


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, value: float, bound: float) -> CheckResult:
    return CheckResult(
        name=name,
        passed=bool(value < bound),
        detail=f"max {value:.3e} (bound {bound:.0e})",
    )


def check_roundtrips(group_id: str, n: int = 1000) -> CheckResult:
    group = make_group(group_id)
    rng = substream(CHECK_SEED, f"roundtrip-{group_id}")
    g = group.random_elements(rng, n)
    err = float(np.max(distance(group, group.exp(group.log(g)), g)))
    return _result(f"exp(log(g)) = g on {group_id}", err, 1e-9)


def check_algebra_roundtrip(group_id: str, n: int = 1000) -> CheckResult:
    group = make_group(group_id)
    rng = substream(CHECK_SEED, f"alg-roundtrip-{group_id}")
    alg = rng.uniform(-1.0, 1.0, (n, group.dim))
    # Stay inside the restricted domain: rotation components short of pi.
    if group_id == "se2":
        alg[:, 2] *= np.pi - 1e-3
    elif group_id == "so3":
        alg *= (np.pi - 1e-3) / np.sqrt(group.dim)
    elif group_id == "se2xr2":
        alg[:, 2] *= np.pi - 1e-3
    err = float(np.max(np.abs(group.log(group.exp(alg)) - alg)))
    return _result(f"log(exp(c)) = c on {group_id}", err, 1e-7)


def check_curve_endpoints(group_id: str, n: int = 200) -> CheckResult:
    group = make_group(group_id)
    rng = substream(CHECK_SEED, f"endpoints-{group_id}")
    g0 = group.random_elements(rng, n)
    g1 = group.random_elements(rng, n)
    err0 = float(np.max(distance(group, exp_curve(group, g0, g1, 0.0), g0)))
    err1 = float(np.max(distance(group, exp_curve(group, g0, g1, 1.0), g1)))
    return _result(f"curve endpoints on {group_id}", max(err0, err1), 1e-9)


def check_curve_log_identity(group_id: str, n: int = 200) -> CheckResult:
    """log(gamma(t)^-1 g1) must equal (1-t) log(g0^-1 g1) along the curve."""
    group = make_group(group_id)
    rng = substream(CHECK_SEED, f"curve-log-{group_id}")
    g0 = group.random_elements(rng, n)
    g1 = group.random_elements(rng, n)
    full = group.log(group.product(group.inverse(g0), g1))
    worst = 0.0
    for t in np.arange(0.0, 1.0, 0.1):
        g_t = exp_curve(group, g0, g1, t)
        rest = group.log(group.product(group.inverse(g_t), g1))
        worst = max(worst, float(np.max(np.abs(rest - (1.0 - t) * full))))
    return _result(f"curve log identity on {group_id}", worst, 1e-8)


def check_field_integration(group_id: str, n: int = 50) -> CheckResult:
    group = make_group(group_id)
    rng = substream(CHECK_SEED, f"integrate-{group_id}")
    g0 = group.random_elements(rng, n)
    g1 = group.random_elements(rng, n)
    _, trajectory = integrate_field(
        group, lambda g, t: conditional_field(group, g, g1, t), g0, steps=200
    )
    err = float(np.max(distance(group, trajectory[-1], g1)))
    return _result(f"field integration reaches target on {group_id}", err, 1e-9)


def check_translation_reduction(n: int = 500) -> CheckResult:
    group = make_group("r2")
    rng = substream(CHECK_SEED, "translation-reduction")
    x0 = group.random_elements(rng, n)
    x1 = group.random_elements(rng, n)
    worst = 0.0
    for t in (0.0, 0.25, 0.5, 0.75):
        curve = exp_curve(group, x0, x1, t)
        worst = max(worst, float(np.max(np.abs(curve - ((1 - t) * x0 + t * x1)))))
        field = conditional_field(group, curve, x1, t)
        worst = max(worst, float(np.max(np.abs(field - (x1 - curve) / (1 - t)))))
    return _result("translation case reduces to line segments", worst, 1e-12)


def check_gradients(n_nets: int = 3) -> CheckResult:
    group = make_group("se2")
    rng = substream(CHECK_SEED, "gradcheck")
    eps = 1e-5
    worst = 0.0
    for _ in range(n_nets):
        net = init_net(group, rng, hidden=(8, 8))
        net.weights[-1] = rng.standard_normal(net.weights[-1].shape) * 0.5
        net.biases[-1] = rng.standard_normal(net.biases[-1].shape) * 0.1
        feats = group.features(group.random_elements(rng, 4))
        t = rng.uniform(0.0, 0.9, 4)
        target = rng.standard_normal((4, group.dim))
        _, grads = loss_and_grad(net, feats, t, target)
        params = net.parameters()
        for pi, p in enumerate(params):
            flat = p.reshape(-1)
            for idx in range(0, flat.size, max(1, flat.size // 5)):
                orig = flat[idx]
                flat[idx] = orig + eps
                lp, _ = loss_and_grad(net, feats, t, target)
                flat[idx] = orig - eps
                lm, _ = loss_and_grad(net, feats, t, target)
                flat[idx] = orig
                fd = (lp - lm) / (2 * eps)
                an = grads[pi].reshape(-1)[idx]
                rel = abs(fd - an) / max(abs(fd), abs(an), 1e-8)
                worst = max(worst, rel)
    return _result("gradients match finite differences", worst, 1e-4)


def check_forward_determinism() -> CheckResult:
    group = make_group("so3")
    rng = substream(CHECK_SEED, "forward-determinism")
    net = init_net(group, rng)
    feats = group.features(group.random_elements(rng, 8))
    t = rng.uniform(0.0, 0.9, 8)
    a = forward(net, feats, t)
    b = forward(net, feats, t)
    same = np.array_equal(a, b)
    return CheckResult(
        "forward pass is deterministic", bool(same), "bit-identical" if same else "diverged"
    )


def check_point_mass_training() -> CheckResult:
    config = TrainConfig(
        group_id="se2",
        source="se2-point",
        target="se2-point",
        steps=100,
        batch=32,
        seed=CHECK_SEED,
    )
    _, losses = train(config)
    final = float(losses[-1])
    return _result("point-mass task trains to zero loss", final, 1e-6)


def check_known_values() -> CheckResult:
    """Closed-form anchors worked out by hand from the group laws."""
    se2 = make_group("se2")
    so3 = make_group("so3")
    worst = 0.0
    # A quarter-turn screw motion: exp((pi/2, 0, pi/2)) lands at (1, 1, pi/2).
    got = se2.exp(np.array([np.pi / 2, 0.0, np.pi / 2]))
    worst = max(worst, float(np.max(np.abs(got - np.array([1.0, 1.0, np.pi / 2])))))
    # Product with a quarter-turn frame: (1,0,pi/2) * (1,0,0) = (1,1,pi/2).
    got = se2.product(np.array([1.0, 0.0, np.pi / 2]), np.array([1.0, 0.0, 0.0]))
    worst = max(worst, float(np.max(np.abs(got - np.array([1.0, 1.0, np.pi / 2])))))
    # Angle wrap: 3pi/4 + 3pi/4 = 3pi/2, stored as -pi/2.
    got = se2.product(
        np.array([0.0, 0.0, 3 * np.pi / 4]), np.array([0.0, 0.0, 3 * np.pi / 4])
    )
    worst = max(worst, abs(float(got[2]) + np.pi / 2))
    # Quarter turn about z.
    got = so3.exp(np.array([0.0, 0.0, np.pi / 2]))
    want = np.array([[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    worst = max(worst, float(np.max(np.abs(got - want))))
    return _result("hand-computed anchor values", worst, 1e-12)


def check_distribution_validity() -> CheckResult:
    worst = 0.0
    rng = substream(CHECK_SEED, "distribution-validity")
    for group_id, spec_id in (
        ("se2", "hline"),
        ("se2", "circle"),
        ("so3", "vline"),
        ("so3", "circle"),
        ("se2xr2", "hline+gaussian"),
    ):
        group = make_group(group_id)
        spec = parse_spec(spec_id, group)
        batch = sample(spec, group, 200, rng)
        worst = max(worst, float(np.max(group.element_defect(batch))))
    return _result("samplers stay on their groups", worst, 1e-12)


def run_selfcheck(inject_sinc_fault: bool = False) -> list[CheckResult]:
    """Run every check; with the fault injected, sinc users must go red."""
    if inject_sinc_fault:
        core.set_sinc_fault(2e-3)
    try:
        results: list[CheckResult] = []
        for group_id in GROUP_IDS:
            results.append(check_roundtrips(group_id))
            results.append(check_algebra_roundtrip(group_id))
            results.append(check_curve_endpoints(group_id))
            results.append(check_curve_log_identity(group_id))
            results.append(check_field_integration(group_id))
        results.append(check_translation_reduction())
        results.append(check_known_values())
        results.append(check_distribution_validity())
        results.append(check_forward_determinism())
        results.append(check_gradients())
        results.append(check_point_mass_training())
        return results
    finally:
        core.set_sinc_fault(0.0)


def format_results(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name:<{width}}  {r.detail}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines)
