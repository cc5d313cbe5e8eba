"""Conditional flow matching: sample (T, G0, G1), interpolate, regress.

The regression target is the constant algebra vector log(G0^-1 G1) rather
than the (1-t)-division form evaluated at G_T: the two agree along the
interpolant (same identity that makes exponential curves integral curves of
the conditional field) and the constant form has no pole at t = 1.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .core import Array, Group, check_weights
from .distributions import DistributionSpec, parse_spec, sample
from .groups import make_group
from .io import write_loss_csv
from .nn import (
    VectorFieldNet,
    adam_step,
    forward,
    init_adam,
    init_net,
    loss_and_grad,
    save_checkpoint,
)

TIME_EPSILON = 1e-3
DEFAULT_STEPS = 10_000
DEFAULT_BATCH = 256
DEFAULT_LR = 1e-3


def substream(seed: int, label: str) -> np.random.Generator:
    """Independent generator derived from (seed, label); label change only.

    The label is hashed so adding streams never shifts existing ones.
    """
    digest = hashlib.blake2s(label.encode(), digest_size=8).digest()
    return np.random.default_rng(
        np.random.SeedSequence([int(seed), int.from_bytes(digest, "big")])
    )


@dataclass
class TrainConfig:
    group_id: str
    source: str
    target: str
    steps: int = DEFAULT_STEPS
    batch: int = DEFAULT_BATCH
    lr: float = DEFAULT_LR
    seed: int = 0
    epsilon: float = TIME_EPSILON
    metric_weights: tuple[float, ...] | None = None
    source_params: dict[str, float] | None = None
    target_params: dict[str, float] | None = None
    checkpoint_path: str | None = None
    loss_log_path: str | None = None

    def validate(self) -> None:
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.batch < 1:
            raise ValueError("batch must be >= 1")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if self.lr <= 0:
            raise ValueError("lr must be > 0")


def cfm_sample(
    group: Group,
    source: DistributionSpec,
    target: DistributionSpec,
    batch: int,
    epsilon: float,
    rng: np.random.Generator,
) -> tuple[Array, Array, Array]:
    """One training batch: (features(G_T), T, regression target).

    T ~ Uniform[0, 1-epsilon]; G0, G1 drawn independently;
    G_T = G0 exp(T log(G0^-1 G1)); target = log(G0^-1 G1).
    """
    t = rng.uniform(0.0, 1.0 - epsilon, batch)
    g0 = sample(source, group, batch, rng)
    g1 = sample(target, group, batch, rng)
    alg = group.log(group.product(group.inverse(g0), g1))
    g_t = group.product(g0, group.exp(t[:, None] * alg))
    return group.features(g_t), t, alg


def net_field(group: Group, net: VectorFieldNet):
    """Wrap a net as a (g, t) -> algebra-coordinates field for integration."""

    def field(g, t):
        return forward(net, group.features(g), t)

    return field


def train(config: TrainConfig) -> tuple[VectorFieldNet, Array]:
    """Run the CFM loop; returns the net and the per-step loss history.

    Writes the checkpoint and loss log if the config names paths. Aborts
    with FloatingPointError naming the step if the loss turns non-finite.
    """
    config.validate()
    group = make_group(config.group_id)
    source = parse_spec(config.source, group, config.source_params)
    target = parse_spec(config.target, group, config.target_params)
    weights = check_weights(
        group,
        None
        if config.metric_weights is None
        else np.asarray(config.metric_weights, dtype=float),
    )

    net = init_net(group, substream(config.seed, "net-init"))
    opt = init_adam(net, lr=config.lr)
    rng = substream(config.seed, "cfm-batches")

    losses = np.empty(config.steps)
    for step in range(config.steps):
        features, t, alg = cfm_sample(
            group, source, target, config.batch, config.epsilon, rng
        )
        try:
            loss, grads = loss_and_grad(net, features, t, alg, weights)
        except FloatingPointError:
            raise FloatingPointError(
                f"training aborted: non-finite loss at step {step}"
            ) from None
        adam_step(opt, net, grads)
        losses[step] = loss

    if config.loss_log_path:
        write_loss_csv(config.loss_log_path, losses)
    if config.checkpoint_path:
        save_checkpoint(net, config.checkpoint_path)
    return net, losses
