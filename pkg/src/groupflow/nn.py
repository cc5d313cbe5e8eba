"""Small MLP vector field with hand-written reverse-mode gradients and Adam.

The network maps (features(g), t) to algebra coordinates in the
left-invariant frame. Everything is float64 numpy; forward, gradient and
optimizer steps are pure functions of their inputs so training is
deterministic given the seed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .core import Array, Group, check_weights

CHECKPOINT_FORMAT = "groupflow-checkpoint"
CHECKPOINT_VERSION = 1

DEFAULT_HIDDEN = (64, 64, 64, 64)


def _sigmoid(x: Array) -> Array:
    # Evaluate through exp of a negative argument only; avoids overflow.
    pos = x >= 0
    ex = np.exp(np.where(pos, -x, x))
    return np.where(pos, 1.0 / (1.0 + ex), ex / (1.0 + ex))


def silu(x: Array) -> Array:
    """x * sigmoid(x); smooth, so the learned field is smooth in (g, t)."""
    return x * _sigmoid(x)


def silu_grad(x: Array) -> Array:
    s = _sigmoid(x)
    return s * (1.0 + x * (1.0 - s))


@dataclass
class VectorFieldNet:
    """MLP parameters plus the metadata needed to refuse mismatched inputs.

    ``weights[i]`` has shape (fan_in, fan_out); the input layer consumes
    feature_dim + 1 values (features with t appended) and the output layer
    produces algebra_dim components.
    """

    group_name: str
    feature_tag: str
    feature_dim: int
    algebra_dim: int
    hidden: tuple[int, ...]
    activation: str
    weights: list[Array]
    biases: list[Array]

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.feature_dim + 1, *self.hidden, self.algebra_dim)

    def parameters(self) -> list[Array]:
        return list(self.weights) + list(self.biases)

    def copy(self) -> "VectorFieldNet":
        return VectorFieldNet(
            group_name=self.group_name,
            feature_tag=self.feature_tag,
            feature_dim=self.feature_dim,
            algebra_dim=self.algebra_dim,
            hidden=self.hidden,
            activation=self.activation,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


def init_net(
    group: Group,
    rng: np.random.Generator,
    hidden: tuple[int, ...] = DEFAULT_HIDDEN,
) -> VectorFieldNet:
    """Kaiming-style uniform fan-in init; final layer zeroed.

    Zeroing the last layer makes the initial field identically zero, so an
    untrained net leaves every sample where it starts.
    """
    sizes = (group.feature_dim + 1, *hidden, group.dim)
    weights: list[Array] = []
    biases: list[Array] = []
    for i in range(len(sizes) - 1):
        fan_in, fan_out = sizes[i], sizes[i + 1]
        last = i == len(sizes) - 2
        if last:
            w = np.zeros((fan_in, fan_out))
        else:
            bound = np.sqrt(6.0 / fan_in)
            w = rng.uniform(-bound, bound, (fan_in, fan_out))
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return VectorFieldNet(
        group_name=group.name,
        feature_tag=group.feature_tag,
        feature_dim=group.feature_dim,
        algebra_dim=group.dim,
        hidden=tuple(hidden),
        activation="silu",
        weights=weights,
        biases=biases,
    )


def _stack_inputs(net: VectorFieldNet, features: Array, t) -> Array:
    features = np.asarray(features, dtype=float)
    if features.ndim == 1:
        features = features[None, :]
    if features.shape[-1] != net.feature_dim:
        raise ValueError(
            f"net expects {net.feature_dim} features, got {features.shape[-1]}"
        )
    t = np.asarray(t, dtype=float)
    t_col = np.broadcast_to(t, features.shape[:-1])
    return np.concatenate([features, t_col[..., None]], axis=-1)


def forward(net: VectorFieldNet, features: Array, t) -> Array:
    """Evaluate the field components for a batch of (features, t)."""
    x = _stack_inputs(net, features, t)
    n_layers = len(net.weights)
    for i in range(n_layers):
        x = x @ net.weights[i] + net.biases[i]
        if i < n_layers - 1:
            x = silu(x)
    return x


def loss_and_grad(
    net: VectorFieldNet,
    features: Array,
    t,
    target: Array,
    weights: Array | None = None,
) -> tuple[float, list[Array]]:
    """Mean weighted squared error and its exact reverse-mode gradient.

    loss = mean_i sum_j w_j (forward(f_i, t_i)_j - target_ij)^2. The gradient
    list matches ``net.parameters()`` ordering (all weights, then all biases).
    """
    target = np.asarray(target, dtype=float)
    if target.ndim == 1:
        target = target[None, :]
    x = _stack_inputs(net, features, t)
    if target.shape != (x.shape[0], net.algebra_dim):
        raise ValueError(
            f"target shape {target.shape} does not match batch "
            f"({x.shape[0]}, {net.algebra_dim})"
        )
    w = check_weights_like(net, weights)
    n = x.shape[0]
    n_layers = len(net.weights)

    activations = [x]
    pre_acts: list[Array] = []
    for i in range(n_layers):
        z = activations[-1] @ net.weights[i] + net.biases[i]
        pre_acts.append(z)
        activations.append(silu(z) if i < n_layers - 1 else z)

    diff = activations[-1] - target
    loss = float(np.mean(np.sum(w * diff * diff, axis=-1)))
    if not np.isfinite(loss):
        raise FloatingPointError("loss is non-finite")

    grad_w: list[Array] = [np.empty(0)] * n_layers
    grad_b: list[Array] = [np.empty(0)] * n_layers
    delta = 2.0 * w * diff / n
    for i in range(n_layers - 1, -1, -1):
        if i < n_layers - 1:
            delta = delta * silu_grad(pre_acts[i])
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = np.sum(delta, axis=0)
        if i > 0:
            delta = delta @ net.weights[i].T
    return loss, grad_w + grad_b


def check_weights_like(net: VectorFieldNet, weights: Array | None) -> Array:
    if weights is None:
        return np.ones(net.algebra_dim)
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (net.algebra_dim,):
        raise ValueError(
            f"metric weights must have shape ({net.algebra_dim},), got {weights.shape}"
        )
    if not np.all(weights > 0):
        raise ValueError("metric weights must all be positive")
    return weights


@dataclass
class AdamState:
    """Adam moments plus hyperparameters; shapes mirror net.parameters()."""

    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: list[Array] = field(default_factory=list)
    v: list[Array] = field(default_factory=list)


def init_adam(net: VectorFieldNet, lr: float = 1e-3) -> AdamState:
    params = net.parameters()
    return AdamState(
        lr=lr,
        m=[np.zeros_like(p) for p in params],
        v=[np.zeros_like(p) for p in params],
    )


def adam_step(state: AdamState, net: VectorFieldNet, grads: list[Array]) -> None:
    """One in-place Adam update with bias correction."""
    params = net.parameters()
    if len(grads) != len(params):
        raise ValueError("gradient list does not match parameter list")
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    correct1 = 1.0 - b1**state.step
    correct2 = 1.0 - b2**state.step
    for p, g, m, v in zip(params, grads, state.m, state.v):
        if g.shape != p.shape:
            raise ValueError("gradient shape does not match parameter shape")
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * g * g
        m_hat = m / correct1
        v_hat = v / correct2
        p -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)


def save_checkpoint(net: VectorFieldNet, path) -> None:
    """Write the net as JSON; floats use repr so values round-trip exactly."""
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "group": net.group_name,
        "feature_tag": net.feature_tag,
        "feature_dim": net.feature_dim,
        "algebra_dim": net.algebra_dim,
        "activation": net.activation,
        "hidden": list(net.hidden),
        "weights": [w.tolist() for w in net.weights],
        "biases": [b.tolist() for b in net.biases],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)
        fh.write("\n")


def load_checkpoint(path) -> VectorFieldNet:
    """Read a checkpoint, validating format, version and layer shapes."""
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise ValueError(f"{path}: not a {CHECKPOINT_FORMAT} file")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise ValueError(
            f"{path}: unsupported checkpoint version {payload.get('version')!r}"
        )
    net = VectorFieldNet(
        group_name=payload["group"],
        feature_tag=payload["feature_tag"],
        feature_dim=int(payload["feature_dim"]),
        algebra_dim=int(payload["algebra_dim"]),
        hidden=tuple(int(h) for h in payload["hidden"]),
        activation=payload["activation"],
        weights=[np.asarray(w, dtype=float) for w in payload["weights"]],
        biases=[np.asarray(b, dtype=float) for b in payload["biases"]],
    )
    sizes = net.layer_sizes
    expected = [(sizes[i], sizes[i + 1]) for i in range(len(sizes) - 1)]
    got_w = [w.shape for w in net.weights]
    got_b = [b.shape for b in net.biases]
    if got_w != expected or got_b != [(s,) for _, s in expected]:
        raise ValueError(f"{path}: layer shapes do not match declared sizes")
    if net.activation != "silu":
        raise ValueError(f"{path}: unknown activation {net.activation!r}")
    return net


def load_checkpoint_for(path, group: Group) -> VectorFieldNet:
    """Load a checkpoint and refuse group or feature-encoding mismatches."""
    net = load_checkpoint(path)
    if net.group_name != group.name:
        raise ValueError(
            f"{path}: checkpoint is for group '{net.group_name}', not '{group.name}'"
        )
    if net.feature_tag != group.feature_tag:
        raise ValueError(
            f"{path}: feature encoding '{net.feature_tag}' does not match "
            f"'{group.feature_tag}'"
        )
    if net.feature_dim != group.feature_dim or net.algebra_dim != group.dim:
        raise ValueError(f"{path}: feature/algebra dimensions do not match group")
    return net
