"""Command-line entry point: train, flow, eval, selfcheck.

Every option can come from a flat key=value config file (--config) with the
same names as the flags; explicit flags win. Unknown config keys are
rejected. Each run writes a resolved-config copy next to its outputs so any
artifact can be reproduced from the directory alone.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .checks import format_results, run_selfcheck
from .core import integrate_field
from .distributions import parse_spec, sample
from .evaluation import flow_and_eval, two_sample_metrics
from .groups import GROUP_IDS, make_group
from .io import (
    read_config_file,
    read_trajectories_csv,
    write_config_file,
    write_report_json,
    write_trajectories_csv,
)
from .nn import load_checkpoint_for
from .training import (
    DEFAULT_BATCH,
    DEFAULT_LR,
    DEFAULT_STEPS,
    TIME_EPSILON,
    TrainConfig,
    net_field,
    substream,
    train,
)

FLOW_STEPS_DEFAULT = 100
FLOW_SAMPLES_DEFAULT = 256

# Distribution parameters are config-file-only (no dedicated flags).
DIST_PARAM_KEYS = tuple(
    f"{role}_{param}"
    for role in ("source", "target")
    for param in ("sigma", "extent", "radius")
)

COMMAND_KEYS = {
    "train": {
        "group": str,
        "source": str,
        "target": str,
        "steps": int,
        "batch": int,
        "lr": float,
        "seed": int,
        "epsilon": float,
        "out": str,
        **{k: float for k in DIST_PARAM_KEYS},
    },
    "flow": {
        "checkpoint": str,
        "source": str,
        "n": int,
        "steps": int,
        "seed": int,
        "out": str,
        **{k: float for k in DIST_PARAM_KEYS if k.startswith("source")},
    },
    "eval": {
        "checkpoint": str,
        "trajectories": str,
        "group": str,
        "source": str,
        "target": str,
        "n": int,
        "steps": int,
        "seed": int,
        "out": str,
        **{k: float for k in DIST_PARAM_KEYS},
    },
}

DEFAULTS = {
    "train": {
        "steps": DEFAULT_STEPS,
        "batch": DEFAULT_BATCH,
        "lr": DEFAULT_LR,
        "seed": 0,
        "epsilon": TIME_EPSILON,
        "out": "runs/train",
    },
    "flow": {
        "n": FLOW_SAMPLES_DEFAULT,
        "steps": FLOW_STEPS_DEFAULT,
        "seed": 0,
        "out": "runs/flow",
    },
    "eval": {
        "n": FLOW_SAMPLES_DEFAULT,
        "steps": FLOW_STEPS_DEFAULT,
        "seed": 0,
        "out": "runs/eval",
    },
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="groupflow",
        description="Flow matching on Lie groups: train, integrate, evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a vector field net")
    p_train.add_argument("--group", choices=GROUP_IDS)
    p_train.add_argument("--source", help="source distribution id")
    p_train.add_argument("--target", help="target distribution id")
    p_train.add_argument("--steps", type=int)
    p_train.add_argument("--batch", type=int)
    p_train.add_argument("--lr", type=float)
    p_train.add_argument("--seed", type=int)
    p_train.add_argument("--epsilon", type=float)
    p_train.add_argument("--out")
    p_train.add_argument("--config")
    p_train.set_defaults(func=cmd_train)

    p_flow = sub.add_parser("flow", help="integrate samples under a trained field")
    p_flow.add_argument("--checkpoint")
    p_flow.add_argument("--source")
    p_flow.add_argument("--n", type=int)
    p_flow.add_argument("--steps", type=int)
    p_flow.add_argument("--seed", type=int)
    p_flow.add_argument("--out")
    p_flow.add_argument("--config")
    p_flow.set_defaults(func=cmd_flow)

    p_eval = sub.add_parser("eval", help="score generated samples against a target")
    p_eval.add_argument("--checkpoint")
    p_eval.add_argument("--trajectories", help="trajectory CSV to evaluate")
    p_eval.add_argument("--group", choices=GROUP_IDS)
    p_eval.add_argument("--source")
    p_eval.add_argument("--target")
    p_eval.add_argument("--n", type=int)
    p_eval.add_argument("--steps", type=int)
    p_eval.add_argument("--seed", type=int)
    p_eval.add_argument("--out")
    p_eval.add_argument("--config")
    p_eval.set_defaults(func=cmd_eval)

    p_check = sub.add_parser("selfcheck", help="run the fast property suite")
    p_check.add_argument(
        "--inject-sinc-fault",
        action="store_true",
        help="perturb sinc to prove the checks can fail",
    )
    p_check.set_defaults(func=cmd_selfcheck)
    return parser


def resolve_options(args: argparse.Namespace, command: str) -> dict:
    """Merge config file and flags; flags win, unknown config keys rejected."""
    keys = COMMAND_KEYS[command]
    resolved: dict = {}
    config_path = getattr(args, "config", None)
    if config_path:
        raw = read_config_file(config_path)
        unknown = set(raw) - set(keys)
        if unknown:
            raise ValueError(
                f"{config_path}: unknown config keys {sorted(unknown)} "
                f"(known: {sorted(keys)})"
            )
        for key, text in raw.items():
            try:
                resolved[key] = keys[key](text)
            except ValueError:
                raise ValueError(
                    f"{config_path}: bad value for '{key}': '{text}'"
                ) from None
    for key in keys:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            resolved[key] = flag_value
    for key, value in DEFAULTS[command].items():
        resolved.setdefault(key, value)
    return resolved


def _require(resolved: dict, command: str, *names: str) -> None:
    missing = [n for n in names if resolved.get(n) is None]
    if missing:
        raise ValueError(
            f"groupflow {command}: missing required option(s): "
            + ", ".join(f"--{n}" for n in missing)
        )


def _dist_params(resolved: dict, role: str) -> dict[str, float] | None:
    params = {
        key[len(role) + 1 :]: resolved[key]
        for key in DIST_PARAM_KEYS
        if key.startswith(role) and key in resolved
    }
    return params or None


def _out_dir(resolved: dict) -> Path:
    out = Path(resolved["out"])
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_train(args: argparse.Namespace) -> int:
    resolved = resolve_options(args, "train")
    _require(resolved, "train", "group", "source", "target")
    out = _out_dir(resolved)
    config = TrainConfig(
        group_id=resolved["group"],
        source=resolved["source"],
        target=resolved["target"],
        steps=resolved["steps"],
        batch=resolved["batch"],
        lr=resolved["lr"],
        seed=resolved["seed"],
        epsilon=resolved["epsilon"],
        source_params=_dist_params(resolved, "source"),
        target_params=_dist_params(resolved, "target"),
        checkpoint_path=str(out / "checkpoint.json"),
        loss_log_path=str(out / "loss.csv"),
    )
    write_config_file(out / "train-config.txt", resolved)
    _, losses = train(config)
    print(f"trained {resolved['steps']} steps; final loss {losses[-1]:.6g}")
    print(f"wrote {config.checkpoint_path} and {config.loss_log_path}")
    return 0


def cmd_flow(args: argparse.Namespace) -> int:
    resolved = resolve_options(args, "flow")
    _require(resolved, "flow", "checkpoint", "source")
    out = _out_dir(resolved)
    write_config_file(out / "flow-config.txt", resolved)

    net_meta_group = _group_from_checkpoint(resolved["checkpoint"])
    net = load_checkpoint_for(resolved["checkpoint"], net_meta_group)
    spec = parse_spec(resolved["source"], net_meta_group, _dist_params(resolved, "source"))
    rng = substream(resolved["seed"], "flow")
    g0 = sample(spec, net_meta_group, resolved["n"], rng)
    times, trajectory = integrate_field(
        net_meta_group, net_field(net_meta_group, net), g0, resolved["steps"]
    )
    path = out / "trajectories.csv"
    write_trajectories_csv(path, net_meta_group, times, trajectory)
    print(f"wrote {path} ({resolved['n']} samples, {resolved['steps']} steps)")
    return 0


def _group_from_checkpoint(path: str):
    with open(path) as fh:
        payload = json.load(fh)
    if not isinstance(payload, dict) or "group" not in payload:
        raise ValueError(f"{path}: not a checkpoint file")
    return make_group(payload["group"])


def cmd_eval(args: argparse.Namespace) -> int:
    resolved = resolve_options(args, "eval")
    _require(resolved, "eval", "target")
    out = _out_dir(resolved)
    write_config_file(out / "eval-config.txt", resolved)

    rng = substream(resolved["seed"], "eval")
    if resolved.get("trajectories"):
        _require(resolved, "eval", "group")
        group = make_group(resolved["group"])
        _, _, coords = read_trajectories_csv(resolved["trajectories"], group)
        endpoints = group.from_coords(coords[-1])
        target = parse_spec(resolved["target"], group, _dist_params(resolved, "target"))
        reference = sample(target, group, resolved["n"], rng)
        report = two_sample_metrics(group, endpoints, reference, rng=rng)
    elif resolved.get("checkpoint"):
        _require(resolved, "eval", "source")
        group = _group_from_checkpoint(resolved["checkpoint"])
        net = load_checkpoint_for(resolved["checkpoint"], group)
        source = parse_spec(resolved["source"], group, _dist_params(resolved, "source"))
        target = parse_spec(resolved["target"], group, _dist_params(resolved, "target"))
        report, _, _ = flow_and_eval(
            group, net, source, target, resolved["steps"], resolved["n"], rng
        )
    else:
        raise ValueError("groupflow eval: need --trajectories or --checkpoint")
    path = out / "report.json"
    write_report_json(path, report.to_dict())
    print(f"mmd {report.mmd:.6g} (null 99th pct {report.mmd_null_99:.6g})")
    print(f"energy distance {report.energy_distance:.6g}")
    print(f"wrote {path}")
    return 0


def cmd_selfcheck(args: argparse.Namespace) -> int:
    results = run_selfcheck(inject_sinc_fault=args.inject_sinc_fault)
    print(format_results(results))
    return sum(not r.passed for r in results)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FloatingPointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
