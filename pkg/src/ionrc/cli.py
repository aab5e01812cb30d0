"""Command-line entry point.

Subcommands: run, sweep, plotdata, activation-dump, validate-config.
Output root: --output, else the IONRC_OUTPUT_ROOT environment variable,
else ./runs. Exit codes: 0 success, 1 config validation, 2 runtime
failure, 3 divergence.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .config import load_payload, parse_config, preset_payload
from .errors import ConfigError, DivergenceError, IonrcError

PLOTDATA_CHOICES = ("fig2a", "fig2b", "fig3a", "fig3b", "activation")


def _add_config_source(parser: argparse.ArgumentParser, required: bool = True):
    group = parser.add_mutually_exclusive_group(required=required)
    group.add_argument("--preset", metavar="NAME", help="bundled preset name")
    group.add_argument("--config", metavar="FILE", help="JSON config file")


def _add_run_options(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="override run.master_seed")
    parser.add_argument("--n-seeds", type=int, default=None, help="override run.n_seeds")
    parser.add_argument(
        "--output",
        metavar="DIR",
        default=None,
        help="output root (default: $IONRC_OUTPUT_ROOT or ./runs)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ionrc",
        description="Iontronic reservoir computing: seeded experiments, sweeps, plot data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run every variant of an experiment config")
    _add_config_source(p_run)
    _add_run_options(p_run)
    p_run.add_argument("--no-render", action="store_true", help="skip PNG rendering")

    p_sweep = sub.add_parser("sweep", help="seeded random search over sweep.space")
    _add_config_source(p_sweep)
    _add_run_options(p_sweep)
    p_sweep.add_argument("--trials", type=int, default=None, help="override sweep.n_trials")

    p_plot = sub.add_parser("plotdata", help="reshape run artifacts into figure CSVs")
    _add_config_source(p_plot)
    _add_run_options(p_plot)
    p_plot.add_argument("--which", required=True, choices=PLOTDATA_CHOICES)
    p_plot.add_argument(
        "--run-dir",
        metavar="DIR",
        default=None,
        help="directory holding the run artifacts (default: the run's output dir)",
    )

    p_act = sub.add_parser("activation-dump", help="tabulate the steady-state response curve")
    _add_config_source(p_act, required=False)
    p_act.add_argument("--v-min", type=float, default=-1.0, help="lowest voltage (V)")
    p_act.add_argument("--v-max", type=float, default=1.0, help="highest voltage (V)")
    p_act.add_argument("--points", type=int, default=401, help="number of grid points")
    p_act.add_argument("--output", metavar="FILE", default=None, help="CSV path")

    p_val = sub.add_parser("validate-config", help="parse and validate, compute nothing")
    _add_config_source(p_val)
    return parser


def _payload(args) -> tuple[dict, str]:
    """Raw config tree plus a name for the output directory."""
    if args.preset:
        return preset_payload(args.preset), args.preset
    return load_payload(args.config), Path(args.config).stem


def _apply_overrides(payload: dict, args) -> dict:
    if getattr(args, "seed", None) is not None:
        payload.setdefault("run", {})["master_seed"] = args.seed
    if getattr(args, "n_seeds", None) is not None:
        payload.setdefault("run", {})["n_seeds"] = args.n_seeds
    return payload


def _output_root(args) -> Path:
    if getattr(args, "output", None):
        return Path(args.output)
    return Path(os.environ.get("IONRC_OUTPUT_ROOT", "runs"))


def _metric_summary(metrics: dict) -> list[str]:
    lines = [
        f"task={metrics['task']} master_seed={metrics['master_seed']} "
        f"n_seeds={metrics['n_seeds']}"
    ]
    for name, block in metrics["variants"].items():
        parts = [
            f"{key}={block[key]:.6g}"
            for key in sorted(block)
            if key.endswith(("_mean", "_median")) and isinstance(block[key], float)
        ]
        parts.append(f"diverged_seeds={block['diverged_seeds']}")
        lines.append(f"  {name}: " + "  ".join(parts))
    for extra in ("comparison", "baselines"):
        if extra in metrics:
            pairs = "  ".join(f"{k}={v:.6g}" for k, v in metrics[extra].items())
            lines.append(f"  {extra}: {pairs}")
    return lines


def _cmd_run(args) -> int:
    from . import experiments

    payload, name = _payload(args)
    config = parse_config(_apply_overrides(payload, args))
    out = _output_root(args) / name
    metrics = experiments.run_experiment(config, out, render=not args.no_render)
    for line in _metric_summary(metrics):
        print(line)
    print(f"artifacts: {out}")
    return 0


def _cmd_sweep(args) -> int:
    from . import experiments

    payload, name = _payload(args)
    payload = _apply_overrides(payload, args)
    out = _output_root(args) / f"{name}-sweep"
    report = experiments.sweep(
        payload, n_trials=args.trials, seed=args.seed, output_dir=out
    )
    ok = [t for t in report["trials"] if t["status"] == "ok"]
    print(f"trials={report['n_trials']} ok={len(ok)} failed={report['n_trials'] - len(ok)}")
    if report["best"] is not None:
        best = report["best"]
        print(f"best: trial={best['trial']} objective={best['objective']:.6g}")
        for path, value in best["params"].items():
            print(f"  {path} = {value!r}")
    else:
        print("best: none (every trial failed)")
    print(f"artifacts: {out}")
    return 0


def _cmd_plotdata(args) -> int:
    from . import experiments

    payload, name = _payload(args)
    config = parse_config(_apply_overrides(payload, args))
    run_dir = Path(args.run_dir) if args.run_dir else _output_root(args) / name
    written = experiments.emit_plotdata(config, args.which, run_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


def _cmd_activation_dump(args) -> int:
    import numpy as np

    from . import serialize
    from .memristor import ChannelParams, dump_activation

    if args.preset or args.config:
        payload, name = _payload(args)
        channel = parse_config(payload).channel
    else:
        channel, name = ChannelParams.from_lab_units(), "channel"
    pairs = dump_activation(channel, v_min=args.v_min, v_max=args.v_max, n_points=args.points)
    path = Path(args.output) if args.output else _output_root(args) / f"{name}-activation.csv"
    serialize.write_table_csv(
        path,
        {
            "voltage_V": pairs[:, 0],
            "activation": pairs[:, 1],
            "tanh_V": np.tanh(pairs[:, 0]),
        },
    )
    print(f"wrote {path}")
    return 0


def _cmd_validate_config(args) -> int:
    payload, name = _payload(args)
    config = parse_config(payload)
    variants = ", ".join(v.name for v in config.variants)
    print(
        f"{name}: valid  task={config.task}  variants=[{variants}]  "
        f"n_seeds={config.run.n_seeds}"
    )
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "plotdata": _cmd_plotdata,
    "activation-dump": _cmd_activation_dump,
    "validate-config": _cmd_validate_config,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return 3
    except (IonrcError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
