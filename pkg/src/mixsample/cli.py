"""Command-line front end for the benchmark sweeps.

    mixsample purity-sweep --config sweep.cfg --out results/
    mixsample bound --spins 9
    mixsample pulse --seed 3
"""

import argparse
import logging
import sys

from .experiments import (
    FULL_SCALE,
    SweepConfig,
    bound_table,
    emit_outputs,
    load_config,
    pulse_table,
    run_polarization_study,
    run_purity_sweep,
    run_sample_size_sweep,
    run_spectrum_comparison,
)

COMMANDS = {
    "purity-sweep": (run_purity_sweep, "mean error vs purity for each estimator"),
    "k-sweep": (run_sample_size_sweep, "one purity table per sample size"),
    "spectrum-compare": (run_spectrum_comparison, "spectral presets and population residua"),
    "polarization": (run_polarization_study, "total polarization over a field-amplitude grid"),
    "bound": (bound_table, "worst-case bound table, no propagation"),
    "pulse": (pulse_table, "dump the pulse of trial 0"),
}


def _global_flags():
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument("--config", help="flat key = value config file")
    parent.add_argument("--seed", type=int, help="master seed")
    parent.add_argument("--spins", type=int, help="number of spins")
    parent.add_argument("--trials", type=int, help="random trials per point")
    parent.add_argument("--out", help="output directory")
    parent.add_argument("--threads", type=int, help="worker processes")
    parent.add_argument(
        "--full-scale", action="store_true", help="10 spins, 200 trials, 1024 steps (hours)"
    )
    parent.add_argument("-v", "--verbose", action="store_true")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mixsample", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parent = _global_flags()
    for name, (_, help_text) in COMMANDS.items():
        sub.add_parser(name, parents=[parent], help=help_text)
    return parser


def config_from_args(args) -> SweepConfig:
    overrides = {}
    if args.full_scale:
        overrides.update(FULL_SCALE)
    overrides.update(
        n_spins=args.spins,
        n_observables=args.trials,
        master_seed=args.seed,
        output_dir=args.out,
        threads=args.threads,
    )
    overrides = {k: v for k, v in overrides.items() if v is not None}
    if args.config:
        return load_config(args.config, **overrides)
    return SweepConfig(**overrides)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args)
    except (OSError, ValueError) as exc:
        print(f"mixsample: {exc}", file=sys.stderr)
        return 2
    run, _ = COMMANDS[args.command]
    result = run(config)
    written = emit_outputs(result, config.output_dir, config, args.command)
    if args.command == "bound":
        header, rows = result.extra["bounds"]
        print("\t".join(header))
        for row in rows:
            print("\t".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row))
    for path in written:
        if path.endswith(".csv"):
            print(path)
    if result.failures:
        print(f"{result.failures} trial(s) failed; see log", file=sys.stderr)
    return 0
