"""Command line entry point.

Exit codes: 0 success, 2 invalid configuration, 3 insufficient control
samples, 4 I/O failure.
"""
from __future__ import annotations

import argparse
import logging
import sys

from .analysis import InsufficientSamplesError
from .config import ConfigError, RunConfig, parse_config_text
from .emit import emit
from .simulate import run_simulation, sweep

EXIT_OK, EXIT_CONFIG, EXIT_SAMPLES, EXIT_IO = 0, 2, 3, 4

# CLI dest -> RunConfig field
_DEST_TO_FIELD = {
    "protocol": "protocol",
    "attack": "attack",
    "fraction": "attack_fraction",
    "control_prob": "control_prob",
    "rounds": "rounds",
    "seed": "master_seed",
    "workers": "workers",
    "pingpong_probe": "pingpong_probe",
    "ir_both_paths": "ir_both_paths",
    "cm_backward_check": "cm_backward_check",
}


def _fraction_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="twoway-qkd",
        description="Monte Carlo simulator for two-way QKD (LM05, Ping-Pong) "
                    "with a BB84 baseline.")
    # defaults are None so that config-file values survive unless overridden
    p.add_argument("--protocol", choices=["lm05", "pingpong", "bb84"])
    p.add_argument("--attack", choices=["none", "ir", "qmm"])
    p.add_argument("--fraction", type=float, help="attack fraction f in [0, 1]")
    p.add_argument("--control-prob", type=float, help="control-mode probability c in (0, 1)")
    p.add_argument("--rounds", type=int)
    p.add_argument("--seed", type=int, help="unsigned 64-bit master seed")
    p.add_argument("--workers", type=int)
    p.add_argument("--sweep", type=_fraction_list, metavar="F1,F2,...",
                   help="run one simulation per attack fraction")
    p.add_argument("--oracle", action="store_true", help="emit exact values alongside estimates")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out", default="-", help="output path (default: standard output)")
    p.add_argument("--config", help="flat key = value config file")
    p.add_argument("--pingpong-probe", choices=["zero", "plus"])
    p.add_argument("--ir-both-paths", action="store_true", default=None)
    p.add_argument("--cm-backward-check", action="store_true", default=None)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the config file, then explicit flags."""
    values = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            values.update(parse_config_text(fh.read()))
    for dest, name in _DEST_TO_FIELD.items():
        v = getattr(args, dest)
        if v is not None:
            values[name] = v
    return RunConfig(**values)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = resolve_config(args)
        if args.sweep is not None:
            if not args.sweep or not all(0.0 <= f <= 1.0 for f in args.sweep):
                raise ConfigError("--sweep needs a non-empty list of fractions in [0, 1]")
    except ConfigError as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    code = EXIT_OK
    try:
        if args.sweep is not None:
            points = sweep(config, args.sweep, with_oracle=args.oracle)
            if any(p.error for p in points):
                code = EXIT_SAMPLES
            emit(points, args.format, args.out, template=config)
        else:
            result = run_simulation(config, with_oracle=args.oracle)
            emit(result, args.format, args.out)
    except InsufficientSamplesError as exc:
        print(f"insufficient control samples: {exc}", file=sys.stderr)
        return EXIT_SAMPLES
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
