"""Command-line entry points: run, oracle, estimate-noise, gen-state."""

from __future__ import annotations

import argparse
import json
import sys

from .circuits import TargetSpec, build_target, to_text
from .errors import NegativeRate
from .experiments import (
    ExperimentConfig,
    config_from_dict,
    run_estimate_noise,
    run_experiment,
    run_oracle,
    write_json,
    write_text,
)


def _load_config(args) -> ExperimentConfig:
    raw = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    if args.shots is not None:
        raw["shots"] = args.shots
    if args.noise_p:
        raw["noise_p"] = args.noise_p
    if args.depth is not None:
        raw["depth_override"] = args.depth
    if args.mitigate:
        raw["mitigate"] = True
    if args.seed is not None:
        raw["master_seed"] = args.seed
    if args.jobs is not None:
        raw["jobs"] = args.jobs
    return config_from_dict(raw)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON config file (flat key/value)")
    p.add_argument("--shots", type=int, default=None, help="shots per measurement setting")
    p.add_argument(
        "--noise-p", type=float, action="append", default=None, help="noise rate (repeatable)"
    )
    p.add_argument("--depth", type=int, default=None, help="override the effective depth")
    p.add_argument("--mitigate", action="store_true", help="emit the mitigated column")
    p.add_argument("--seed", type=int, default=None, help="master seed")
    p.add_argument("--out-csv", default=None)
    p.add_argument("--out-json", default=None)
    p.add_argument("--jobs", type=int, default=None, help="parallel worker count")


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="geoment", description="geometric-entanglement experiment runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (
        ("run", "measurement-driven runs over the (target x init x noise) grid"),
        ("oracle", "classical power-iteration baseline on the same grid"),
        ("estimate-noise", "calibrate the depolarising rate against a GHZ reference"),
    ):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp)

    gen = sub.add_parser("gen-state", help="write a target circuit as text")
    gen.add_argument("--family", required=True, choices=("GHZ", "W3", "RING", "RANDOM"))
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--seed", type=int, default=None, help="target seed (RANDOM only)")
    gen.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    try:
        if args.command == "gen-state":
            circuit = build_target(TargetSpec(args.family, args.n, args.seed))
            write_text(args.out, to_text(circuit))
            return 0

        cfg = _load_config(args)
        if args.command == "run":
            csv_text, summary = run_experiment(cfg)
            if args.out_csv:
                write_text(args.out_csv, csv_text)
            if args.out_json:
                write_json(args.out_json, summary)
            if not args.out_csv and not args.out_json:
                sys.stdout.write(csv_text)
            return 0
        if args.command == "oracle":
            csv_text, summary = run_oracle(cfg)
            if args.out_csv:
                write_text(args.out_csv, csv_text)
            if args.out_json:
                write_json(args.out_json, summary)
            if not args.out_csv and not args.out_json:
                sys.stdout.write(csv_text)
            return 0
        if args.command == "estimate-noise":
            try:
                payload = run_estimate_noise(cfg)
            except NegativeRate as err:
                print(
                    f"error: {err}\nhint: the measured reference value must exceed the "
                    "known one; rerun with more shots or check the injected noise",
                    file=sys.stderr,
                )
                return 1
            if args.out_json:
                write_json(args.out_json, payload)
            else:
                json.dump(payload, sys.stdout, indent=2)
                sys.stdout.write("\n")
            return 0
    except (ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
