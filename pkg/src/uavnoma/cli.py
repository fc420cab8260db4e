"""Command-line entry point: ``uavnoma {validate,sweep,compare,figure,show}``.

Exit codes: 0 success, 1 invalid scenario or arguments, 2 comparison failure
(some point more than 5 standard errors from the simulation).
"""
from __future__ import annotations

import argparse
import sys

from . import experiments
from .config import SystemConfig, dbm_to_watts, validate
from .scenario import ScenarioError, dump_scenario, load_scenario

EXIT_OK, EXIT_INVALID, EXIT_COMPARE = 0, 1, 2


def _scenario_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", help="scenario file (defaults to the built-in reference setup)")
    p.add_argument("--mode", choices=("corrected", "paper-literal"))
    p.add_argument("--harvest", choices=("alias-gl", "distinct-ge"))
    p.add_argument("--relay", choices=("eh", "fixed"), default=None,
                   help="relay power model; 'fixed' transmits at --baseline-power (default: P_t)")
    p.add_argument("--baseline-power", type=float, metavar="DBM",
                   help="fixed relay power of the non-EH baseline, in dBm")


def _mc_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uavnoma", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a scenario and list violations")
    _scenario_args(p)

    p = sub.add_parser("show", help="print the resolved scenario in file format")
    _scenario_args(p)

    p = sub.add_parser("sweep", help="sweep one parameter and write a CSV")
    _scenario_args(p)
    _mc_args(p)
    p.add_argument("--sweep", required=True, choices=experiments.AXES)
    p.add_argument("--values", required=True, help="start:stop:step (inclusive) or comma list")
    p.add_argument("--level", default="device,cmu,network",
                   help="comma list drawn from device, cmu, network")
    p.add_argument("--methods", choices=experiments.METHODS, default="both")
    p.add_argument("--out", help="CSV path (stdout when omitted)")

    p = sub.add_parser("compare", help="analytic vs Monte Carlo table")
    _scenario_args(p)
    p.add_argument("--values", default="0:40:5", help="transmit powers in dBm")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seeds", default="1,2,3", help="comma list of seeds, counts are pooled")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("figure", help="run a figure recipe, one CSV per curve")
    _scenario_args(p)
    _mc_args(p)
    p.add_argument("name", choices=experiments.RECIPES)
    p.add_argument("--methods", choices=experiments.METHODS, default="both")
    p.add_argument("--out", default=".", help="output directory")
    return parser


def _resolve(args) -> SystemConfig:
    cfg = load_scenario(args.scenario) if args.scenario else SystemConfig()
    changes = {}
    if args.mode:
        changes["theorem1_variant"] = args.mode
    if args.harvest:
        changes["harvest_channel"] = args.harvest
    if args.relay == "fixed":
        bp = args.baseline_power
        changes["relay_power"] = cfg.p_t if bp is None else dbm_to_watts(bp)
    elif args.relay == "eh":
        changes["relay_power"] = None
    return cfg.replace(**changes)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
    except (ScenarioError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = validate(cfg)
    if not report.ok:
        print("invalid scenario:", file=sys.stderr)
        for v in report.violations:
            print(f"  - {v}", file=sys.stderr)
        return EXIT_INVALID
    baseline = dbm_to_watts(args.baseline_power) if args.baseline_power is not None else None

    if args.command == "validate":
        print("valid")
        return EXIT_OK
    if args.command == "show":
        sys.stdout.write(dump_scenario(cfg))
        return EXIT_OK

    if args.command == "sweep":
        try:
            spec = experiments.SweepSpec(args.sweep, experiments.parse_values(args.values),
                                         tuple(s.strip() for s in args.level.split(",")), args.methods)
            text = experiments.run_sweep(cfg, spec, args.out, args.trials, args.seed,
                                         args.workers, baseline)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVALID
        if args.out is None:
            sys.stdout.write(text)
        return EXIT_OK

    if args.command == "compare":
        seeds = tuple(int(s) for s in args.seeds.split(","))
        res = experiments.compare(cfg, experiments.parse_values(args.values), args.trials, seeds,
                                  baseline, args.workers)
        print(res.table())
        worst = res.worst
        print(f"worst |analytic - mc| = {worst:.2f} SE; points beyond 3 SE: {res.exceed(3.0)}"
              f" of {len(res.rows)}")
        return EXIT_COMPARE if worst > 5.0 else EXIT_OK

    if args.command == "figure":
        paths = experiments.run_recipe(cfg, args.name, args.out, args.trials, args.seed,
                                       args.workers, args.methods, baseline)
        for p in paths:
            print(p)
        return EXIT_OK
    return EXIT_INVALID  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
