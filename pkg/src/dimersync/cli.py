"""Command-line front end.

Subcommands: spectrum, evolve, sync-map, corr-spectrum, bh-params.
Exit codes: 0 success, 1 config error, 2 numerical failure, 3 finished
with flagged cells.
"""

from __future__ import annotations

import argparse
import json
import sys

from .derivations import BoseHubbardParams, effective_spin_params
from .spectrum import ExceptionalPointError
from .sweep import ConfigError, load_config, run_correlation_spectrum, \
    run_spectrum_report, run_sync_map, run_trajectory

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_PARTIAL = 3


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dimersync",
        description="Dissipative dimer spin chains: spectra, dynamics, "
                    "and synchronization maps.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, helptext in [
            ("spectrum", "analytic one-excitation spectrum report"),
            ("evolve", "trajectory plus rolling synchronization series"),
            ("sync-map", "global synchronization over a parameter grid"),
            ("corr-spectrum", "two-time correlation spectrum for one pair")]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="flat key=value run config")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--format", choices=["csv", "json"], default="csv",
                       help="primary artifact format (both are always written)")
        if name == "sync-map":
            p.add_argument("--workers", type=int, default=None,
                           help="process count (defaults to config)")

    p = sub.add_parser("bh-params", help="effective spin couplings from "
                                         "two-band lattice parameters (kHz)")
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--t1", type=float, required=True)
    p.add_argument("--u00", type=float, required=True)
    p.add_argument("--u11", type=float, required=True)
    p.add_argument("--u01", type=float, required=True)
    p.add_argument("--json", action="store_true", help="print JSON instead of text")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ExceptionalPointError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def _dispatch(args):
    if args.command == "bh-params":
        try:
            bh = BoseHubbardParams(args.t0, args.t1, args.u00, args.u11, args.u01)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        eff = effective_spin_params(bh)
        if args.json:
            print(json.dumps({"exchange_coupling_khz": eff.exchange_coupling,
                              "field_shift_khz": eff.field_shift,
                              "ising_coupling_khz": eff.ising_coupling}, indent=2))
        else:
            print(f"exchange coupling: {eff.exchange_coupling:.6g} kHz")
            print(f"field shift:       {eff.field_shift:.6g} kHz")
            print(f"ising coupling:    {eff.ising_coupling:.6g} kHz")
        return EXIT_OK

    config = load_config(args.config)
    if args.command == "spectrum":
        run_spectrum_report(config, args.out)
        return EXIT_OK
    if args.command == "evolve":
        run_trajectory(config, args.out)
        return EXIT_OK
    if args.command == "corr-spectrum":
        run_correlation_spectrum(config, args.out)
        return EXIT_OK
    if args.command == "sync-map":
        result = run_sync_map(config, args.out, workers=args.workers)
        if result.flagged_count:
            print(f"{result.flagged_count} flagged cells", file=sys.stderr)
            return EXIT_PARTIAL
        return EXIT_OK
    raise ConfigError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
