#!/usr/bin/env python3
"""
susykink Command Line Interface

Runs one computation per invocation and writes figure-ready CSV tables plus a JSON
metadata sidecar.

Usage examples:
    # Spectrum and supersymmetric pairing of the L=13 chain at criticality
    susykink spectrum L=13 lambda=1

    # Edge-to-edge kink quench on l=4
    susykink quench l=4 lambda=1 init=exact-kink

    # Dressing-potential design from a YAML file, output directory overridden
    susykink design-potential --config conf/runs/double_dressing.yaml --output-dir ./outs

    # Everything behind one figure
    susykink figures fig=2b
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, get_args

import simplejson as json
from pydantic import ValidationError

from susykink.runner import RunConfig, RunTracker, build_run_config, run, write_bundle
from susykink.runner.config import Command
from susykink.utils import NumericalError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = list(get_args(Command))

COMMAND_HELP = {
    "spectrum": "Sector spectra of H_Q, zero modes and supersymmetric pairing",
    "densities": "Ground-state site and energy densities against the CFT prediction",
    "kink-profile": "Density profiles of a localized kink, its skink and the pinned approximation",
    "coefficients": "Fitted detector coefficients (alpha, beta) of dn, dn3 and dnbar over chain sizes",
    "quench": "Edge-to-edge kink and skink quench with detector observables",
    "saddle": "Stationary-phase estimate of the edge-to-edge overlap",
    "dispersion": "Kink band E(k) for several staggerings, exact band energies and the gap/velocity inset",
    "prepare": "Adiabatic preparation fidelities over a staggering grid",
    "rydberg-quench": "Kink quench in the Rydberg-dressed chain and its effective models",
    "design-potential": "Single, double or Fredholm dressed-potential design",
    "tail-fidelity": "Ground-state fidelity against interaction tails for single and double dressing",
    "budget": "Coherence budget L_max over the detuning ratio",
    "figures": "Run the parameter sets behind one figure (fig=...) or all of them",
}


def validate_config_path(config_path: Optional[str]) -> Optional[Path]:
    """Validate that a configuration file exists."""
    if config_path is None:
        return None
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Configuration file '{config_path}' does not exist")
    return path


def error_record(exc: BaseException, exit_code: int, command: Optional[str]) -> str:
    return json.dumps(
        {"error": type(exc).__name__, "message": str(exc), "exit_code": exit_code, "command": command}
    )


def cmd_run(args) -> int:
    config_path = validate_config_path(args.config)
    config: RunConfig = build_run_config(args.command, config_path, args.overrides)
    if args.output_dir:
        config.output.directory = args.output_dir

    log_file = args.log_file or None
    tracker = RunTracker(log_file=log_file, quiet=args.quiet)
    tracker.print(f"Running {config.command}")
    bundle = run(config, tracker)
    written = write_bundle(bundle, config)
    for path in written["tables"] + written["metadata"]:
        tracker.print(f"Saved: {path}")
    return EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        description="susykink CLI - supersymmetric lattice kinks and their Rydberg-dressed simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Parameters are given as key=value tokens after the command; dotted keys (model.l=4) select a
section explicitly. Tokens override values from --config. Frequencies accept Hz/kHz/MHz/GHz.

Examples:
  susykink spectrum L=13 lambda=1
  susykink quench l=4 lambda=1 init=pinned-kink method=cn
  susykink rydberg-quench sites=10 atoms=3 Omega=10MHz delta_ratio=10
  susykink budget kappa=10
  susykink figures fig=S6

Exit codes: 0 ok, 2 configuration error, 3 numerical failure.
        """,
    )
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True
    for name in COMMANDS:
        p = sub.add_parser(name, help=COMMAND_HELP[name], description=COMMAND_HELP[name])
        p.add_argument("overrides", nargs="*", help="key=value configuration overrides")
        p.add_argument("--config", "-c", help="YAML run configuration")
        p.add_argument("--output-dir", "-od", help="Output directory (overrides output.directory)")
        p.add_argument("--log-file", help="Append progress messages to this file")
        p.add_argument("--quiet", "-q", action="store_true", help="Suppress progress messages on stdout")
    return parser


def main(argv=None) -> int:
    """CLI entrypoint; returns the process exit code."""
    logging.basicConfig(level=logging.INFO)
    parser = _build_parser()
    args = parser.parse_args(argv)

    try:
        code = cmd_run(args)
    except (ValueError, ValidationError, FileNotFoundError) as exc:
        code = EXIT_CONFIG
        print(error_record(exc, code, args.command), file=sys.stderr)
    except NumericalError as exc:
        code = EXIT_NUMERIC
        print(error_record(exc, code, args.command), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
