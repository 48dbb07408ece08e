"""Command Line Module.

Usage::

        python -m bohmlib fields       [--config run.json] [--set key=value ...] [--mode analytic|numeric] [--out dir] [-v]
        python -m bohmlib trajectories [...]
        python -m bohmlib verify       [...]

Exit codes: 0 success, 1 verification failure or aborted ensemble,
2 invalid configuration or input file, 3 input/output error.
"""
import argparse
import json
import logging
import sys

from bohmlib import __version__
from bohmlib.config import RUN_MODES, RunConfig
from bohmlib.exceptions import ConfigError, EnsembleAbortError
from bohmlib.experiment import cmd_fields, cmd_trajectories, cmd_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_IO = 3

COMMANDS = {"fields": cmd_fields, "trajectories": cmd_trajectories, "verify": cmd_verify}


def build_parser():
    parser = argparse.ArgumentParser(prog="bohmlib",
                                     description="Bohmian hydrodynamics of the two-slit Gaussian model.")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON file with RunConfig fields")
    common.add_argument("--set", dest="overrides", metavar="KEY=VALUE", action="append", default=[],
                        help="override one config field (repeatable)")
    common.add_argument("--mode", choices=RUN_MODES, help="source of the wavefunction")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress messages")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True
    commands.add_parser("fields", parents=[common], help="write field frames and a manifest")
    commands.add_parser("trajectories", parents=[common], help="integrate and write a trajectory ensemble")
    commands.add_parser("verify", parents=[common], help="run the verification suite")
    return parser


def load_config(args):
    """Config file (or defaults), then ``--set`` overrides, then ``--mode``
    and ``--out``; validated once at the end."""
    config = RunConfig.from_file(args.config) if args.config else RunConfig()
    overrides = list(args.overrides)
    if args.mode:
        overrides.append("mode=" + args.mode)
    if args.out:
        overrides.append("out=" + args.out)
    return config.with_overrides(overrides) if overrides else config


def main(argv=None):
    """Entry point; returns the exit code."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(format="[%(module)-12s] %(message)s",
                        level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = load_config(args)
    except ConfigError as e:
        print(e, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print("cannot read config: {}".format(e), file=sys.stderr)
        return EXIT_IO
    except json.JSONDecodeError as e:
        print("cannot parse config {}: {}".format(args.config, e), file=sys.stderr)
        return EXIT_CONFIG

    try:
        result = COMMANDS[args.command](config, verbose=args.verbose)
    except EnsembleAbortError as e:
        print(e, file=sys.stderr)
        print(json.dumps(e.report, indent=2, sort_keys=True), file=sys.stderr)
        return EXIT_FAILURE
    except OSError as e:
        print("I/O error: {}".format(e), file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print("invalid input: {}".format(e), file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "verify" and not result["passed"]:
        for name in result["failures"]:
            print("FAILED {}".format(name), file=sys.stderr)
        return EXIT_FAILURE
    return EXIT_OK
