#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"command line module"

import argparse
import logging
import multiprocessing
import sys

from medfx import cached, commands, defaults, setup_logging
from medfx.errors import MedfxError
from medfx.measures import ORACLE_MEASURES
from medfx.suites import SUITES
from medfx.utils import from_dot_medfx
from medfx.version import DESCRIPTION, PROJECT_NAME, VERSION

logger = logging.getLogger(__name__)


def add_output_arguments(parser, command):
    parser.add_argument(
        "--json",
        help="print the report as JSON with full precision reals",
        action="store_true",
        default=from_dot_medfx(command, "json", False),
    )
    parser.add_argument(
        "--report",
        type=str,
        default=from_dot_medfx(command, "report", None),
        metavar="PATH",
        help="write the report to PATH instead of stdout",
    )
    parser.add_argument(
        "--verbose",
        "-v",
        help="set verbose mode",
        action="store_true",
        default=from_dot_medfx(command, "verbose", False),
    )
    parser.add_argument(
        "--quiet",
        help="set quiet mode, only critical output",
        action="store_true",
        default=from_dot_medfx(command, "quiet", False),
    )


def add_role_arguments(parser, command, exposure_required=True, exposure=True, proxy=False):
    if exposure:
        default_exposure = from_dot_medfx(command, "exposure", None)
        parser.add_argument(
            "--exposure",
            type=commands.exposure_flag,
            required=exposure_required and default_exposure is None,
            default=default_exposure,
            metavar="NAME=TREATED/REFERENCE",
            help="binary exposure with its treated and reference levels, e.g. X=1/0",
        )
    parser.add_argument(
        "--mediator",
        type=str,
        default=from_dot_medfx(command, "mediator", "Z"),
        metavar="NAME",
        help='set mediator variable, default is "Z"',
    )
    parser.add_argument(
        "--outcome",
        type=str,
        default=from_dot_medfx(command, "outcome", "Y"),
        metavar="NAME",
        help='set outcome variable, default is "Y"',
    )
    if proxy:
        parser.add_argument(
            "--proxy",
            type=str,
            default=from_dot_medfx(command, "proxy", "W"),
            metavar="NAME",
            help='set proxy variable, default is "W"',
        )


def add_require_determinate(parser, command):
    parser.add_argument(
        "--require-determinate",
        help="exit with code 3 when no bound is determinate",
        action="store_true",
        default=from_dot_medfx(command, "require-determinate", False),
    )


def build_parser():
    parser = argparse.ArgumentParser(prog=PROJECT_NAME, description=DESCRIPTION)
    parser.add_argument("--version", action="version", version=VERSION)
    subparser = parser.add_subparsers(help="commands", dest="subparser_name")

    effects_parser = subparser.add_parser(
        "effects", help="direct, indirect and classical mediation effects of a distribution or model"
    )
    effects_parser.set_defaults(func=commands.cmd_effects)
    effects_parser.add_argument("path", type=str, help="distribution or structural model file")
    add_role_arguments(effects_parser, "effects")
    add_output_arguments(effects_parser, "effects")

    px_parser = subparser.add_parser("bounds-px", help="DE and IE over the unknown treatment prevalence p(x)")
    px_parser.set_defaults(func=commands.cmd_bounds_px)
    px_parser.add_argument("path", type=str, help="factored file with p(Z|X) and p(Y|X,Z)")
    add_role_arguments(px_parser, "bounds-px")
    px_parser.add_argument(
        "--measure",
        type=str,
        nargs="+",
        choices=("DE", "IE"),
        default=from_dot_medfx("bounds-px", "measure", ["DE", "IE"]),
        help="measures to bound, default is DE and IE",
    )
    px_parser.add_argument(
        "--te",
        type=float,
        default=from_dot_medfx("bounds-px", "te", None),
        metavar="FLOAT",
        help="total effect, adds the relative reduction intervals 1 - DE/TE and 1 - IE/TE",
    )
    add_output_arguments(px_parser, "bounds-px")

    proxy_parser = subparser.add_parser(
        "bounds-proxy", help="one-sided DE bound from a proxy of an unmeasured confounder"
    )
    proxy_parser.set_defaults(func=commands.cmd_bounds_proxy)
    proxy_parser.add_argument(
        "path", type=str, help="distribution file over exposure, proxy, mediator and outcome"
    )
    add_role_arguments(proxy_parser, "bounds-proxy", proxy=True)
    proxy_parser.add_argument(
        "--multilevel-proxy",
        help="accept a proxy with more than two ordered levels (soundness unproven)",
        action="store_true",
        default=from_dot_medfx("bounds-proxy", "multilevel-proxy", False),
    )
    add_require_determinate(proxy_parser, "bounds-proxy")
    add_output_arguments(proxy_parser, "bounds-proxy")

    longterm_parser = subparser.add_parser(
        "bounds-longterm", help="one-sided long-term IE bound from an experiment and an observational study"
    )
    longterm_parser.set_defaults(func=commands.cmd_bounds_longterm)
    longterm_parser.add_argument("path", type=str, help="distribution file over proxy, mediator, outcome")
    longterm_parser.add_argument(
        "--te-xz",
        type=float,
        required=True,
        metavar="FLOAT",
        help="experimental effect of the exposure on the mediator",
    )
    add_role_arguments(longterm_parser, "bounds-longterm", exposure=False, proxy=True)
    add_require_determinate(longterm_parser, "bounds-longterm")
    add_output_arguments(longterm_parser, "bounds-longterm")

    oracle_parser = subparser.add_parser("oracle", help="exact counterfactual quantities of a model")
    oracle_parser.set_defaults(func=commands.cmd_oracle)
    oracle_parser.add_argument("path", type=str, help="structural model file")
    add_role_arguments(oracle_parser, "oracle", exposure_required=False)
    oracle_parser.add_argument(
        "--measure",
        type=str,
        nargs="+",
        choices=[str(measure) for measure in ORACLE_MEASURES],
        default=from_dot_medfx("oracle", "measure", None),
        help="measures to evaluate, default is TE unless --term is given",
    )
    oracle_parser.add_argument(
        "--control-level",
        type=str,
        default=from_dot_medfx("oracle", "control-level", None),
        metavar="LEVEL",
        help="mediator level held fixed by CDE, default is every level",
    )
    oracle_parser.add_argument(
        "--term",
        type=str,
        action="append",
        default=from_dot_medfx("oracle", "term", None),
        metavar="TERM",
        help="counterfactual mean to evaluate, e.g. 'Y_{X=0,Z_{X=1}}' or 'Y_{X=1} | X=0'",
    )
    add_output_arguments(oracle_parser, "oracle")

    estimate_parser = subparser.add_parser("estimate", help="estimate a joint distribution from records")
    estimate_parser.set_defaults(func=commands.cmd_estimate)
    estimate_parser.add_argument("path", type=str, help="records CSV, optional count column")
    estimate_parser.add_argument(
        "--schema",
        type=str,
        required=True,
        metavar="PATH",
        help="file declaring the variables and levels of the records",
    )
    estimate_parser.add_argument(
        "--alpha",
        type=float,
        default=from_dot_medfx("estimate", "alpha", 0.0),
        metavar="FLOAT",
        help="additive smoothing per cell, default is 0",
    )
    estimate_parser.add_argument(
        "--output",
        "-o",
        type=str,
        required=True,
        metavar="PATH",
        help="distribution file to write",
    )
    add_output_arguments(estimate_parser, "estimate")

    validate_parser = subparser.add_parser("validate", help="check input files")
    validate_parser.set_defaults(func=commands.cmd_validate)
    validate_parser.add_argument("paths", type=str, nargs="+", metavar="PATH")
    validate_parser.add_argument(
        "--kind",
        type=str,
        choices=sorted(commands.LOADERS),
        default=from_dot_medfx("validate", "kind", None),
        help="file kind, default is to judge from the file contents",
    )
    add_output_arguments(validate_parser, "validate")

    dev_parser = subparser.add_parser("dev", help=argparse.SUPPRESS)
    dev_parser.set_defaults(func=commands.cmd_dev)
    dev_parser.add_argument(
        "--suite",
        type=str,
        nargs="+",
        choices=list(SUITES),
        default=from_dot_medfx("dev", "suite", list(SUITES)),
        help="suites to run, default is all",
    )
    dev_parser.add_argument(
        "--count",
        type=int,
        default=from_dot_medfx("dev", "count", None),
        metavar="INT",
        help="seeds per suite, default is the suite's own size",
    )
    dev_parser.add_argument(
        "--seed",
        type=int,
        default=from_dot_medfx("dev", "seed", None),
        metavar="INT",
        help="base seed, default is ${} or 0".format(defaults.SEED_ENV_VAR),
    )
    dev_parser.add_argument(
        "--parallelism",
        "-p",
        type=int,
        default=from_dot_medfx("dev", "parallelism", 4),
        metavar="INT",
        help="Number of concurrent suite processes, default is 4",
    )
    add_output_arguments(dev_parser, "dev")

    return parser


def emit(report, args):
    output = report.render(args.json)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fp:
            fp.write(output)
        logger.info("Wrote %s", args.report)
    else:
        sys.stdout.write(output)


def main():
    """main function for command line usage"""
    try:
        multiprocessing.set_start_method("spawn")
    # main() is explicitly multiple times in tests
    # and will raise RuntimeError
    except RuntimeError:
        pass

    parser = build_parser()
    args = parser.parse_args()

    logger.debug("Running with args: %s", args)

    if args.subparser_name is None:
        parser.print_help()
        sys.exit(1)

    # cache args where key is subcommand
    cached.args[args.subparser_name] = args

    if args.verbose:
        setup_logging(level=logging.DEBUG, force=True)
    elif args.quiet:
        setup_logging(level=logging.CRITICAL, force=True)

    try:
        report = args.func(args)
    except MedfxError as e:
        if args.verbose:
            logger.exception(e)
        else:
            logger.error(e)
        sys.exit(commands.EXIT_INPUT)
    except Exception as e:
        logger.exception("Unknown (Non-medfx) Error occurred")
        logger.error(e)
        sys.exit(commands.EXIT_FAILED)

    emit(report, args)
    code = commands.exit_code(report, args)
    if code != commands.EXIT_OK:
        sys.exit(code)

    return 0
