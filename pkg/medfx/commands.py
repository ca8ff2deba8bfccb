#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"subcommand handlers, each returning a RunReport"

import argparse
import logging
import sys
from dataclasses import replace

from medfx import suites
from medfx.bounds.affine import affine_in_px, reduction_interval
from medfx.bounds.longterm import longterm_ie_bound
from medfx.bounds.proxy import proxy_de_bound
from medfx.distribution import ensure_valid, marginal
from medfx.effects import all_effects, residual
from medfx.errors import DistributionError, MedfxError, MeasureError
from medfx.ingest.files import (
    dump_distribution,
    file_kind,
    load_conditionals,
    load_distribution,
    load_observational,
    load_record_schema,
    load_scm,
)
from medfx.ingest.records import estimate_joint, read_records
from medfx.measures import Measure, MeasureRequest
from medfx.reports import RunReport, inputs_digest
from medfx.scm.base import counterfactual_mean
from medfx.scm.oracle import oracle_effect
from medfx.scm.terms import parse_term
from medfx.utils import base_seed

logger = logging.getLogger(__name__)

# flags that change presentation only and stay out of the inputs digest
PRESENTATION_FLAGS = ("func", "json", "report", "verbose", "quiet", "require_determinate", "parallelism")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_INDETERMINATE = 3


def exposure_flag(text):
    """argparse type for --exposure X=x1/x0: the exposure name, treated and reference levels"""
    try:
        name, levels = text.split("=", 1)
        treated, reference = levels.split("/")
    except ValueError:
        raise argparse.ArgumentTypeError("expected NAME=TREATED/REFERENCE, got '{}'".format(text))
    if not name or not treated or not reference or treated == reference:
        raise argparse.ArgumentTypeError(
            "expected NAME=TREATED/REFERENCE with two distinct levels, got '{}'".format(text)
        )
    return name, treated, reference


def _request(args, **kwargs):
    exposure = getattr(args, "exposure", None)
    if exposure is not None:
        kwargs.update(exposure=exposure[0], treated=exposure[1], reference=exposure[2])
    for role in ("mediator", "outcome", "proxy"):
        if getattr(args, role, None) is not None:
            kwargs[role] = getattr(args, role)
    return MeasureRequest(**kwargs)


def _report(args, paths):
    flags = {key: value for key, value in sorted(vars(args).items()) if key not in PRESENTATION_FLAGS}
    return RunReport(
        command=args.subparser_name,
        argv=sys.argv[1:],
        inputs_digest=inputs_digest(paths, flags),
    )


def cmd_effects(args):
    """TE, DE, IE, NDE, NIE, TDE, TIE, CDE per mediator level, PIIE, the residual and factored IE"""
    report = _report(args, [args.path])
    dist = load_observational(args.path)
    request = _request(args)
    reports, factored = all_effects(dist, request)
    for effect in reports:
        report.add(effect)
    report.add({"kind": "residual", "measure": "TE-DE-IE", "value": residual(dist, request)})
    if factored is not None:
        report.add(
            {
                "kind": "factored",
                "exposure": request.exposure,
                "mediator": request.mediator,
                "outcome": request.outcome,
                "te_xz": factored.te_xz,
                "te_zy": factored.te_zy,
                "product": factored.product,
            }
        )
    return report


def cmd_bounds_px(args):
    """DE and IE as affine functions of the unknown p(x), with reduction intervals when --te is given"""
    report = _report(args, [args.path])
    table = load_conditionals(args.path, _request(args))
    for measure in args.measure:
        affine = affine_in_px(table, measure, table.request)
        report.add(affine)
        if args.te is not None:
            lo, hi = reduction_interval(affine, args.te)
            report.add(
                {
                    "kind": "interval",
                    "measure": "1-{}/TE".format(affine.measure),
                    "source": str(affine.measure),
                    "te": float(args.te),
                    "lo": lo,
                    "hi": hi,
                }
            )
    return report


def _collect_diagnostics(report, bound):
    for diagnostic in bound.diagnostics:
        if diagnostic.startswith(("unproven", "degenerate")):
            report.warn(diagnostic)


def cmd_bounds_proxy(args):
    report = _report(args, [args.path])
    request = _request(args)
    dist = load_distribution(args.path)
    observed = marginal(dist, [request.exposure, request.proxy, request.mediator, request.outcome])
    bound = proxy_de_bound(observed, request, allow_multilevel_proxy=args.multilevel_proxy)
    _collect_diagnostics(report, bound)
    report.add(bound)
    return report


def cmd_bounds_longterm(args):
    report = _report(args, [args.path])
    request = _request(args)
    dist = load_distribution(args.path)
    observed = marginal(dist, [request.proxy, request.mediator, request.outcome])
    bound = longterm_ie_bound(args.te_xz, observed, request)
    _collect_diagnostics(report, bound)
    report.add(bound)
    return report


def _oracle_measure(report, scm, measure, request):
    if measure != Measure.CDE or request.controlled is not None:
        label = str(measure)
        if measure == Measure.CDE:
            label = "CDE({}={})".format(request.mediator, request.controlled)
        report.add({"kind": "oracle", "label": label, "value": oracle_effect(scm, measure, request)})
        return
    for level in reversed(scm.variable(request.mediator).levels):
        _oracle_measure(report, scm, measure, replace(request, controlled=level))


def cmd_oracle(args):
    """measures and counterfactual terms evaluated by enumerating the model's exogenous states"""
    report = _report(args, [args.path])
    scm = load_scm(args.path)
    measures = args.measure or ([] if args.term else [Measure.TE.value])
    if measures and args.exposure is None:
        raise MeasureError("--exposure NAME=TREATED/REFERENCE is required to evaluate measures")
    if measures:
        request = _request(args, controlled=args.control_level)
        request.check_exposure(scm)
        for measure in measures:
            _oracle_measure(report, scm, Measure(measure), request)
    for text in args.term or []:
        term = parse_term(text)
        report.add({"kind": "oracle", "label": str(term), "value": counterfactual_mean(scm, term)})
    return report


def cmd_estimate(args):
    """smoothed relative frequencies of a records CSV, written as a distribution file"""
    report = _report(args, [args.path, args.schema])
    batch = read_records(args.path, load_record_schema(args.schema))
    dist = estimate_joint(batch, args.alpha)
    dump_distribution(dist, args.output)
    total = float(sum(batch.counts)) if batch.counts is not None else float(len(batch.rows))
    report.add(
        {
            "kind": "estimate",
            "output": args.output,
            "variables": list(batch.names),
            "total": total,
            "alpha": float(args.alpha),
        }
    )
    return report


LOADERS = {
    "distribution": load_distribution,
    "conditionals": load_conditionals,
    "scm": load_scm,
    "schema": load_record_schema,
}


def _validate_file(path, kind):
    try:
        kind = kind or file_kind(path)
        loaded = LOADERS[kind](path)
        if kind == "distribution":
            ensure_valid(loaded)
    except DistributionError as e:
        return kind, e.errors
    except MedfxError as e:
        return kind, [str(e)]
    return kind, []


def cmd_validate(args):
    """parses and checks input files, one result per file"""
    report = _report(args, args.paths)
    for path in args.paths:
        kind, errors = _validate_file(path, args.kind)
        report.add({"kind": "validate", "path": path, "file_kind": kind or "input", "errors": errors})
    return report


def cmd_dev(args):
    """runs the seeded property suites"""
    report = _report(args, [])
    seed = base_seed() if args.seed is None else args.seed
    for name in args.suite:
        report.add(suites.run_suite(name, args.count, seed, args.parallelism))
    return report


def exit_code(report, args):
    """
    0 unless a validated file was invalid (2), a suite failed (1), or only indeterminate
    bounds were produced under --require-determinate (3)
    """
    if any(result["kind"] == "validate" and result["errors"] for result in report.results):
        return EXIT_INPUT
    if report.failed:
        return EXIT_FAILED
    if getattr(args, "require_determinate", False) and report.indeterminate_only:
        return EXIT_INDETERMINATE
    return EXIT_OK
