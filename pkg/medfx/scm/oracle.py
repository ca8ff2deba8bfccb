#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"ground-truth effect measures composed from counterfactual means"

import logging

from medfx.distribution import condition, expectation, marginal
from medfx.errors import MeasureError, NonBinaryMediator, UnsupportedMeasureError
from medfx.measures import ORACLE_MEASURES, Measure, MeasureRequest
from medfx.scm.base import CounterfactualTerm, counterfactual_mean, observational_distribution

logger = logging.getLogger(__name__)


def _mean(scm, request, world=(), substitutions=(), given=()):
    return counterfactual_mean(scm, CounterfactualTerm(request.outcome, world, substitutions, given))


def _binary_mediator(scm, request):
    spec = scm.variable(request.mediator)
    if not spec.is_binary:
        raise NonBinaryMediator(
            "mediator {} has {} levels, the factorised effect needs 2".format(request.mediator, spec.size)
        )
    return spec.levels


def mediator_shift(scm, request):
    """TE(X,Z) = p(Z_x = z) - p(Z_x̄ = z), z the second declared mediator level"""
    _, z = _binary_mediator(scm, request)
    index = scm.variable(request.mediator).index(z)
    _, weights = scm.units
    shift = 0.0
    for level, sign in ((request.treated, 1.0), (request.reference, -1.0)):
        values = scm.solve({request.exposure: level})[request.mediator]
        shift += sign * float(weights[values == index].sum())
    return shift


def mediator_effect(scm, request):
    """TE(Z,Y) = E[Y_z] - E[Y_z̄]"""
    zbar, z = _binary_mediator(scm, request)
    return _mean(scm, request, {request.mediator: z}) - _mean(scm, request, {request.mediator: zbar})


def stratum_adjusted_effect(scm, request):
    """
    sum_z p(z) sum_v (E[Y|x,z,v] - E[Y|x̄,z,v]) p(v|z) with v the exogenous confounder,
    or the plain stratum contrast when the model has no confounder of that name.
    """
    include = (request.confounder,) if request.confounder in scm.exogenous_names else ()
    joint = observational_distribution(scm, include=include)
    x, xbar = request.exposure_levels
    mediator = joint.variable(request.mediator)
    pz = marginal(joint, [request.mediator])
    total = 0.0
    for z, p_z in zip(mediator.levels, pz.table):
        if p_z <= 0.0:
            continue
        if include:
            strata = condition(marginal(joint, [request.mediator, request.confounder]), {request.mediator: z})
            terms = zip(strata.variables[0].levels, strata.table)
        else:
            terms = [(None, 1.0)]
        for v, p_v in terms:
            if p_v <= 0.0:
                continue
            given = {request.mediator: z}
            if v is not None:
                given[request.confounder] = v
            effect = expectation(joint, request.outcome, dict(given, **{request.exposure: x})) - expectation(
                joint, request.outcome, dict(given, **{request.exposure: xbar})
            )
            total += float(p_z) * float(p_v) * effect
    return total


def oracle_effect(scm, measure, request=None):
    """
    Exact value of measure in scm by counterfactual enumeration.
    CDE reads the mediator level from request.controlled.
    """
    measure = Measure(measure)
    if measure not in ORACLE_MEASURES:
        raise UnsupportedMeasureError(
            "{} has no oracle definition, only {}".format(measure, [str(m) for m in ORACLE_MEASURES])
        )
    if request is None:
        request = MeasureRequest.for_source(scm)
    request.check_exposure(scm)
    x, xbar = request.exposure_levels
    X, Z = request.exposure, request.mediator

    if measure == Measure.TE:
        value = _mean(scm, request, {X: x}) - _mean(scm, request, {X: xbar})
    elif measure == Measure.NDE:
        value = _mean(scm, request, {X: x}, [(Z, {X: xbar})]) - _mean(scm, request, {X: xbar})
    elif measure == Measure.NIE:
        value = _mean(scm, request, {X: xbar}, [(Z, {X: x})]) - _mean(scm, request, {X: xbar})
    elif measure == Measure.TDE:
        value = _mean(scm, request, {X: x}) - _mean(scm, request, {X: xbar}, [(Z, {X: x})])
    elif measure == Measure.TIE:
        value = _mean(scm, request, {X: x}) - _mean(scm, request, {X: x}, [(Z, {X: xbar})])
    elif measure == Measure.CDE:
        if request.controlled is None:
            raise MeasureError("CDE needs a controlled mediator level")
        value = _mean(scm, request, {X: x, Z: request.controlled}) - _mean(
            scm, request, {X: xbar, Z: request.controlled}
        )
    elif measure == Measure.PIIE:
        value = _mean(scm, request) - _mean(scm, request, (), [(X, {}), (Z, {X: xbar})])
    elif measure == Measure.TE_XZ:
        value = mediator_shift(scm, request)
    elif measure == Measure.TE_ZY:
        value = mediator_effect(scm, request)
    elif measure == Measure.DE_TRUE:
        value = stratum_adjusted_effect(scm, request)
    elif measure == Measure.IE_TRUE:
        value = mediator_shift(scm, request) * mediator_effect(scm, request)
    else:
        untreated = {X: xbar}
        value = _mean(scm, request, {X: x}, given=untreated) - _mean(scm, request, {X: xbar}, given=untreated)

    logger.debug("oracle: %s = %r", measure, value)
    return float(value)
