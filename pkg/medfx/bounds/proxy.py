#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"one-sided DE bound from a proxy of an unmeasured exposure-outcome confounder"

import logging

from medfx.bounds.base import BoundResult, Direction, Relation, pair_indicator
from medfx.bounds.monotone import monotone_direction
from medfx.distribution import condition, expectation, marginal
from medfx.errors import NonBinaryProxy
from medfx.measures import Measure, MeasureRequest

logger = logging.getLogger(__name__)

RELATIONS = {1: Relation.GEQ, 0: Relation.LEQ, None: Relation.INDETERMINATE}


def te_obs_conditional(dist, z, request=None):
    """
    Partially adjusted effect of the exposure within mediator stratum z:
    sum_w (E[Y|x,z,w] - E[Y|x̄,z,w]) p(w|z)
    """
    request = request or MeasureRequest.for_source(dist)
    x, xbar = request.exposure_levels
    weights = condition(marginal(dist, [request.mediator, request.proxy]), {request.mediator: z})
    total = 0.0
    for w, p_w in zip(weights.variables[0].levels, weights.table):
        given = {request.mediator: z, request.proxy: w}
        treated = expectation(dist, request.outcome, dict(given, **{request.exposure: x}))
        untreated = expectation(dist, request.outcome, dict(given, **{request.exposure: xbar}))
        total += float(p_w) * (treated - untreated)
    return total


def proxy_de_bound(dist, request=None, allow_multilevel_proxy=False):
    """
    Bounds DE from one side using the proxy W of a binary confounder V:
    DE >= value when E[Y|x',z',W] and E[X|z',W] trend in opposite directions for every
    x', z', DE <= value when they trend alike, indeterminate otherwise.
    value = sum_z TE_obs(z) p(z).
    """
    request = request or MeasureRequest.for_source(dist)
    request.check_exposure(dist)
    diagnostics = ["{} assumed binary (untestable from the observed joint)".format(request.confounder)]
    proxy = dist.variable(request.proxy)
    if not proxy.is_binary:
        if not allow_multilevel_proxy:
            raise NonBinaryProxy(
                "proxy {} has {} levels, exactly 2 are required without --multilevel-proxy".format(
                    request.proxy, proxy.size
                )
            )
        logger.warning(
            "unproven: proxy %s has %d ordered levels, the bound may not hold", request.proxy, proxy.size
        )
        diagnostics.append("unproven: multi-level proxy {}".format(request.proxy))

    indicator = dist.recode(request.exposure, {request.treated: 1.0, request.reference: 0.0})
    strata = [request.exposure, request.mediator]
    outcome_verdict = monotone_direction(dist, request.outcome, strata, request.proxy)
    exposure_verdict = monotone_direction(indicator, request.exposure, [request.mediator], request.proxy)

    def paired(item):
        return exposure_verdict.evidence_for(**{request.mediator: dict(item.stratum)[request.mediator]})

    neq = pair_indicator(outcome_verdict, paired)
    directions = {item.direction for item in outcome_verdict.evidence + exposure_verdict.evidence}
    if Direction.CONSTANT in directions:
        logger.warning("Proxy %s: constant conditional expectation, bound is indeterminate", request.proxy)
        diagnostics.append("degenerate proxy: some trend in {} is constant".format(request.proxy))
    if neq is None:
        diagnostics.append(
            "trends of E[{}|{},{},{}] and E[{}|{},{}] are not jointly opposite or alike".format(
                request.outcome, request.exposure, request.mediator, request.proxy,
                request.exposure, request.mediator, request.proxy,
            )
        )

    mediator = marginal(dist, [request.mediator])
    value = 0.0
    for z, p_z in zip(mediator.variables[0].levels, mediator.table):
        value += te_obs_conditional(dist, z, request) * float(p_z)

    logger.debug("proxy_de_bound: value=%r indicator=%s", value, neq)
    return BoundResult(
        target=Measure.DE,
        bound_value=value,
        relation=RELATIONS[neq],
        indicator_neq=neq,
        verdicts=(outcome_verdict, exposure_verdict),
        diagnostics=tuple(diagnostics),
    )
