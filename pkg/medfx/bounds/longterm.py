#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"""
long-term indirect effect bound: an experiment gives TE(X,Z), an observational study
without the true exposure gives p(W,Z,Y) with W a self-report of the exposure
"""

import logging

from medfx.bounds.base import BoundResult, Relation, pair_indicator
from medfx.bounds.monotone import monotone_direction
from medfx.distribution import expectation, marginal
from medfx.errors import NonBinaryMediator
from medfx.measures import Measure, MeasureRequest

logger = logging.getLogger(__name__)


def _mediator_levels(dist, request):
    spec = dist.variable(request.mediator)
    if not spec.is_binary:
        raise NonBinaryMediator(
            "mediator {} has {} levels, the long-term bound needs 2".format(request.mediator, spec.size)
        )
    return spec.levels


def te_obs_zy(dist, request=None):
    """sum_w (E[Y|z,w] - E[Y|z̄,w]) p(w)"""
    request = request or MeasureRequest()
    zbar, z = _mediator_levels(dist, request)
    proxy = marginal(dist, [request.proxy])
    total = 0.0
    for w, p_w in zip(proxy.variables[0].levels, proxy.table):
        treated = expectation(dist, request.outcome, {request.mediator: z, request.proxy: w})
        untreated = expectation(dist, request.outcome, {request.mediator: zbar, request.proxy: w})
        total += float(p_w) * (treated - untreated)
    return total


def longterm_ie_bound(te_xz, dist, request=None):
    """
    IE compared with te_xz·TE_obs(Z,Y). The direction is the product of the proxy indicator
    (E[Y|z',W] against E[Z|W]) and the sign of te_xz; te_xz = 0 gives IE = 0 exactly.
    """
    request = request or MeasureRequest()
    zbar, z = _mediator_levels(dist, request)
    te_xz = float(te_xz)
    diagnostics = []

    indicator = dist.recode(request.mediator, {z: 1.0, zbar: 0.0})
    outcome_verdict = monotone_direction(dist, request.outcome, [request.mediator], request.proxy)
    mediator_verdict = monotone_direction(indicator, request.mediator, [], request.proxy)
    neq = pair_indicator(outcome_verdict, lambda item: mediator_verdict.evidence[0])
    geq = 1 if te_xz >= 0.0 else 0
    value = te_xz * te_obs_zy(dist, request)

    if te_xz == 0.0:
        relation = Relation.EQ
        diagnostics.append("TE({},{}) = 0 makes IE exactly 0".format(request.exposure, request.mediator))
    elif neq is None:
        relation = Relation.INDETERMINATE
        diagnostics.append(
            "trends of E[{}|{},{}] and E[{}|{}] are not jointly opposite or alike".format(
                request.outcome, request.mediator, request.proxy, request.mediator, request.proxy
            )
        )
    elif (2 * neq - 1) * (2 * geq - 1) == 1:
        relation = Relation.GEQ
    else:
        relation = Relation.LEQ

    logger.debug("longterm_ie_bound: value=%r neq=%s geq=%s", value, neq, geq)
    return BoundResult(
        target=Measure.IE,
        bound_value=value,
        relation=relation,
        indicator_neq=neq,
        indicator_geq=geq,
        verdicts=(outcome_verdict, mediator_verdict),
        diagnostics=tuple(diagnostics),
    )
