#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"identification formulas for direct and indirect effects"

import logging
from collections import namedtuple

from medfx.distribution import condition, expectation, marginal
from medfx.errors import MeasureError, NonBinaryMediator, ZeroProbabilityCondition
from medfx.measures import EffectReport, Measure, MeasureRequest

logger = logging.getLogger(__name__)

FORMULAS = {
    Measure.TE: "E[{Y}|x] - E[{Y}|x̄]",
    Measure.DE: "sum_z E[{Y}|x,z]p(z) - sum_z E[{Y}|x̄,z]p(z)",
    Measure.IE: "sum_z p(z|x) sum_x' E[{Y}|x',z]p(x') - sum_z p(z|x̄) sum_x' E[{Y}|x',z]p(x')",
    Measure.NDE: "sum_z (E[{Y}|x,z] - E[{Y}|x̄,z]) p(z|x̄)",
    Measure.NIE: "sum_z E[{Y}|x̄,z] (p(z|x) - p(z|x̄))",
    Measure.TDE: "sum_z (E[{Y}|x,z] - E[{Y}|x̄,z]) p(z|x)",
    Measure.TIE: "sum_z E[{Y}|x,z] (p(z|x) - p(z|x̄))",
    Measure.CDE: "E[{Y}|x,{Z}={level}] - E[{Y}|x̄,{Z}={level}]",
    Measure.PIIE: "E[{Y}] - sum_x' p(x') sum_z E[{Y}|x',z] p(z|x̄)",
}

ASSUMPTIONS = {
    Measure.TE: "every {X}-{Y} association is causal (mediation graph, no {X}-{Y} confounding)",
    Measure.DE: "back-door adjustment for {Z}; {X}->{Z}->{Y} deactivated (TE when {Z}->{X} or {Z}<->{X})",
    Measure.IE: "front-door through {Z}; {X}->{Y} deactivated, {X}<->{Y} confounding allowed",
    Measure.NDE: "no unmeasured {X}-{Z}, {X}-{Y} or {Z}-{Y} confounding; cross-world independence",
    Measure.NIE: "no unmeasured {X}-{Z}, {X}-{Y} or {Z}-{Y} confounding; cross-world independence",
    Measure.TDE: "no unmeasured {X}-{Z}, {X}-{Y} or {Z}-{Y} confounding; cross-world independence",
    Measure.TIE: "no unmeasured {X}-{Z}, {X}-{Y} or {Z}-{Y} confounding; cross-world independence",
    Measure.CDE: "no unmeasured {X}-{Y} or {Z}-{Y} confounding",
    Measure.PIIE: "as NDE; {X} and {Z} keep their natural values in the reference world",
}

FactoredIE = namedtuple("FactoredIE", ["te_xz", "te_zy", "product"])


class MediationTable(object):
    """
    p(x'), p(z|x') and E[Y|x',z] for both exposure levels: everything the mediation
    formulas read from a joint. p(x') is absent when built from conditionals only.
    """

    def __init__(self, request, mediator, pz, means, px=None):
        self.request = request
        self.mediator = mediator
        self.pz = pz
        self.means = means
        self.px = px

    @classmethod
    def from_distribution(cls, dist, request):
        request.check_exposure(dist)
        mediator = dist.variable(request.mediator)
        dist.variable(request.outcome).numeric_values()

        joint = marginal(dist, [request.exposure, request.mediator, request.outcome])
        exposure = marginal(joint, [request.exposure])
        px = {}
        pz = {}
        means = {}
        for level in request.exposure_levels:
            px[level] = float(exposure.table[exposure.variable(request.exposure).index(level)])
            given = {request.exposure: level}
            if px[level] <= 0.0:
                raise ZeroProbabilityCondition(
                    "stratum {}={} has zero mass; p({}|{}) undefined".format(
                        request.exposure, level, request.mediator, request.exposure
                    )
                )
            zx = condition(marginal(joint, [request.exposure, request.mediator]), given)
            pz[level] = {z: float(p) for z, p in zip(mediator.levels, zx.table)}
            for z in mediator.levels:
                if pz[level][z] > 0.0:
                    means[(level, z)] = expectation(
                        joint, request.outcome, {request.exposure: level, request.mediator: z}
                    )
        logger.debug("MediationTable: p(%s)=%s p(%s|x')=%s", request.exposure, px, request.mediator, pz)
        return cls(request, mediator, pz, means, px)

    @classmethod
    def from_conditionals(cls, request, mediator, pz, means):
        """Table for bounds mode: conditionals without p(X)"""
        return cls(request, mediator, pz, means)

    @property
    def levels(self):
        return self.mediator.levels

    @property
    def p_treated(self):
        if self.px is None:
            raise MeasureError(
                "p({}) unknown; measures depending on it need a joint, use bounds mode".format(
                    self.request.exposure
                )
            )
        return self.px[self.request.treated]

    def mean(self, exposure, z):
        """E[Y|x',z]; raises naming the stratum when it has zero mass"""
        try:
            return self.means[(exposure, z)]
        except KeyError:
            request = self.request
            raise ZeroProbabilityCondition(
                "stratum ({}={}, {}={}) has zero mass; E[{}|{}={},{}={}] undefined".format(
                    request.exposure, exposure, request.mediator, z,
                    request.outcome, request.exposure, exposure, request.mediator, z,
                )
            )

    def mediator_probability(self, exposure, z):
        """p(z|x')"""
        return self.pz[exposure][z]

    def mixed_mediator(self, z, q):
        """p(z) when p(x)=q"""
        x, xbar = self.request.exposure_levels
        return q * self.mediator_probability(x, z) + (1.0 - q) * self.mediator_probability(xbar, z)

    def mixed_mean(self, z, q):
        """sum_x' E[Y|x',z]p(x') when p(x)=q"""
        x, xbar = self.request.exposure_levels
        return q * self.mean(x, z) + (1.0 - q) * self.mean(xbar, z)

    def stratum_effect(self, z):
        x, xbar = self.request.exposure_levels
        return self.mean(x, z) - self.mean(xbar, z)

    def mediator_shift(self, z):
        x, xbar = self.request.exposure_levels
        return self.mediator_probability(x, z) - self.mediator_probability(xbar, z)


def te_value(table):
    x, xbar = table.request.exposure_levels

    def arm(level):
        pz = table.pz[level]
        return sum(pz[z] * table.mean(level, z) for z in table.levels if pz[z] > 0.0)

    return arm(x) - arm(xbar)


def de_value(table, q):
    return sum(table.stratum_effect(z) * table.mixed_mediator(z, q) for z in table.levels)


def ie_value(table, q):
    return sum(table.mediator_shift(z) * table.mixed_mean(z, q) for z in table.levels)


def nde_value(table):
    xbar = table.request.reference
    return sum(table.stratum_effect(z) * table.mediator_probability(xbar, z) for z in table.levels)


def nie_value(table):
    xbar = table.request.reference
    return sum(table.mean(xbar, z) * table.mediator_shift(z) for z in table.levels)


def tde_value(table):
    x = table.request.treated
    return sum(table.stratum_effect(z) * table.mediator_probability(x, z) for z in table.levels)


def tie_value(table):
    x = table.request.treated
    return sum(table.mean(x, z) * table.mediator_shift(z) for z in table.levels)


def piie_value(table):
    x, xbar = table.request.exposure_levels
    q = table.p_treated
    total = sum(
        table.px[level] * table.mediator_probability(level, z) * table.mean(level, z)
        for level in (x, xbar)
        for z in table.levels
    )
    return total - sum(table.mixed_mean(z, q) * table.mediator_probability(xbar, z) for z in table.levels)


def _request(dist, request):
    if request is None:
        return MeasureRequest.for_source(dist)
    return request


def _report(measure, value, request, level=None, label=None):
    names = {"X": request.exposure, "Z": request.mediator, "Y": request.outcome, "level": level}
    return EffectReport(
        measure=measure,
        value=float(value),
        formula=FORMULAS[measure].format(**names),
        assumptions=ASSUMPTIONS[measure].format(**names),
        label=label,
    )


def te(dist, request=None):
    """E[Y|x] - E[Y|x̄]"""
    request = _request(dist, request)
    request.check_exposure(dist)
    x, xbar = request.exposure_levels
    value = expectation(dist, request.outcome, {request.exposure: x}) - expectation(
        dist, request.outcome, {request.exposure: xbar}
    )
    return _report(Measure.TE, value, request)


def de(dist, request=None):
    """adjustment for the mediator: sum_z (E[Y|x,z] - E[Y|x̄,z]) p(z)"""
    request = _request(dist, request)
    table = MediationTable.from_distribution(dist, request)
    return _report(Measure.DE, de_value(table, table.p_treated), request)


def ie(dist, request=None):
    """front-door: sum_z (p(z|x) - p(z|x̄)) sum_x' E[Y|x',z] p(x')"""
    request = _request(dist, request)
    table = MediationTable.from_distribution(dist, request)
    logger.debug("Front-door: p(%s|x')=%s", request.mediator, table.pz)
    return _report(Measure.IE, ie_value(table, table.p_treated), request)


def nde(dist, request=None):
    request = _request(dist, request)
    return _report(Measure.NDE, nde_value(MediationTable.from_distribution(dist, request)), request)


def nie(dist, request=None):
    request = _request(dist, request)
    return _report(Measure.NIE, nie_value(MediationTable.from_distribution(dist, request)), request)


def tde(dist, request=None):
    request = _request(dist, request)
    return _report(Measure.TDE, tde_value(MediationTable.from_distribution(dist, request)), request)


def tie(dist, request=None):
    request = _request(dist, request)
    return _report(Measure.TIE, tie_value(MediationTable.from_distribution(dist, request)), request)


def cde(dist, level, request=None):
    """controlled direct effect with the mediator held at level"""
    request = _request(dist, request)
    request.check_exposure(dist)
    level = str(level)
    dist.variable(request.mediator).index(level)
    x, xbar = request.exposure_levels
    values = []
    for exposure in (x, xbar):
        given = {request.exposure: exposure, request.mediator: level}
        try:
            values.append(expectation(dist, request.outcome, given))
        except ZeroProbabilityCondition:
            raise ZeroProbabilityCondition(
                "stratum ({}={}, {}={}) has zero mass; E[{}|{}={},{}={}] undefined".format(
                    request.exposure, exposure, request.mediator, level,
                    request.outcome, request.exposure, exposure, request.mediator, level,
                )
            )
    return _report(
        Measure.CDE,
        values[0] - values[1],
        request,
        level=level,
        label="CDE({}={})".format(request.mediator, level),
    )


def piie(dist, request=None):
    request = _request(dist, request)
    return _report(Measure.PIIE, piie_value(MediationTable.from_distribution(dist, request)), request)


def ie_factored(dist, request=None):
    """
    IE as TE(X,Z)·TE(Z,Y) for a binary mediator, with
    TE(X,Z) = p(z|x) - p(z|x̄) and TE(Z,Y) = sum_x' (E[Y|x',z] - E[Y|x',z̄]) p(x').
    The mediator levels follow domain order: z̄ first, z second.
    """
    request = _request(dist, request)
    mediator = dist.variable(request.mediator)
    if not mediator.is_binary:
        raise NonBinaryMediator(
            "mediator {} has {} levels; the factorisation needs a binary mediator".format(
                request.mediator, mediator.size
            )
        )
    table = MediationTable.from_distribution(dist, request)
    zbar, z = mediator.levels
    q = table.p_treated
    te_xz = table.mediator_shift(z)
    te_zy = table.mixed_mean(z, q) - table.mixed_mean(zbar, q)
    return FactoredIE(te_xz, te_zy, te_xz * te_zy)


def residual(dist, request=None):
    """TE - DE - IE, left uninterpreted"""
    request = _request(dist, request)
    table = MediationTable.from_distribution(dist, request)
    q = table.p_treated
    return te(dist, request).value - de_value(table, q) - ie_value(table, q)


def all_effects(dist, request=None):
    """
    Returns the full battery: TE, DE, IE, NDE, NIE, TDE, TIE, CDE at every mediator
    level, PIIE, and the factorised IE when the mediator is binary.
    """
    request = _request(dist, request)
    table = MediationTable.from_distribution(dist, request)
    q = table.p_treated
    reports = [
        te(dist, request),
        _report(Measure.DE, de_value(table, q), request),
        _report(Measure.IE, ie_value(table, q), request),
        _report(Measure.NDE, nde_value(table), request),
        _report(Measure.NIE, nie_value(table), request),
        _report(Measure.TDE, tde_value(table), request),
        _report(Measure.TIE, tie_value(table), request),
    ]
    for level in reversed(table.levels):
        reports.append(cde(dist, level, request))
    reports.append(_report(Measure.PIIE, piie_value(table), request))
    factored = None
    if table.mediator.is_binary:
        factored = ie_factored(dist, request)
    return reports, factored
