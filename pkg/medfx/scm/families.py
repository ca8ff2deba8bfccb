#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"canonical and seeded random structural models"

import itertools
import logging
from enum import Enum

import numpy as np
from medfx import defaults
from medfx.bounds.longterm import longterm_ie_bound
from medfx.bounds.proxy import proxy_de_bound
from medfx.distribution import VariableSpec, marginal
from medfx.drug import MEDIATOR_GIVEN_EXPOSURE, OUTCOME_GIVEN_EXPOSURE_MEDIATOR
from medfx.errors import ModelError, RejectionBudgetExceeded
from medfx.measures import Measure, MeasureRequest
from medfx.scm.base import ExogenousVariable, Mechanism, StructuralModel, observational_distribution
from medfx.scm.oracle import oracle_effect

logger = logging.getLogger(__name__)

BINARY = ("0", "1")


class Family(str, Enum):
    MEDIATION = "MEDIATION"
    CONFOUNDED_FRONTDOOR = "CONFOUNDED_FRONTDOOR"
    REVERSED = "REVERSED"
    PROXY = "PROXY"
    LONGTERM = "LONGTERM"

    def __str__(self):
        return self.value


MONOTONE_CONSTRAINTS = {"any": (0, 1), "opposite": (1,), "same": (0,)}


def binary(name):
    return VariableSpec(name, BINARY)


def bernoulli(name, p):
    return ExogenousVariable(binary(name), (1.0 - p, p))


def copy_of(name, parent):
    """child := parent, for binary variables"""
    return Mechanism(binary(name), (parent,), {(level,): level for level in BINARY})


def response(name, parents, p_one):
    """
    Exogenous response variable and mechanism reproducing p(child=1|parents) exactly.
    The levels of U are the intervals between the sorted conditional probabilities
    (plus 0 and 1), weighted by their width; the child is 1 when its interval lies
    below p(child=1|configuration).
    """
    breakpoints = sorted({0.0, 1.0} | {float(p) for p in p_one.values()})
    widths = np.diff(breakpoints)
    noise = "U_{}".format(name)
    levels = tuple("u{}".format(i) for i in range(len(widths)))
    exogenous = ExogenousVariable(VariableSpec(noise, levels), tuple(widths.tolist()))
    table = {}
    for config, p in p_one.items():
        for level, upper in zip(levels, breakpoints[1:]):
            table[tuple(config) + (level,)] = "1" if upper <= p else "0"
    return exogenous, Mechanism(binary(name), tuple(parents) + (noise,), table)


def drug_scm(px=defaults.DEFAULT_PX):
    """
    X drug, Z biomarker, Y recovery: X := U_X ~ Bernoulli(px), Z and Y thresholded
    responses reproducing p(z|x') and E[Y|x',z] of the drug example.
    """
    u_z, z = response("Z", ("X",), {(x,): p for x, p in MEDIATOR_GIVEN_EXPOSURE.items()})
    u_y, y = response("Y", ("X", "Z"), dict(OUTCOME_GIVEN_EXPOSURE_MEDIATOR))
    return StructuralModel([bernoulli("U_X", px), u_z, u_y], [copy_of("X", "U_X"), z, y])


class _Builder(object):
    """collects exogenous variables and mechanisms drawn from one generator"""

    def __init__(self, rng):
        self.rng = rng
        self.exogenous = []
        self.endogenous = []

    def probability(self):
        return float(self.rng.uniform(*defaults.RANDOM_PROB_RANGE))

    def root(self, name):
        self.exogenous.append(bernoulli(name, self.probability()))

    def source(self, name):
        """binary endogenous variable with no endogenous parents"""
        self.root("U_{}".format(name))
        self.endogenous.append(copy_of(name, "U_{}".format(name)))

    def node(self, name, parents):
        p_one = {config: self.probability() for config in itertools.product(BINARY, repeat=len(parents))}
        exogenous, mechanism = response(name, parents, p_one)
        self.exogenous.append(exogenous)
        self.endogenous.append(mechanism)

    def copy(self, name, parent):
        self.endogenous.append(copy_of(name, parent))

    def build(self):
        return StructuralModel(self.exogenous, self.endogenous)


def _mediation(builder, **options):
    builder.source("X")
    builder.node("Z", ("X",))
    builder.node("Y", ("X", "Z"))


def _confounded_frontdoor(builder, **options):
    builder.root("V")
    builder.node("X", ("V",))
    builder.node("Z", ("X",))
    builder.node("Y", ("Z", "V"))


def _reversed(builder, **options):
    # 0: Z -> X, 1: Z <-> X through a shared parent, 2: both
    variant = int(builder.rng.integers(3))
    if variant == 0:
        builder.source("Z")
        builder.node("X", ("Z",))
    else:
        builder.root("S")
        builder.node("Z", ("S",))
        builder.node("X", ("S", "Z") if variant == 2 else ("S",))
    builder.node("Y", ("X", "Z"))


def _proxy(builder, proxy_copy=None, **options):
    builder.root("V")
    if proxy_copy is None:
        builder.node("W", ("V",))
    elif proxy_copy == "V":
        builder.copy("W", "V")
    else:
        raise ModelError("PROXY can only copy V into W, not {}".format(proxy_copy))
    builder.node("X", ("V",))
    builder.node("Z", ("X",))
    builder.node("Y", ("X", "Z", "V"))


def _longterm(builder, proxy_copy=None, direct_edge=False, **options):
    builder.root("V")
    builder.node("X", ("V",))
    if proxy_copy is None:
        builder.node("W", ("X",))
    elif proxy_copy in ("X", "V"):
        builder.copy("W", proxy_copy)
    else:
        raise ModelError("LONGTERM can only copy X or V into W, not {}".format(proxy_copy))
    builder.node("Z", ("X",))
    builder.node("Y", ("X", "Z", "V") if direct_edge else ("Z", "V"))


FAMILIES = {
    Family.MEDIATION: _mediation,
    Family.CONFOUNDED_FRONTDOOR: _confounded_frontdoor,
    Family.REVERSED: _reversed,
    Family.PROXY: _proxy,
    Family.LONGTERM: _longterm,
}


def proxy_indicator(model, family):
    """1_≠ of the family's bound on the observables of model"""
    request = MeasureRequest()
    joint = observational_distribution(model)
    if family == Family.PROXY:
        return proxy_de_bound(joint, request).indicator_neq
    observed = marginal(joint, [request.proxy, request.mediator, request.outcome])
    te_xz = oracle_effect(model, Measure.TE_XZ, request)
    return longterm_ie_bound(te_xz, observed, request).indicator_neq


def random_scm(
    family,
    seed,
    monotone=None,
    direct_edge=False,
    proxy_copy=None,
    rejection_budget=defaults.REJECTION_BUDGET,
):
    """
    Reproducible binary model of family from seed. monotone ('any', 'opposite' or 'same')
    redraws PROXY and LONGTERM models until the proxy trends are jointly determinate,
    opposite or alike, giving up after rejection_budget draws.
    direct_edge adds X -> Y to LONGTERM; proxy_copy makes W an exact copy of V or X.
    """
    family = Family(family)
    build = FAMILIES[family]
    rng = np.random.default_rng(seed)
    if monotone is None:
        builder = _Builder(rng)
        build(builder, direct_edge=direct_edge, proxy_copy=proxy_copy)
        return builder.build()

    if family not in (Family.PROXY, Family.LONGTERM):
        raise ModelError("monotonicity constraints apply to PROXY and LONGTERM, not {}".format(family))
    try:
        accepted = MONOTONE_CONSTRAINTS[monotone]
    except KeyError:
        raise ModelError(
            "unknown monotonicity constraint {}, use {}".format(monotone, sorted(MONOTONE_CONSTRAINTS))
        )

    for draw in range(rejection_budget):
        builder = _Builder(rng)
        build(builder, direct_edge=direct_edge, proxy_copy=proxy_copy)
        model = builder.build()
        if proxy_indicator(model, family) in accepted:
            logger.debug("random_scm: %s seed %s accepted after %d draws", family, seed, draw + 1)
            return model
    raise RejectionBudgetExceeded(
        "no {} model with {} monotone trends for seed {} after {} draws".format(
            family, monotone, seed, rejection_budget
        )
    )
