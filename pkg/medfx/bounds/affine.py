#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"DE and IE as affine functions of the unknown treatment prevalence"

import logging

from medfx import defaults
from medfx.bounds.base import AffineEffect
from medfx.distribution import FiniteDistribution
from medfx.effects import MediationTable, de_value, ie_value
from medfx.errors import UnsupportedMeasureError, ZeroTotalEffect
from medfx.measures import Measure, MeasureRequest

logger = logging.getLogger(__name__)

VALUES = {Measure.DE: de_value, Measure.IE: ie_value}


def affine_in_px(conditionals, measure, request=None):
    """
    Exact intercept and slope of DE or IE in p(x). conditionals is a MediationTable or a
    distribution, whose own p(x) is then ignored.
    """
    try:
        value = VALUES[Measure(measure)]
    except (KeyError, ValueError):
        raise UnsupportedMeasureError("{} is not affine in p(x), only DE and IE are".format(measure))
    if isinstance(conditionals, FiniteDistribution):
        if request is None:
            request = MeasureRequest.for_source(conditionals)
        conditionals = MediationTable.from_distribution(conditionals, request)

    intercept = value(conditionals, 0.0)
    slope = value(conditionals, 1.0) - intercept
    logger.debug("affine_in_px: %s = %r + %r p(x)", measure, intercept, slope)
    return AffineEffect(Measure(measure), intercept, slope)


def reduction_interval(affine, te):
    """range of 1 - measure/te over p(x) in [0, 1]"""
    if abs(te) <= defaults.TOLERANCE:
        raise ZeroTotalEffect("total effect {!r} is zero, relative reduction undefined".format(te))
    ends = (1.0 - affine.at(0.0) / te, 1.0 - affine.at(1.0) / te)
    return min(ends), max(ends)
