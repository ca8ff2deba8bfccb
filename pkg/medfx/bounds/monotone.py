#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"monotonicity of conditional expectations in an ordered proxy"

import itertools
import logging

import numpy as np
from medfx import defaults
from medfx.bounds.base import Direction, MonotoneVerdict, StratumEvidence
from medfx.distribution import expectation

logger = logging.getLogger(__name__)


def classify(differences, tolerance=defaults.TOLERANCE):
    """direction of a sequence of consecutive differences"""
    differences = np.asarray(differences, dtype=float)
    if np.all(np.abs(differences) <= tolerance):
        return Direction.CONSTANT
    if np.all(differences >= -tolerance):
        return Direction.NONDECREASING
    if np.all(differences <= tolerance):
        return Direction.NONINCREASING
    return Direction.NEITHER


def aggregate(directions):
    """
    neither when any stratum is neither or strata disagree, constant only when all are,
    otherwise the shared monotone direction
    """
    directions = set(directions)
    if Direction.NEITHER in directions:
        return Direction.NEITHER
    directions.discard(Direction.CONSTANT)
    if not directions:
        return Direction.CONSTANT
    if len(directions) == 1:
        return directions.pop()
    return Direction.NEITHER


def monotone_direction(dist, target, strata, proxy, tolerance=defaults.TOLERANCE):
    """
    Checks E[target|stratum, w] across the declared order of the proxy levels within every
    stratum of the strata variables. Raises ZeroProbabilityCondition on an empty cell.
    """
    strata = list(strata)
    proxy_levels = dist.variable(proxy).levels
    dist.variable(target).numeric_values()
    evidence = []
    for levels in itertools.product(*(dist.variable(name).levels for name in strata)):
        stratum = tuple(zip(strata, levels))
        means = [expectation(dist, target, dict(stratum, **{proxy: w})) for w in proxy_levels]
        differences = np.diff(means)
        direction = classify(differences, tolerance)
        evidence.append(StratumEvidence(stratum, tuple(means), tuple(differences.tolist()), direction))
        logger.debug("monotone_direction: E[%s|%s,%s]=%s %s", target, dict(stratum), proxy, means, direction)

    direction = aggregate(item.direction for item in evidence)
    return MonotoneVerdict(target, proxy, direction, tuple(evidence))
