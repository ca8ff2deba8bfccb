#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"bound result types"

import logging
from dataclasses import dataclass
from enum import Enum

from medfx import defaults

logger = logging.getLogger(__name__)


class Direction(str, Enum):
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"
    CONSTANT = "constant"
    NEITHER = "neither"

    def __str__(self):
        return self.value

    @property
    def monotone(self):
        return self in (Direction.NONDECREASING, Direction.NONINCREASING)


class Relation(str, Enum):
    GEQ = ">="
    LEQ = "<="
    EQ = "="
    INDETERMINATE = "indeterminate"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class AffineEffect(object):
    """measure = intercept + slope·p(x), over p(x) in [0, 1]"""

    measure: str
    intercept: float
    slope: float
    parameter: str = "p(x)"

    @property
    def lo(self):
        return min(self.intercept, self.intercept + self.slope)

    @property
    def hi(self):
        return max(self.intercept, self.intercept + self.slope)

    @property
    def interval(self):
        return self.lo, self.hi

    def at(self, q):
        return self.intercept + self.slope * q

    def as_dict(self):
        return {
            "kind": "affine",
            "measure": str(self.measure),
            "parameter": self.parameter,
            "intercept": self.intercept,
            "slope": self.slope,
            "interval": [self.lo, self.hi],
        }


@dataclass(frozen=True)
class StratumEvidence(object):
    """E[target|stratum, w] across the ordered proxy levels"""

    stratum: tuple
    means: tuple
    differences: tuple
    direction: Direction

    def label(self):
        if not self.stratum:
            return "(all)"
        return ",".join("{}={}".format(name, level) for name, level in self.stratum)

    def as_dict(self):
        return {
            "stratum": dict(self.stratum),
            "means": list(self.means),
            "differences": list(self.differences),
            "direction": str(self.direction),
        }


@dataclass(frozen=True)
class MonotoneVerdict(object):
    target: str
    proxy: str
    direction: Direction
    evidence: tuple

    def evidence_for(self, **stratum):
        for item in self.evidence:
            if all(dict(item.stratum).get(name) == level for name, level in stratum.items()):
                return item
        raise KeyError(stratum)

    def as_dict(self):
        return {
            "target": self.target,
            "proxy": self.proxy,
            "direction": str(self.direction),
            "evidence": [item.as_dict() for item in self.evidence],
        }


@dataclass(frozen=True)
class BoundResult(object):
    """
    One-sided bound target <relation> bound_value. indicator_neq is 1 when the outcome and
    exposure trends in the proxy run in opposite directions, 0 when they agree, None when
    undefined. indicator_geq is only set by the long-term bound.
    """

    target: str
    bound_value: float
    relation: Relation
    indicator_neq: int = None
    indicator_geq: int = None
    verdicts: tuple = ()
    diagnostics: tuple = ()

    @property
    def determinate(self):
        return self.relation != Relation.INDETERMINATE

    def holds(self, true_value, slack=defaults.TOLERANCE):
        """whether true_value satisfies the stated relation, violations under slack forgiven"""
        if self.relation == Relation.GEQ:
            return true_value >= self.bound_value - slack
        if self.relation == Relation.LEQ:
            return true_value <= self.bound_value + slack
        if self.relation == Relation.EQ:
            return abs(true_value - self.bound_value) <= slack
        return True

    def as_dict(self):
        return {
            "kind": "bound",
            "target": str(self.target),
            "relation": str(self.relation),
            "bound_value": self.bound_value,
            "indicator_neq": self.indicator_neq,
            "indicator_geq": self.indicator_geq,
            "verdicts": [verdict.as_dict() for verdict in self.verdicts],
            "diagnostics": list(self.diagnostics),
        }


def pair_indicator(outcome_verdict, paired):
    """
    1 when every outcome stratum trends opposite to the exposure-side trend of its mediator
    stratum, 0 when every pair agrees, None when any trend is constant or neither, or pairs mix.
    paired returns the StratumEvidence an outcome stratum is compared against.
    """
    pairs = set()
    for item in outcome_verdict.evidence:
        other = paired(item)
        if not (item.direction.monotone and other.direction.monotone):
            return None
        pairs.add(item.direction != other.direction)
    if pairs == {True}:
        return 1
    if pairs == {False}:
        return 0
    return None
