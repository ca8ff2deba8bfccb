#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"measure identifiers and requests"

import logging
import math
from dataclasses import dataclass, replace
from enum import Enum

from medfx.errors import MeasureError, NonBinaryExposure

logger = logging.getLogger(__name__)


class Measure(str, Enum):
    TE = "TE"
    DE = "DE"
    IE = "IE"
    NDE = "NDE"
    NIE = "NIE"
    TDE = "TDE"
    TIE = "TIE"
    CDE = "CDE"
    PIIE = "PIIE"
    TE_XZ = "TE_XZ"
    TE_ZY = "TE_ZY"
    DE_TRUE = "DE_TRUE"
    IE_TRUE = "IE_TRUE"
    ETT = "ETT"

    def __str__(self):
        return self.value


# measures the counterfactual oracle evaluates
ORACLE_MEASURES = (
    Measure.TE,
    Measure.NDE,
    Measure.NIE,
    Measure.TDE,
    Measure.TIE,
    Measure.CDE,
    Measure.PIIE,
    Measure.TE_XZ,
    Measure.TE_ZY,
    Measure.DE_TRUE,
    Measure.IE_TRUE,
    Measure.ETT,
)


@dataclass(frozen=True)
class MeasureRequest(object):
    """
    Names the roles of a mediation analysis: the binary exposure with its treated (x)
    and reference (x̄) levels, the mediator, the outcome, and optionally the controlled
    mediator level of CDE, the proxy and the exogenous confounder.
    """

    exposure: str = "X"
    treated: str = "1"
    reference: str = "0"
    mediator: str = "Z"
    outcome: str = "Y"
    controlled: str = None
    proxy: str = "W"
    confounder: str = "V"

    @classmethod
    def for_source(cls, source, exposure="X", treated=None, reference=None, **kwargs):
        """
        Request with levels taken from source (a distribution or structural model);
        missing levels default to the declared order, reference first.
        """
        spec = source.variable(exposure)
        if not spec.is_binary:
            raise NonBinaryExposure(
                "exposure {} has {} levels {}, exactly 2 are required".format(
                    exposure, spec.size, list(spec.levels)
                )
            )
        if reference is None and treated is None:
            reference, treated = spec.levels
        elif reference is None:
            reference = next(level for level in spec.levels if level != str(treated))
        elif treated is None:
            treated = next(level for level in spec.levels if level != str(reference))
        request = cls(exposure=exposure, treated=str(treated), reference=str(reference), **kwargs)
        request.check_exposure(source)
        return request

    def check_exposure(self, source):
        self.check_exposure_spec(source.variable(self.exposure))

    def check_exposure_spec(self, spec):
        if not spec.is_binary:
            raise NonBinaryExposure("exposure {} must be binary".format(self.exposure))
        if {self.treated, self.reference} != set(spec.levels):
            raise MeasureError(
                "exposure levels {}/{} do not match the domain of {}: {}".format(
                    self.treated, self.reference, self.exposure, list(spec.levels)
                )
            )

    @property
    def exposure_levels(self):
        return self.treated, self.reference

    def swapped(self):
        """the same request with the treated and reference levels exchanged"""
        return replace(self, treated=self.reference, reference=self.treated)


@dataclass(frozen=True)
class EffectReport(object):
    """A measure value with the identification formula and the graph assumptions it rests on"""

    measure: Measure
    value: float
    formula: str
    assumptions: str
    label: str = None

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise MeasureError("{} evaluated to a non-finite value {}".format(self.measure, self.value))

    @property
    def name(self):
        return self.label or str(self.measure)

    def as_dict(self):
        return {
            "kind": "effect",
            "measure": self.name,
            "value": self.value,
            "formula": self.formula,
            "assumptions": self.assumptions,
        }
