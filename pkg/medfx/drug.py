#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"""
canonical drug example: X drug taken, Z mediating biomarker, Y recovery.
The treatment prevalence p(x) is left free.
"""

import numpy as np
from medfx import defaults
from medfx.distribution import Factor, VariableSpec, joint_from_factors
from medfx.effects import MediationTable
from medfx.measures import MeasureRequest

# p(Z=1 | X=x')
MEDIATOR_GIVEN_EXPOSURE = {"1": 0.75, "0": 0.4}

# E[Y | X=x', Z=z']
OUTCOME_GIVEN_EXPOSURE_MEDIATOR = {
    ("1", "1"): 0.8,
    ("1", "0"): 0.4,
    ("0", "1"): 0.3,
    ("0", "0"): 0.2,
}


def drug_variables():
    return tuple(VariableSpec(name, ("0", "1")) for name in ("X", "Z", "Y"))


def drug_factors(px=defaults.DEFAULT_PX):
    """p(X), p(Z|X), p(Y|X,Z) with binary 0/1 levels"""
    pz = np.array([[1.0 - MEDIATOR_GIVEN_EXPOSURE[x], MEDIATOR_GIVEN_EXPOSURE[x]] for x in ("0", "1")])
    py = np.array(
        [
            [
                [1.0 - OUTCOME_GIVEN_EXPOSURE_MEDIATOR[(x, z)], OUTCOME_GIVEN_EXPOSURE_MEDIATOR[(x, z)]]
                for z in ("0", "1")
            ]
            for x in ("0", "1")
        ]
    )
    return [
        Factor("X", (), np.array([1.0 - px, px])),
        Factor("Z", ("X",), pz),
        Factor("Y", ("X", "Z"), py),
    ]


def drug_distribution(px=defaults.DEFAULT_PX):
    """joint p(X,Z,Y) of the drug example at treatment prevalence px"""
    return joint_from_factors(drug_variables(), drug_factors(px))


def drug_table():
    """the drug conditionals without p(X)"""
    request = MeasureRequest()
    pz = {x: {"0": 1.0 - p, "1": p} for x, p in MEDIATOR_GIVEN_EXPOSURE.items()}
    means = dict(OUTCOME_GIVEN_EXPOSURE_MEDIATOR)
    return MediationTable.from_conditionals(request, drug_variables()[1], pz, means)
