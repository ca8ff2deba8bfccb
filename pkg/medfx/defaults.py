#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"default values for medfx variables"

import os

# absolute tolerance for every probability/effect equality check
TOLERANCE = 1e-9

# largest number of joint exogenous states the oracle will enumerate
STATE_BUDGET = 10**7

# draws attempted by random_scm before giving up on monotonicity constraints
REJECTION_BUDGET = 10000

# treatment prevalence of the canonical drug model
DEFAULT_PX = 0.5

# random conditional probabilities are drawn from this range to keep every stratum positive
RANDOM_PROB_RANGE = (0.05, 0.95)

# significant digits for reals in text reports
SIGNIFICANT_DIGITS = 6

DOT_MEDFX_PATH = ".medfx"
SEED_ENV_VAR = "MEDFX_SEED"

DEFAULT_SUITE_SIZES = {
    "decomposition": 500,
    "frontdoor": 500,
    "adjustment": 500,
    "factorization": 500,
    "ett": 200,
    "piie": 200,
    "mediation-oracle": 200,
    "proxy": 1000,
    "longterm": 1000,
    "longterm-direct": 1000,
}

TEMPLATES_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")
REPORT_TEMPLATE = "report.txt.j2"
