#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"seeded property suites comparing the identification formulas with the oracle"

import logging
import multiprocessing
from dataclasses import dataclass, field
from functools import partial

import numpy as np
from medfx import defaults
from medfx.bounds.longterm import longterm_ie_bound
from medfx.bounds.proxy import proxy_de_bound
from medfx.distribution import FiniteDistribution, VariableSpec, marginal
from medfx.effects import cde, de, ie, ie_factored, nde, nie, piie, tde, te, tie
from medfx.errors import MedfxError
from medfx.measures import Measure, MeasureRequest
from medfx.scm.base import observational_distribution
from medfx.scm.families import Family, random_scm
from medfx.scm.oracle import oracle_effect

logger = logging.getLogger(__name__)

REQUEST = MeasureRequest()


@dataclass
class SuiteResult(object):
    name: str
    checked: int = 0
    determinate: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def as_dict(self):
        return {
            "kind": "suite",
            "name": self.name,
            "checked": self.checked,
            "determinate": self.determinate,
            "failures": list(self.failures),
        }


def _observed(model, names=("X", "Z", "Y")):
    return marginal(observational_distribution(model), list(names))


def _compare(label, formula, oracle, tolerance=defaults.TOLERANCE):
    if abs(formula - oracle) > tolerance:
        return ["{}: formula {!r} != oracle {!r}".format(label, formula, oracle)]
    return []


def check_decomposition(seed):
    """TE = NDE + TIE = TDE + NIE on a MEDIATION model"""
    model = random_scm(Family.MEDIATION, seed)
    measures = (Measure.TE, Measure.NDE, Measure.NIE, Measure.TDE, Measure.TIE)
    value = {measure: oracle_effect(model, measure, REQUEST) for measure in measures}
    errors = _compare("TE vs NDE+TIE", value[Measure.NDE] + value[Measure.TIE], value[Measure.TE])
    errors += _compare("TE vs TDE+NIE", value[Measure.TDE] + value[Measure.NIE], value[Measure.TE])
    return True, errors


def check_frontdoor(seed):
    """front-door IE of the observed joint equals the oracle TE under X <-> Y confounding"""
    model = random_scm(Family.CONFOUNDED_FRONTDOOR, seed)
    truth = oracle_effect(model, Measure.TE, REQUEST)
    return True, _compare("IE vs TE", ie(_observed(model), REQUEST).value, truth)


def check_adjustment(seed):
    """adjustment DE of the observed joint equals the oracle TE when Z precedes X"""
    model = random_scm(Family.REVERSED, seed)
    truth = oracle_effect(model, Measure.TE, REQUEST)
    return True, _compare("DE vs TE", de(_observed(model), REQUEST).value, truth)


def random_joint(seed):
    """Dirichlet(1) joint over binary X, Z, Y"""
    rng = np.random.default_rng(seed)
    variables = [VariableSpec(name, ("0", "1")) for name in ("X", "Z", "Y")]
    return FiniteDistribution(variables, rng.dirichlet(np.ones(8)).reshape(2, 2, 2))


def check_factorization(seed):
    dist = random_joint(seed)
    factored = ie_factored(dist, REQUEST)
    return True, _compare("IE vs TE(X,Z)·TE(Z,Y)", factored.product, ie(dist, REQUEST).value)


def check_ett(seed):
    """NDE on REVERSED and NIE on CONFOUNDED_FRONTDOOR both equal E[Y_x - Y_x̄ | X=x̄]"""
    reversed_model = random_scm(Family.REVERSED, seed)
    frontdoor_model = random_scm(Family.CONFOUNDED_FRONTDOOR, seed)
    errors = _compare(
        "NDE vs ETT (reversed)",
        nde(_observed(reversed_model), REQUEST).value,
        oracle_effect(reversed_model, Measure.ETT, REQUEST),
    )
    errors += _compare(
        "NIE vs ETT (front-door)",
        nie(_observed(frontdoor_model), REQUEST).value,
        oracle_effect(frontdoor_model, Measure.ETT, REQUEST),
    )
    return True, errors


def check_piie(seed):
    model = random_scm(Family.MEDIATION, seed)
    truth = oracle_effect(model, Measure.PIIE, REQUEST)
    return True, _compare("PIIE", piie(_observed(model), REQUEST).value, truth)


def check_mediation_oracle(seed):
    """every classical formula against its counterfactual definition on a MEDIATION model"""
    model = random_scm(Family.MEDIATION, seed)
    dist = _observed(model)
    errors = []
    formulas = (
        (Measure.TE, te),
        (Measure.NDE, nde),
        (Measure.NIE, nie),
        (Measure.TDE, tde),
        (Measure.TIE, tie),
    )
    for measure, formula in formulas:
        errors += _compare(str(measure), formula(dist, REQUEST).value, oracle_effect(model, measure, REQUEST))
    for level in ("0", "1"):
        controlled = MeasureRequest(controlled=level)
        errors += _compare(
            "CDE(Z={})".format(level),
            cde(dist, level, REQUEST).value,
            oracle_effect(model, Measure.CDE, controlled),
        )
    return True, errors


def check_proxy(seed):
    """a determinate proxy DE bound holds against the confounder-adjusted DE"""
    model = random_scm(Family.PROXY, seed, monotone="any")
    bound = proxy_de_bound(_observed(model, ("X", "W", "Z", "Y")), REQUEST)
    truth = oracle_effect(model, Measure.DE_TRUE, REQUEST)
    if bound.determinate and not bound.holds(truth):
        return True, ["DE {!r} violates DE {} {!r}".format(truth, bound.relation, bound.bound_value)]
    return bound.determinate, []


def _check_longterm(seed, direct_edge):
    model = random_scm(Family.LONGTERM, seed, monotone="any", direct_edge=direct_edge)
    te_xz = oracle_effect(model, Measure.TE_XZ, REQUEST)
    bound = longterm_ie_bound(te_xz, _observed(model, ("W", "Z", "Y")), REQUEST)
    truth = oracle_effect(model, Measure.IE_TRUE, REQUEST)
    if bound.determinate and not bound.holds(truth):
        return True, ["IE {!r} violates IE {} {!r}".format(truth, bound.relation, bound.bound_value)]
    return bound.determinate, []


def check_longterm(seed):
    return _check_longterm(seed, direct_edge=False)


def check_longterm_direct(seed):
    """as check_longterm with the X -> Y edge added"""
    return _check_longterm(seed, direct_edge=True)


SUITES = {
    "decomposition": check_decomposition,
    "frontdoor": check_frontdoor,
    "adjustment": check_adjustment,
    "factorization": check_factorization,
    "ett": check_ett,
    "piie": check_piie,
    "mediation-oracle": check_mediation_oracle,
    "proxy": check_proxy,
    "longterm": check_longterm,
    "longterm-direct": check_longterm_direct,
}


def run_check(name, seed):
    """runs one seed of suite name; errors become failures instead of aborting the suite"""
    try:
        determinate, errors = SUITES[name](seed)
    except MedfxError as e:
        return seed, False, ["{}: {}".format(type(e).__name__, e)]
    return seed, determinate, errors


def run_suite(name, count=None, base_seed=0, parallel=1):
    """
    Runs suite name over seeds base_seed .. base_seed + count - 1, in a multiprocessing
    pool of parallel processes when parallel > 1. Results do not depend on scheduling.
    """
    if name not in SUITES:
        raise MedfxError("unknown suite {}, use {}".format(name, sorted(SUITES)))
    count = defaults.DEFAULT_SUITE_SIZES[name] if count is None else count
    seeds = range(base_seed, base_seed + count)
    worker = partial(run_check, name)

    if parallel > 1:
        pool = multiprocessing.Pool(parallel)
        try:
            outcomes = pool.map(worker, seeds)
            pool.close()
        except Exception:
            pool.terminate()
            logger.debug("Suite pool terminated")
            raise
        finally:
            pool.join()
    else:
        outcomes = list(map(worker, seeds))

    result = SuiteResult(name)
    for seed, determinate, errors in outcomes:
        result.checked += 1
        result.determinate += int(determinate)
        result.failures.extend("seed {}: {}".format(seed, error) for error in errors)
    logger.info(
        "Suite %s: %d checked, %d determinate, %d failures",
        name,
        result.checked,
        result.determinate,
        len(result.failures),
    )
    return result
