# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"counterfactual oracle tests"

import unittest

from medfx.bounds.proxy import proxy_de_bound
from medfx.distribution import VariableSpec
from medfx.errors import MeasureError, NonBinaryExposure, UnsupportedMeasureError
from medfx.measures import Measure, MeasureRequest
from medfx.scm.base import ExogenousVariable, Mechanism, StructuralModel, observational_distribution
from medfx.scm.families import Family, drug_scm, random_scm
from medfx.scm.oracle import oracle_effect

DRUG_VALUES = {
    Measure.TE: 0.46,
    Measure.NDE: 0.32,
    Measure.NIE: 0.035,
    Measure.TDE: 0.425,
    Measure.TIE: 0.14,
    Measure.PIIE: 0.07,
    Measure.TE_XZ: 0.35,
    Measure.TE_ZY: 0.25,
    Measure.IE_TRUE: 0.0875,
    Measure.DE_TRUE: 0.3725,
    Measure.ETT: 0.46,
}


class DrugOracleTest(unittest.TestCase):
    def setUp(self):
        self.model = drug_scm(0.5)
        self.request = MeasureRequest()

    def test_drug_values(self):
        for measure, expected in DRUG_VALUES.items():
            value = oracle_effect(self.model, measure, self.request)
            self.assertAlmostEqual(value, expected, places=9, msg=str(measure))

    def test_controlled_direct_effect(self):
        treated = oracle_effect(self.model, Measure.CDE, MeasureRequest(controlled="1"))
        untreated = oracle_effect(self.model, Measure.CDE, MeasureRequest(controlled="0"))
        self.assertAlmostEqual(treated, 0.5, places=9)
        self.assertAlmostEqual(untreated, 0.2, places=9)

    def test_cde_needs_level(self):
        with self.assertRaises(MeasureError):
            oracle_effect(self.model, Measure.CDE, self.request)

    def test_default_request(self):
        self.assertAlmostEqual(oracle_effect(self.model, "TE"), 0.46, places=9)

    def test_swapped_levels_negate(self):
        swapped = self.request.swapped()
        self.assertAlmostEqual(oracle_effect(self.model, Measure.TE, swapped), -0.46, places=9)
        self.assertAlmostEqual(oracle_effect(self.model, Measure.TE_XZ, swapped), -0.35, places=9)

    def test_not_an_oracle_measure(self):
        with self.assertRaises(UnsupportedMeasureError):
            oracle_effect(self.model, Measure.DE, self.request)

    def test_three_level_exposure(self):
        three = VariableSpec("X", ("a", "b", "c"))
        model = StructuralModel(
            [ExogenousVariable(three, (0.2, 0.3, 0.5))],
            [Mechanism(VariableSpec("Y", ("0", "1")), ("X",), {("a",): "0", ("b",): "1", ("c",): "1"})],
        )
        with self.assertRaises(NonBinaryExposure):
            oracle_effect(model, Measure.TE)


class RandomOracleTest(unittest.TestCase):
    def test_decomposition(self):
        for seed in range(20):
            model = random_scm(Family.MEDIATION, seed)
            measures = (Measure.TE, Measure.NDE, Measure.TIE, Measure.TDE, Measure.NIE)
            value = {measure: oracle_effect(model, measure) for measure in measures}
            self.assertAlmostEqual(value[Measure.TE], value[Measure.NDE] + value[Measure.TIE], places=9)
            self.assertAlmostEqual(value[Measure.TE], value[Measure.TDE] + value[Measure.NIE], places=9)

    def test_ett_without_confounding(self):
        for seed in range(10):
            model = random_scm(Family.MEDIATION, seed)
            ett = oracle_effect(model, Measure.ETT)
            self.assertAlmostEqual(ett, oracle_effect(model, Measure.TE), places=9)

    def test_confounder_adjusted_effect_with_perfect_proxy(self):
        # W copies V, so adjusting for V and for W coincide
        for seed in range(10):
            model = random_scm(Family.PROXY, seed, proxy_copy="V")
            bound = proxy_de_bound(observational_distribution(model))
            self.assertAlmostEqual(bound.bound_value, oracle_effect(model, Measure.DE_TRUE), places=9)


if __name__ == "__main__":
    unittest.main()
