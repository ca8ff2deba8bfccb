# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"property suite tests"

import os
import unittest

from medfx import defaults
from medfx.errors import MedfxError
from medfx.suites import SUITES, random_joint, run_check, run_suite
from medfx.utils import base_seed


class SuiteTest(unittest.TestCase):
    def test_every_suite_passes(self):
        for name in SUITES:
            result = run_suite(name, count=5)
            self.assertEqual(result.checked, 5, name)
            self.assertEqual(result.failures, [], name)

    def test_identification_suites(self):
        for name in ("decomposition", "frontdoor", "adjustment", "factorization"):
            result = run_suite(name, count=100, base_seed=1000)
            self.assertTrue(result.passed, result.failures)
            self.assertEqual(result.determinate, 100)

    def test_proxy_suite(self):
        result = run_suite("proxy", count=50)
        self.assertTrue(result.passed, result.failures)
        self.assertEqual(result.determinate, 50)

    def test_longterm_suites(self):
        for name in ("longterm", "longterm-direct"):
            result = run_suite(name, count=50)
            self.assertTrue(result.passed, result.failures)

    def test_parallel_matches_serial(self):
        serial = run_suite("ett", count=8, base_seed=3)
        parallel = run_suite("ett", count=8, base_seed=3, parallel=2)
        self.assertEqual(serial.as_dict(), parallel.as_dict())

    def test_unknown_suite(self):
        with self.assertRaises(MedfxError):
            run_suite("nonexistent")

    def test_run_check_reports_errors(self):
        seed, determinate, errors = run_check("factorization", 4)
        self.assertEqual(seed, 4)
        self.assertTrue(determinate)
        self.assertEqual(errors, [])

    def test_random_joint_is_reproducible(self):
        self.assertEqual(random_joint(9).table.tolist(), random_joint(9).table.tolist())

    def test_as_dict(self):
        result = run_suite("piie", count=2).as_dict()
        self.assertEqual(result["kind"], "suite")
        self.assertEqual(result["name"], "piie")


@unittest.skipUnless(os.environ.get("MEDFX_ACCEPTANCE"), "set MEDFX_ACCEPTANCE=1 to run the full-size suites")
class AcceptanceSuiteTest(unittest.TestCase):
    def test_full_size_suites(self):
        for name in SUITES:
            result = run_suite(name, base_seed=base_seed(), parallel=4)
            self.assertEqual(result.checked, defaults.DEFAULT_SUITE_SIZES[name], name)
            self.assertEqual(result.failures, [], name)


class BaseSeedTest(unittest.TestCase):
    def setUp(self):
        self.saved = os.environ.pop("MEDFX_SEED", None)

    def tearDown(self):
        os.environ.pop("MEDFX_SEED", None)
        if self.saved is not None:
            os.environ["MEDFX_SEED"] = self.saved

    def test_default(self):
        self.assertEqual(base_seed(), 0)

    def test_environment(self):
        os.environ["MEDFX_SEED"] = "42"
        self.assertEqual(base_seed(), 42)

    def test_not_an_integer(self):
        os.environ["MEDFX_SEED"] = "abc"
        with self.assertLogs("medfx.utils", level="WARNING"):
            self.assertEqual(base_seed(), 0)


if __name__ == "__main__":
    unittest.main()
