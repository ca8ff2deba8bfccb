# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"cli tests"

import contextlib
import io
import json
import os
import shutil
import sys
import tempfile
import unittest

import numpy as np
from medfx import cached
from medfx.cli import main
from medfx.distribution import FiniteDistribution, VariableSpec, marginal, total_variation
from medfx.drug import drug_distribution
from medfx.ingest.files import dump_distribution, load_distribution
from medfx.scm.base import observational_distribution
from medfx.scm.families import Family, random_scm

RESOURCES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_resources")


def resource(name):
    return os.path.join(RESOURCES, name)


def run(*argv):
    """runs medfx with argv and returns what it printed"""
    sys.argv = ["medfx"] + list(argv)
    stdout = io.StringIO()
    with contextlib.redirect_stdout(stdout):
        main()
    return stdout.getvalue()


def run_json(*argv):
    return json.loads(run(*argv, "--json"))


def values(report, kind="effect", key="measure"):
    return {result[key]: result for result in report["results"] if result["kind"] == kind}


class EffectsCommandTest(unittest.TestCase):
    def test_drug_effects(self):
        report = run_json("effects", resource("drug_factored.json"), "--exposure", "X=1/0")
        effects = values(report)
        expected = {
            "TE": 0.46,
            "DE": 0.3725,
            "IE": 0.0875,
            "NDE": 0.32,
            "NIE": 0.035,
            "TDE": 0.425,
            "TIE": 0.14,
            "CDE(Z=1)": 0.5,
            "CDE(Z=0)": 0.2,
            "PIIE": 0.07,
        }
        for measure, value in expected.items():
            self.assertAlmostEqual(effects[measure]["value"], value, places=9, msg=measure)
        self.assertAlmostEqual(values(report, "residual")["TE-DE-IE"]["value"], 0.0, places=9)
        factored = report["results"][-1]
        self.assertEqual(factored["kind"], "factored")
        self.assertAlmostEqual(factored["te_xz"], 0.35, places=9)
        self.assertAlmostEqual(factored["te_zy"], 0.25, places=9)
        self.assertEqual(report["command"], "effects")
        self.assertEqual(report["warnings"], [])

    def test_drug_effects_from_model(self):
        report = run_json("effects", resource("drug_scm.json"), "--exposure", "X=1/0")
        self.assertAlmostEqual(values(report)["TE"]["value"], 0.46, places=9)

    def test_text_report(self):
        output = run("effects", resource("drug_factored.json"), "--exposure", "X=1/0")
        self.assertTrue(output.startswith("medfx effects\ninputs "))
        self.assertRegex(output, r"\nTE\s+0\.46\s+E\[Y\|x\] - E\[Y\|x̄\]\n")
        self.assertRegex(output, r"\nDE\s+0\.3725\s")
        self.assertIn("IE factored    TE(X,Z) = 0.35, TE(Z,Y) = 0.25, product = 0.0875", output)

    def test_null_model(self):
        report = run_json("effects", resource("null_model.json"), "--exposure", "X=1/0")
        for measure, result in values(report).items():
            self.assertAlmostEqual(result["value"], 0.0, places=12, msg=measure)

    def test_empty_stratum(self):
        sys.argv = ["medfx", "effects", resource("empty_stratum.json"), "--exposure", "X=1/0"]
        with self.assertLogs("medfx.cli", level="ERROR") as cm:
            with self.assertRaises(SystemExit) as exit_cm:
                main()
        self.assertEqual(exit_cm.exception.code, 2)
        self.assertTrue(any("(X=1, Z=0)" in line for line in cm.output))

    def test_bad_exposure_flag(self):
        sys.argv = ["medfx", "effects", resource("drug_factored.json"), "--exposure", "X=1"]
        with contextlib.redirect_stderr(io.StringIO()):
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)

    def test_levels_not_in_domain(self):
        sys.argv = ["medfx", "effects", resource("drug_factored.json"), "--exposure", "X=yes/no"]
        with self.assertLogs("medfx.cli", level="ERROR"):
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)

    def test_json_is_deterministic(self):
        argv = ("effects", resource("drug_factored.json"), "--exposure", "X=1/0", "--json")
        self.assertEqual(run(*argv), run(*argv))

    def test_digest_ignores_presentation(self):
        first = run_json("effects", resource("drug_factored.json"), "--exposure", "X=1/0")
        second = run_json("effects", resource("drug_factored.json"), "--exposure", "X=1/0", "--quiet")
        third = run_json("effects", resource("drug_factored.json"), "--exposure", "X=0/1")
        self.assertEqual(first["inputs_digest"], second["inputs_digest"])
        self.assertNotEqual(first["inputs_digest"], third["inputs_digest"])

    def test_report_file(self):
        tmp = tempfile.mkdtemp()
        path = os.path.join(tmp, "report.json")
        argv = ("effects", resource("drug_factored.json"), "--exposure", "X=1/0", "--json", "--report", path)
        output = run(*argv)
        self.assertEqual(output, "")
        with open(path) as fp:
            report = json.load(fp)
        self.assertAlmostEqual(values(report)["TE"]["value"], 0.46, places=9)
        shutil.rmtree(tmp)


class BoundsCommandTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def dump(self, name, dist):
        path = os.path.join(self.tmp, name)
        dump_distribution(dist, path)
        return path

    def test_prevalence_intervals(self):
        report = run_json(
            "bounds-px", resource("drug_conditionals.json"), "--exposure", "X=1/0", "--te", "0.46"
        )
        affine = values(report, "affine")
        np.testing.assert_allclose(affine["DE"]["interval"], [0.32, 0.425], atol=1e-12)
        np.testing.assert_allclose(affine["IE"]["interval"], [0.035, 0.14], atol=1e-12)
        intervals = values(report, "interval", "source")
        self.assertAlmostEqual(intervals["DE"]["lo"], 0.0761, places=4)
        self.assertAlmostEqual(intervals["DE"]["hi"], 0.3043, places=4)
        self.assertAlmostEqual(intervals["IE"]["lo"], 0.6957, places=4)
        self.assertAlmostEqual(intervals["IE"]["hi"], 0.9239, places=4)

    def test_prevalence_flat_mediator(self):
        report = run_json(
            "bounds-px", resource("flat_conditionals.json"), "--exposure", "X=1/0", "--measure", "DE"
        )
        affine = values(report, "affine")
        self.assertEqual(list(affine), ["DE"])
        self.assertAlmostEqual(affine["DE"]["slope"], 0.0, places=12)

    def test_zero_total_effect(self):
        path = resource("drug_conditionals.json")
        sys.argv = ["medfx", "bounds-px", path, "--exposure", "X=1/0", "--te", "0"]
        with self.assertLogs("medfx.cli", level="ERROR"):
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)

    def test_proxy_bound(self):
        model = random_scm(Family.PROXY, 0, monotone="opposite")
        path = self.dump("proxy.json", observational_distribution(model))
        report = run_json("bounds-proxy", path, "--exposure", "X=1/0", "--require-determinate")
        bound = values(report, "bound", "target")["DE"]
        self.assertEqual(bound["relation"], ">=")
        self.assertEqual(bound["indicator_neq"], 1)

    def test_proxy_text_report(self):
        model = random_scm(Family.PROXY, 0, monotone="same")
        path = self.dump("proxy.json", observational_distribution(model))
        output = run("bounds-proxy", path, "--exposure", "X=1/0")
        self.assertRegex(output, r"\nDE <= -?\d")
        self.assertIn("1_neq = 0", output)
        self.assertIn("X=0,Z=1: ", output)

    def test_uninformative_proxy_is_indeterminate(self):
        variables = [VariableSpec(name, ("0", "1")) for name in ("X", "W", "Z", "Y")]
        table = np.repeat(np.expand_dims(drug_distribution(0.5).table, 1), 2, axis=1) / 2
        path = self.dump("flat_proxy.json", FiniteDistribution(variables, table))

        report = run_json("bounds-proxy", path, "--exposure", "X=1/0")
        self.assertEqual(values(report, "bound", "target")["DE"]["relation"], "indeterminate")
        self.assertTrue(any(warning.startswith("degenerate proxy") for warning in report["warnings"]))

        sys.argv = ["medfx", "bounds-proxy", path, "--exposure", "X=1/0", "--require-determinate"]
        with contextlib.redirect_stdout(io.StringIO()) as stdout:
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 3)
        self.assertIn("DE indeterminate (candidate 0.3725)", stdout.getvalue())

    def test_multilevel_proxy(self):
        variables = [
            VariableSpec("X", ("0", "1")),
            VariableSpec("W", ("lo", "mid", "hi")),
            VariableSpec("Z", ("0", "1")),
            VariableSpec("Y", ("0", "1")),
        ]
        table = np.random.default_rng(3).dirichlet(np.ones(24)).reshape(2, 3, 2, 2)
        path = self.dump("multilevel.json", FiniteDistribution(variables, table))

        sys.argv = ["medfx", "bounds-proxy", path, "--exposure", "X=1/0"]
        with self.assertLogs("medfx.cli", level="ERROR"):
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)

        report = run_json("bounds-proxy", path, "--exposure", "X=1/0", "--multilevel-proxy")
        self.assertIn("unproven: multi-level proxy W", report["warnings"])

    def test_longterm_bound(self):
        model = random_scm(Family.LONGTERM, 0, monotone="opposite")
        path = self.dump("longterm.json", marginal(observational_distribution(model), ["W", "Z", "Y"]))
        report = run_json("bounds-longterm", path, "--te-xz", "0.3")
        bound = values(report, "bound", "target")["IE"]
        self.assertEqual(bound["relation"], ">=")
        self.assertEqual(bound["indicator_geq"], 1)

        report = run_json("bounds-longterm", path, "--te-xz", "0")
        self.assertEqual(values(report, "bound", "target")["IE"]["relation"], "=")


class OracleCommandTest(unittest.TestCase):
    def test_measures(self):
        report = run_json(
            "oracle", resource("drug_scm.json"), "--exposure", "X=1/0", "--measure", "TE", "NIE"
        )
        oracle = values(report, "oracle", "label")
        self.assertAlmostEqual(oracle["TE"]["value"], 0.46, places=9)
        self.assertAlmostEqual(oracle["NIE"]["value"], 0.035, places=9)

    def test_controlled_effect_at_every_level(self):
        report = run_json("oracle", resource("drug_scm.json"), "--exposure", "X=1/0", "--measure", "CDE")
        labels = [result["label"] for result in report["results"]]
        self.assertEqual(labels, ["CDE(Z=1)", "CDE(Z=0)"])
        self.assertAlmostEqual(report["results"][0]["value"], 0.5, places=9)

    def test_term(self):
        report = run_json("oracle", resource("drug_scm.json"), "--term", "Y_{X=0,Z_{X=1}}")
        oracle = values(report, "oracle", "label")
        self.assertAlmostEqual(oracle["Y_{X=0,Z_{X=1}}"]["value"], 0.275, places=9)

    def test_measure_needs_exposure(self):
        sys.argv = ["medfx", "oracle", resource("drug_scm.json"), "--measure", "TE"]
        with self.assertLogs("medfx.cli", level="ERROR"):
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)


class EstimateCommandTest(unittest.TestCase):
    def test_estimate(self):
        tmp = tempfile.mkdtemp()
        output = os.path.join(tmp, "estimated.json")
        report = run_json(
            "estimate",
            resource("drug_records.csv"),
            "--schema",
            resource("drug_schema.json"),
            "--output",
            output,
        )
        result = values(report, "estimate", "output")[output]
        self.assertEqual(result["total"], 1000.0)
        self.assertEqual(result["variables"], ["X", "Z", "Y"])
        self.assertLess(total_variation(load_distribution(output), drug_distribution(0.5)), 1e-12)
        shutil.rmtree(tmp)


class ValidateCommandTest(unittest.TestCase):
    def test_valid_files(self):
        report = run_json(
            "validate",
            resource("drug_factored.json"),
            resource("drug_scm.json"),
            resource("drug_schema.json"),
        )
        kinds = {result["path"]: result["file_kind"] for result in report["results"]}
        self.assertEqual(kinds[resource("drug_scm.json")], "scm")
        self.assertTrue(all(not result["errors"] for result in report["results"]))

    def test_invalid_files(self):
        sys.argv = [
            "medfx",
            "validate",
            resource("drug_factored.json"),
            resource("scm_unordered.json"),
            resource("not_json.json"),
            "--json",
        ]
        with contextlib.redirect_stdout(io.StringIO()) as stdout:
            with self.assertRaises(SystemExit) as cm:
                main()
        self.assertEqual(cm.exception.code, 2)
        errors = {result["path"]: result["errors"] for result in json.loads(stdout.getvalue())["results"]}
        self.assertEqual(errors[resource("drug_factored.json")], [])
        self.assertIn("not topologically ordered", errors[resource("scm_unordered.json")][0])
        self.assertEqual(len(errors[resource("not_json.json")]), 1)

    def test_conditionals_kind(self):
        report = run_json("validate", resource("drug_conditionals.json"), "--kind", "conditionals")
        self.assertEqual(report["results"][0]["errors"], [])


class DevCommandTest(unittest.TestCase):
    def test_suites(self):
        suites = ("decomposition", "factorization")
        report = run_json("dev", "--suite", *suites, "--count", "3", "--seed", "5", "-p", "1")
        suites = values(report, "suite", "name")
        self.assertEqual(suites["decomposition"]["checked"], 3)
        self.assertEqual(suites["factorization"]["failures"], [])


class DotMedfxTest(unittest.TestCase):
    def setUp(self):
        self.cwd = os.getcwd()
        self.tmp = tempfile.mkdtemp()
        os.chdir(self.tmp)
        cached.reset_cache()

    def tearDown(self):
        os.chdir(self.cwd)
        shutil.rmtree(self.tmp)
        cached.reset_cache()

    def test_flag_defaults(self):
        with open(".medfx", "w") as fp:
            fp.write("effects:\n  exposure: X=1/0\n  json: true\n")
        report = json.loads(run("effects", resource("drug_factored.json")))
        self.assertAlmostEqual(values(report)["TE"]["value"], 0.46, places=9)

    def test_command_line_wins(self):
        with open(".medfx", "w") as fp:
            fp.write("effects:\n  exposure: X=1/0\n")
        report = run_json("effects", resource("drug_factored.json"), "--exposure", "X=0/1")
        self.assertAlmostEqual(values(report)["TE"]["value"], -0.46, places=9)


if __name__ == "__main__":
    unittest.main()
