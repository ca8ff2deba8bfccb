# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"input file tests"

import json
import os
import shutil
import tempfile
import unittest

import numpy as np
from medfx.distribution import VariableSpec, total_variation
from medfx.drug import drug_distribution
from medfx.errors import DistributionError, EmptyBatchError, IngestError, ModelError
from medfx.ingest.files import (
    dump_distribution,
    dump_scm,
    file_kind,
    load_conditionals,
    load_distribution,
    load_observational,
    load_record_schema,
    load_scm,
)
from medfx.ingest.records import RecordBatch, estimate_joint, read_records
from medfx.scm.base import observational_distribution
from medfx.scm.families import Family, drug_scm, random_scm

RESOURCES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "test_resources")


def resource(name):
    return os.path.join(RESOURCES, name)


def binary_joint(mass):
    cells = []
    for x in ("0", "1"):
        for y in ("0", "1"):
            cells.append({"assign": {"X": x, "Y": y}, "p": mass / 4})
    return {
        "variables": [{"name": "X", "levels": ["0", "1"]}, {"name": "Y", "levels": ["0", "1"]}],
        "joint": cells,
    }


class DistributionFileTest(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def write(self, name, obj):
        path = os.path.join(self.tmp, name)
        with open(path, "w") as fp:
            json.dump(obj, fp)
        return path

    def test_factored_drug(self):
        dist = load_distribution(resource("drug_factored.json"))
        self.assertEqual(dist.names, ("X", "Z", "Y"))
        self.assertLess(total_variation(dist, drug_distribution(0.5)), 1e-12)

    def test_missing_exposure_factor(self):
        with self.assertRaises(DistributionError) as cm:
            load_distribution(resource("drug_conditionals.json"))
        self.assertIn("p(X) required for joint; use bounds mode", str(cm.exception))

    def test_rounding_in_mass_is_accepted(self):
        dist = load_distribution(self.write("joint.json", binary_joint(1.0 + 1e-12)))
        self.assertAlmostEqual(float(dist.table.sum()), 1.0, places=9)

    def test_mass_off_by_a_percent(self):
        with self.assertRaises(DistributionError) as cm:
            load_distribution(self.write("joint.json", binary_joint(0.99)))
        self.assertIn("mass 0.99 ≠ 1", cm.exception.errors)

    def test_not_json(self):
        with self.assertRaises(IngestError) as cm:
            load_distribution(resource("not_json.json"))
        self.assertRegex(str(cm.exception), r"not_json\.json:\d+:\d+: ")

    def test_missing_file(self):
        with self.assertRaises(IngestError):
            load_distribution(os.path.join(self.tmp, "absent.json"))

    def test_schema_error_names_path(self):
        path = self.write("bad.json", {"variables": [{"name": "X"}], "joint": []})
        with self.assertRaises(IngestError) as cm:
            load_distribution(path)
        self.assertIn("['variables', 0] 'levels' is a required property", str(cm.exception))

    def test_joint_and_factors_are_exclusive(self):
        obj = binary_joint(1.0)
        obj["factors"] = [{"target": "X", "table": [{"p": {"0": 0.5, "1": 0.5}}]}]
        with self.assertRaises(IngestError):
            load_distribution(self.write("both.json", obj))

    def test_integer_levels(self):
        obj = binary_joint(1.0)
        obj["variables"][0]["levels"] = [0, 1]
        for cell in obj["joint"]:
            cell["assign"]["X"] = int(cell["assign"]["X"])
        dist = load_distribution(self.write("ints.json", obj))
        self.assertEqual(dist.variable("X").levels, ("0", "1"))

    def test_dump_and_load(self):
        path = os.path.join(self.tmp, "drug.json")
        dist = drug_distribution(0.3)
        dump_distribution(dist, path)
        loaded = load_distribution(path)
        np.testing.assert_array_equal(loaded.table, dist.table)

    def test_conditionals(self):
        table = load_conditionals(resource("drug_conditionals.json"))
        self.assertIsNone(table.px)
        self.assertAlmostEqual(table.mediator_probability("1", "1"), 0.75)
        self.assertAlmostEqual(table.mean("0", "1"), 0.3)

    def test_conditionals_need_factors(self):
        with self.assertRaises(IngestError):
            load_conditionals(self.write("joint.json", binary_joint(1.0)))


class ModelFileTest(unittest.TestCase):
    def test_drug_model(self):
        scm = load_scm(resource("drug_scm.json"))
        expected = observational_distribution(drug_scm(0.5))
        self.assertLess(total_variation(observational_distribution(scm), expected), 1e-12)

    def test_missing_combination(self):
        with self.assertRaises(ModelError) as cm:
            load_scm(resource("scm_missing_combination.json"))
        self.assertIn("missing parent combination", str(cm.exception))

    def test_unordered(self):
        with self.assertRaises(ModelError) as cm:
            load_scm(resource("scm_unordered.json"))
        self.assertIn("not topologically ordered", str(cm.exception))

    def test_dump_and_load(self):
        model = random_scm(Family.PROXY, 1)
        tmp = tempfile.mkdtemp()
        path = os.path.join(tmp, "proxy_scm.json")
        dump_scm(model, path)
        loaded = load_scm(path)
        shutil.rmtree(tmp)
        self.assertEqual(loaded.endogenous_names, model.endogenous_names)
        self.assertLess(
            total_variation(observational_distribution(loaded), observational_distribution(model)), 1e-12
        )

    def test_file_kind(self):
        self.assertEqual(file_kind(resource("drug_scm.json")), "scm")
        self.assertEqual(file_kind(resource("drug_factored.json")), "distribution")
        self.assertEqual(file_kind(resource("drug_schema.json")), "schema")

    def test_observational_of_either_kind(self):
        from_model = load_observational(resource("drug_scm.json"))
        from_table = load_observational(resource("drug_factored.json"))
        self.assertLess(total_variation(from_model, from_table), 1e-12)


class RecordsTest(unittest.TestCase):
    def setUp(self):
        self.schema = load_record_schema(resource("drug_schema.json"))
        self.tmp = tempfile.mkdtemp()

    def tearDown(self):
        shutil.rmtree(self.tmp)

    def test_counts_reproduce_drug_joint(self):
        batch = read_records(resource("drug_records.csv"), self.schema)
        self.assertEqual(batch.names, ("X", "Z", "Y"))
        self.assertEqual(sum(batch.counts), 1000)
        self.assertLess(total_variation(estimate_joint(batch), drug_distribution(0.5)), 1e-12)

    def test_four_rows(self):
        rows = [("0", "0"), ("0", "1"), ("1", "0"), ("1", "1")]
        schema = [VariableSpec("X", ("0", "1")), VariableSpec("Y", ("0", "1"))]
        dist = estimate_joint(RecordBatch(schema, rows))
        np.testing.assert_allclose(dist.table, np.full((2, 2), 0.25))

    def test_smoothing(self):
        schema = [VariableSpec("X", ("0", "1"))]
        dist = estimate_joint(RecordBatch(schema, [("1",)]), alpha=1.0)
        np.testing.assert_allclose(dist.table, [1.0 / 3, 2.0 / 3])

    def test_empty_batch(self):
        with self.assertRaises(EmptyBatchError):
            estimate_joint(RecordBatch(self.schema, []))

    def test_negative_alpha(self):
        batch = read_records(resource("drug_records.csv"), self.schema)
        with self.assertRaises(IngestError):
            estimate_joint(batch, alpha=-0.5)

    def test_unknown_level(self):
        with self.assertRaises(IngestError) as cm:
            RecordBatch(self.schema, [("0", "2", "1")])
        self.assertIn("level '2' not in the domain of Z", str(cm.exception))

    def test_missing_column(self):
        path = os.path.join(self.tmp, "records.csv")
        with open(path, "w") as fp:
            fp.write("X,Y\n0,1\n")
        with self.assertRaises(IngestError) as cm:
            read_records(path, self.schema)
        self.assertIn("missing columns ['Z']", str(cm.exception))


if __name__ == "__main__":
    unittest.main()
