#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"distribution and structural model files"

import json
import logging

import jsonschema
import numpy as np
from medfx import defaults
from medfx.distribution import Factor, FiniteDistribution, VariableSpec, ensure_valid, joint_from_factors
from medfx.effects import MediationTable
from medfx.errors import DistributionError, IngestError, ModelError
from medfx.ingest import schemas
from medfx.measures import MeasureRequest
from medfx.scm.base import ExogenousVariable, Mechanism, StructuralModel, observational_distribution

logger = logging.getLogger(__name__)


def _level(value):
    if isinstance(value, float) and value.is_integer():
        value = int(value)
    return str(value)


def read_json(path, schema, kind):
    """Parses the UTF-8 JSON file at path and validates it against schema"""
    try:
        with open(path, "r", encoding="utf-8") as fp:
            obj = json.load(fp)
    except json.JSONDecodeError as e:
        raise IngestError("{}:{}:{}: {}".format(path, e.lineno, e.colno, e.msg))
    except OSError as e:
        raise IngestError("{}: {}".format(path, e.strerror or e))

    validator = jsonschema.Draft7Validator(schema)
    errors = sorted(validator.iter_errors(obj), key=lambda e: [str(part) for part in e.path])
    if errors:
        error_message = "invalid {} file {}\n".format(kind, path)
        error_message += "\n".join(["{} {}".format(list(error.path), error.message) for error in errors])
        raise IngestError(error_message)
    return obj


def _variable(entry):
    levels = [_level(level) for level in entry["levels"]]
    return VariableSpec(entry["name"], levels, entry.get("values"))


def _variables(obj):
    variables = [_variable(entry) for entry in obj["variables"]]
    errors = []
    for spec in variables:
        errors.extend(spec.problems())
    names = [spec.name for spec in variables]
    if len(set(names)) != len(names):
        errors.append("duplicate variable names {}".format(names))
    if errors:
        raise DistributionError(errors)
    return variables


def _factor(entry, specs):
    target = specs.get(entry["target"])
    given = tuple(entry.get("given", []))
    for name in (entry["target"],) + given:
        if name not in specs:
            message = "factor p({}) names undeclared variable {}".format(entry["target"], name)
            raise DistributionError([message])
    given_specs = [specs[name] for name in given]
    label = Factor(target.name, given, None).label()
    table = np.full(tuple(spec.size for spec in given_specs) + (target.size,), np.nan)

    for row in entry["table"]:
        assignment = {name: _level(level) for name, level in row.get("given", {}).items()}
        if set(assignment) != set(given):
            message = "{} row {} must assign exactly {}".format(label, assignment, list(given))
            raise DistributionError([message])
        index = tuple(spec.index(assignment[spec.name]) for spec in given_specs)
        probabilities = {_level(level): p for level, p in row["p"].items()}
        for level in probabilities:
            target.index(level)
        for position, level in enumerate(target.levels):
            if level not in probabilities:
                message = "{} row {} has no probability for {}".format(label, assignment, level)
                raise DistributionError([message])
            table[index + (position,)] = probabilities[level]

    missing = np.argwhere(np.isnan(table[..., 0]))
    if len(missing):
        rows = [{spec.name: spec.levels[i] for spec, i in zip(given_specs, index)} for index in missing]
        raise DistributionError(["{} missing rows {}".format(label, rows)])
    return Factor(target.name, given, table)


def load_distribution(path):
    """
    Loads a joint table or a factored file, multiplying ancestrally ordered factors
    into the joint, and validates the result.
    """
    obj = read_json(path, schemas.DISTRIBUTION, "distribution")
    variables = _variables(obj)
    if "joint" in obj:
        cells = [
            ({name: _level(level) for name, level in row["assign"].items()}, row["p"]) for row in obj["joint"]
        ]
        dist = FiniteDistribution.from_cells(variables, cells)
    else:
        specs = {spec.name: spec for spec in variables}
        dist = joint_from_factors(variables, [_factor(entry, specs) for entry in obj["factors"]])
    logger.debug("load_distribution: %s over %s", path, dist.names)
    return ensure_valid(dist)


def load_conditionals(path, request=None):
    """
    Loads p(Z|X) and p(Y|X,Z) from a factored file for bounds mode; p(X) may be absent
    and is ignored when present.
    """
    request = request or MeasureRequest()
    obj = read_json(path, schemas.DISTRIBUTION, "distribution")
    if "factors" not in obj:
        raise IngestError("{}: bounds mode needs a factored file with p(Z|X) and p(Y|X,Z)".format(path))
    variables = _variables(obj)
    specs = {spec.name: spec for spec in variables}
    factors = {entry["target"]: _factor(entry, specs) for entry in obj["factors"]}
    exposure = specs.get(request.exposure)
    mediator = specs.get(request.mediator)
    outcome = specs.get(request.outcome)
    if exposure is None or mediator is None or outcome is None:
        raise IngestError(
            "{}: needs variables {}, {} and {}".format(
                path, request.exposure, request.mediator, request.outcome
            )
        )
    request.check_exposure_spec(exposure)

    mediator_factor = factors.get(request.mediator)
    if mediator_factor is None or mediator_factor.given != (request.exposure,):
        raise IngestError("{}: p({}|{}) required".format(path, request.mediator, request.exposure))
    outcome_factor = factors.get(request.outcome)
    if outcome_factor is None or set(outcome_factor.given) != {request.exposure, request.mediator}:
        raise IngestError(
            "{}: p({}|{},{}) required".format(path, request.outcome, request.exposure, request.mediator)
        )

    errors = []
    for factor in (mediator_factor, outcome_factor):
        if np.any(factor.table < 0) or np.any(np.abs(factor.table.sum(axis=-1) - 1.0) > defaults.TOLERANCE):
            errors.append("{} rows are not distributions".format(factor.label()))
    if errors:
        raise DistributionError(errors)

    values = outcome.numeric_values()
    outcome_table = outcome_factor.table
    if outcome_factor.given != (request.exposure, request.mediator):
        outcome_table = np.transpose(outcome_table, (1, 0, 2))
    pz = {}
    means = {}
    for i, x in enumerate(exposure.levels):
        pz[x] = {z: float(p) for z, p in zip(mediator.levels, mediator_factor.table[i])}
        for j, z in enumerate(mediator.levels):
            means[(x, z)] = float(np.dot(values, outcome_table[i, j]))
    return MediationTable.from_conditionals(request, mediator, pz, means)


def dump_distribution(dist, path):
    """Writes dist as a joint table file; floats keep their binary64 repr"""
    obj = {
        "variables": [spec.as_dict() for spec in dist.variables],
        "joint": [{"assign": assignment, "p": p} for assignment, p in dist.cells()],
    }
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(obj, fp, indent=2)
        fp.write("\n")


def load_scm(path):
    """
    Loads exogenous tables and mechanism tables. Endogenous levels default to the sorted
    values the mechanism produces.
    """
    obj = read_json(path, schemas.SCM, "scm")
    exogenous = [ExogenousVariable(_variable(entry), entry["probs"]) for entry in obj["exogenous"]]
    endogenous = []
    for entry in obj["endogenous"]:
        parents = tuple(entry["parents"])
        table = {}
        for row in entry["mechanism"]:
            assignment = {name: _level(level) for name, level in row.get("parents", {}).items()}
            if set(assignment) != set(parents):
                raise ModelError(
                    "mechanism of {} row {} must assign exactly {}".format(
                        entry["name"], assignment, list(parents)
                    )
                )
            key = tuple(assignment[parent] for parent in parents)
            if key in table:
                raise ModelError(
                    "mechanism of {} repeats parent combination {}".format(entry["name"], assignment)
                )
            table[key] = _level(row["value"])
        if "levels" in entry:
            levels = [_level(level) for level in entry["levels"]]
        else:
            levels = sorted(set(table.values()))
        spec = VariableSpec(entry["name"], levels, entry.get("values"))
        endogenous.append(Mechanism(spec, parents, table))
    scm = StructuralModel(exogenous, endogenous)
    logger.debug("load_scm: %r", scm)
    return scm


def dump_scm(scm, path):
    with open(path, "w", encoding="utf-8") as fp:
        json.dump(scm.as_dict(), fp, indent=2)
        fp.write("\n")


def load_record_schema(path):
    """variables of a records CSV, in the distribution file's variables format"""
    return _variables(read_json(path, schemas.RECORD_SCHEMA, "schema"))


def file_kind(path):
    """'scm', 'distribution' or 'schema', judged from the top-level keys of the file"""
    obj = read_json(path, {"type": "object"}, "input")
    if "exogenous" in obj or "endogenous" in obj:
        return "scm"
    if "joint" in obj or "factors" in obj:
        return "distribution"
    return "schema"


def load_observational(path):
    """the joint of a distribution file, or the observational joint of a structural model file"""
    if file_kind(path) == "scm":
        return observational_distribution(load_scm(path))
    return load_distribution(path)
