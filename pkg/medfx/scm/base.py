#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"finite structural causal models evaluated by exhaustive enumeration"

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
from medfx import defaults
from medfx.distribution import FiniteDistribution, VariableSpec
from medfx.errors import (
    CounterfactualTermError,
    InterventionError,
    ModelError,
    StateBudgetExceeded,
    UnknownVariableError,
    ZeroProbabilityCondition,
)
from medfx.ingest.records import RecordBatch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExogenousVariable(object):
    """independent background variable with its own finite distribution"""

    spec: VariableSpec
    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))

    @property
    def name(self):
        return self.spec.name

    @property
    def distribution(self):
        return FiniteDistribution([self.spec], self.probs)

    def as_dict(self):
        return {"name": self.name, "levels": list(self.spec.levels), "probs": list(self.probs)}


class Mechanism(object):
    """Deterministic map from the levels of parents to a level of the child"""

    def __init__(self, spec, parents, table):
        self.spec = spec
        self.parents = tuple(parents)
        self.table = {tuple(str(level) for level in key): str(value) for key, value in dict(table).items()}

    @classmethod
    def constant(cls, spec, level):
        return cls(spec, (), {(): level})

    @property
    def name(self):
        return self.spec.name

    def as_dict(self):
        entry = self.spec.as_dict()
        entry["parents"] = list(self.parents)
        entry["mechanism"] = [
            {"parents": dict(zip(self.parents, key)), "value": value}
            for key, value in sorted(self.table.items())
        ]
        return entry


class StructuralModel(object):
    """
    Mutually independent exogenous variables plus endogenous mechanisms in topological order.
    Shared confounding is a shared exogenous parent. Units are the joint exogenous states.
    """

    def __init__(self, exogenous, endogenous, state_budget=defaults.STATE_BUDGET):
        self.exogenous = tuple(exogenous)
        self.endogenous = tuple(endogenous)
        self.state_budget = state_budget
        self._specs = {}
        self._check()

    def _check(self):
        for variable in self.exogenous + self.endogenous:
            if variable.name in self._specs:
                raise ModelError("variable {} declared twice".format(variable.name))
            problems = variable.spec.problems()
            if problems:
                raise ModelError("; ".join(problems))
            self._specs[variable.name] = variable.spec

        for variable in self.exogenous:
            probs = np.asarray(variable.probs)
            if len(probs) != variable.spec.size:
                raise ModelError(
                    "exogenous {} has {} probabilities for {} levels".format(
                        variable.name, len(probs), variable.spec.size
                    )
                )
            if np.any(probs < 0) or abs(probs.sum() - 1.0) > defaults.TOLERANCE:
                raise ModelError(
                    "exogenous {} probabilities {} are not a distribution".format(variable.name, list(probs))
                )

        declared = {variable.name for variable in self.exogenous}
        for mechanism in self.endogenous:
            for parent in mechanism.parents:
                if parent not in self._specs:
                    raise ModelError("unknown parent {} of {}".format(parent, mechanism.name))
                if parent not in declared:
                    self._raise_order(mechanism, parent)
            self._check_total(mechanism)
            declared.add(mechanism.name)

    def _raise_order(self, mechanism, parent):
        try:
            cycle = nx.find_cycle(self._full_graph())
        except nx.NetworkXNoCycle:
            raise ModelError(
                "endogenous variables not topologically ordered: {} declared before its parent {}".format(
                    mechanism.name, parent
                )
            )
        path = [edge[0] for edge in cycle] + [cycle[0][0]]
        raise ModelError("cycle detected: {}".format(" -> ".join(path)))

    def _full_graph(self):
        graph = nx.DiGraph()
        graph.add_nodes_from(self._specs)
        for mechanism in self.endogenous:
            graph.add_edges_from((parent, mechanism.name) for parent in mechanism.parents)
        return graph

    def _check_total(self, mechanism):
        parent_specs = [self._specs[parent] for parent in mechanism.parents]
        for key, value in mechanism.table.items():
            if len(key) != len(parent_specs):
                raise ModelError(
                    "mechanism of {} has entry {} for parents {}".format(
                        mechanism.name, key, list(mechanism.parents)
                    )
                )
            for spec, level in zip(parent_specs, key):
                if level not in spec.levels:
                    raise ModelError(
                        "mechanism of {} uses unknown level {} of parent {}".format(
                            mechanism.name, level, spec.name
                        )
                    )
            if value not in mechanism.spec.levels:
                raise ModelError("mechanism of {} returns unknown level {}".format(mechanism.name, value))
        for key in itertools.product(*(spec.levels for spec in parent_specs)):
            if key not in mechanism.table:
                raise ModelError(
                    "mechanism of {} is missing parent combination {}".format(
                        mechanism.name, dict(zip(mechanism.parents, key))
                    )
                )

    @property
    def graph(self):
        """parent relation as a networkx DiGraph, nodes tagged exogenous or endogenous"""
        graph = self._full_graph()
        for variable in self.exogenous:
            graph.nodes[variable.name]["kind"] = "exogenous"
        for mechanism in self.endogenous:
            graph.nodes[mechanism.name]["kind"] = "endogenous"
        return graph

    @property
    def exogenous_names(self):
        return tuple(variable.name for variable in self.exogenous)

    @property
    def endogenous_names(self):
        return tuple(mechanism.name for mechanism in self.endogenous)

    def variable(self, name):
        try:
            return self._specs[name]
        except KeyError:
            raise UnknownVariableError("unknown variable '{}' in model".format(name))

    def mechanism(self, name):
        for mechanism in self.endogenous:
            if mechanism.name == name:
                return mechanism
        raise UnknownVariableError("{} is not an endogenous variable".format(name))

    @property
    def state_count(self):
        return int(np.prod([variable.spec.size for variable in self.exogenous], dtype=object))

    @cached_property
    def units(self):
        """level indices of every exogenous variable per unit, and the unit probabilities"""
        count = self.state_count
        if count > self.state_budget:
            raise StateBudgetExceeded(
                "{} exogenous states exceed the enumeration budget of {}".format(count, self.state_budget)
            )
        sizes = [variable.spec.size for variable in self.exogenous]
        indices = np.indices(sizes).reshape(len(sizes), count) if sizes else np.zeros((0, 1), dtype=int)
        weights = np.ones(count)
        for variable, index in zip(self.exogenous, indices):
            weights = weights * np.asarray(variable.probs)[index]
        logger.debug("StructuralModel: enumerating %d units", count)
        return {variable.name: index for variable, index in zip(self.exogenous, indices)}, weights

    @cached_property
    def _lookup(self):
        """mechanism tables compiled to integer arrays indexed by parent level indices"""
        compiled = {}
        for mechanism in self.endogenous:
            parent_specs = [self._specs[parent] for parent in mechanism.parents]
            array = np.zeros([spec.size for spec in parent_specs], dtype=int)
            for key, value in mechanism.table.items():
                index = tuple(spec.index(level) for spec, level in zip(parent_specs, key))
                array[index] = mechanism.spec.index(value)
            compiled[mechanism.name] = array
        return compiled

    def solve(self, do=None):
        """
        Values of every variable per unit as level indices.
        do maps endogenous names to a level, or to per-unit level indices held fixed.
        """
        exogenous, weights = self.units
        values = dict(exogenous)
        count = len(weights)
        do = do or {}
        for mechanism in self.endogenous:
            if mechanism.name in do:
                fixed = do[mechanism.name]
                if isinstance(fixed, np.ndarray):
                    values[mechanism.name] = fixed
                else:
                    values[mechanism.name] = np.full(count, mechanism.spec.index(fixed))
                continue
            table = self._lookup[mechanism.name]
            if mechanism.parents:
                values[mechanism.name] = table[tuple(values[parent] for parent in mechanism.parents)]
            else:
                values[mechanism.name] = np.full(count, int(table))
        return values

    def as_dict(self):
        return {
            "exogenous": [variable.as_dict() for variable in self.exogenous],
            "endogenous": [mechanism.as_dict() for mechanism in self.endogenous],
        }

    def __repr__(self):
        return "StructuralModel(exogenous={}, endogenous={})".format(
            list(self.exogenous_names), list(self.endogenous_names)
        )


def observational_distribution(scm, include=()):
    """
    Exact joint over the endogenous variables, plus any exogenous variables named in include,
    summing unit probabilities over every exogenous configuration.
    """
    include = tuple(include)
    for name in include:
        if name not in scm.exogenous_names:
            raise UnknownVariableError("{} is not an exogenous variable".format(name))
    names = scm.endogenous_names + include
    specs = [scm.variable(name) for name in names]
    shape = tuple(spec.size for spec in specs)
    values = scm.solve()
    _, weights = scm.units
    cells = np.ravel_multi_index([values[name] for name in names], shape)
    table = np.bincount(cells, weights=weights, minlength=int(np.prod(shape))).reshape(shape)
    return FiniteDistribution(specs, table)


def intervene(scm, do):
    """Replaces the mechanisms of the intervened variables with constants"""
    do = {name: str(level) for name, level in dict(do or {}).items()}
    for name, level in do.items():
        if name in scm.exogenous_names:
            raise InterventionError("cannot intervene on exogenous variable {}".format(name))
        scm.variable(name).index(level)
    if not do:
        return scm
    endogenous = [
        Mechanism.constant(mechanism.spec, do[mechanism.name]) if mechanism.name in do else mechanism
        for mechanism in scm.endogenous
    ]
    return StructuralModel(scm.exogenous, endogenous, scm.state_budget)


def _pairs(assignment):
    if assignment is None:
        return ()
    if isinstance(assignment, dict):
        assignment = assignment.items()
    return tuple((str(name), str(level)) for name, level in assignment)


@dataclass(frozen=True)
class CounterfactualTerm(object):
    """
    A nested potential outcome such as Y_{x̄,Z_x}: the outcome under the base world
    intervention, with each substituted variable held at the value it takes under its
    own intervention (an empty intervention is the natural value). Optional evidence
    restricts the mean to units matching it in the natural world.
    """

    outcome: str
    world: tuple = ()
    substitutions: tuple = ()
    given: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "world", _pairs(self.world))
        substitutions = self.substitutions
        if isinstance(substitutions, dict):
            substitutions = substitutions.items()
        object.__setattr__(
            self, "substitutions", tuple((str(name), _pairs(value)) for name, value in substitutions)
        )
        object.__setattr__(self, "given", _pairs(self.given))

    def check(self, scm):
        endogenous = scm.endogenous_names
        if self.outcome not in endogenous:
            raise CounterfactualTermError("outcome {} is not an endogenous variable".format(self.outcome))
        world = dict(self.world)
        if self.outcome in world:
            raise CounterfactualTermError("outcome {} cannot be intervened on".format(self.outcome))
        assignments = [self.world, self.given] + [intervention for _, intervention in self.substitutions]
        for assignment in assignments:
            for name, level in assignment:
                if name not in endogenous:
                    raise CounterfactualTermError("{} is not an endogenous variable".format(name))
                scm.variable(name).index(level)
        seen = set()
        for name, _ in self.substitutions:
            if name == self.outcome:
                raise CounterfactualTermError("outcome {} cannot be substituted".format(name))
            if name in world:
                raise CounterfactualTermError("{} is both intervened on and substituted".format(name))
            if name in seen:
                raise CounterfactualTermError("{} substituted twice".format(name))
            if name not in endogenous:
                raise CounterfactualTermError("{} is not an endogenous variable".format(name))
            seen.add(name)

    def __str__(self):
        parts = ["{}={}".format(name, level) for name, level in self.world]
        for name, intervention in self.substitutions:
            parts.append("{}_{{{}}}".format(name, ",".join("{}={}".format(n, l) for n, l in intervention)))
        text = "{}_{{{}}}".format(self.outcome, ",".join(parts)) if parts else self.outcome
        if self.given:
            text += " | " + ",".join("{}={}".format(name, level) for name, level in self.given)
        return text


def counterfactual_mean(scm, term):
    """Probability-weighted mean of the term's outcome over every unit"""
    term.check(scm)
    spec = scm.variable(term.outcome)
    numeric = spec.numeric_values()
    _, weights = scm.units

    do = dict(term.world)
    for name, intervention in term.substitutions:
        do[name] = scm.solve(dict(intervention))[name]
    outcome = numeric[scm.solve(do)[term.outcome]]

    if term.given:
        natural = scm.solve()
        mask = np.ones(len(weights), dtype=bool)
        for name, level in term.given:
            mask &= natural[name] == scm.variable(name).index(level)
        mass = float(weights[mask].sum())
        if not mass > 0.0:
            raise ZeroProbabilityCondition("evidence {} has zero mass".format(dict(term.given)))
        return float(np.dot(weights[mask], outcome[mask]) / mass)
    return float(np.dot(weights, outcome))


def sample_records(scm, n, seed):
    """Draws n natural-world observation rows of the endogenous variables"""
    _, weights = scm.units
    rng = np.random.default_rng(seed)
    units = rng.choice(len(weights), size=n, p=weights / weights.sum())
    natural = scm.solve()
    specs = [scm.variable(name) for name in scm.endogenous_names]
    columns = [np.asarray(spec.levels)[natural[spec.name][units]] for spec in specs]
    return RecordBatch(specs, list(zip(*[column.tolist() for column in columns])))
