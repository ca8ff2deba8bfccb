#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"finite joint distributions module"

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from medfx import defaults
from medfx.errors import DistributionError, NonNumericTarget, UnknownVariableError, ZeroProbabilityCondition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class VariableSpec(object):
    """
    A named finite variable. Levels keep their declaration order, the first level
    is the reference level of a binary variable.
    """

    name: str
    levels: tuple
    values: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(str(level) for level in self.levels))
        if self.values is not None:
            object.__setattr__(self, "values", tuple(float(value) for value in self.values))

    @property
    def size(self):
        return len(self.levels)

    @property
    def is_binary(self):
        return len(self.levels) == 2

    def index(self, level):
        """returns the position of level in the domain"""
        try:
            return self.levels.index(str(level))
        except ValueError:
            raise UnknownVariableError(
                "level '{}' is not in the domain of {}: {}".format(level, self.name, list(self.levels))
            )

    def numeric_values(self):
        """numeric value per level; binary variables default to 0/1 by domain order"""
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.is_binary:
            return np.array([0.0, 1.0])
        raise NonNumericTarget("{} has {} levels and no numeric values".format(self.name, self.size))

    def value_of(self, level):
        return float(self.numeric_values()[self.index(level)])

    def with_values(self, values):
        return VariableSpec(self.name, self.levels, values)

    def problems(self):
        errors = []
        if len(self.levels) < 2:
            errors.append("variable {} has fewer than 2 levels".format(self.name))
        if len(set(self.levels)) != len(self.levels):
            errors.append("variable {} has duplicate level labels {}".format(self.name, list(self.levels)))
        if self.values is not None and len(self.values) != len(self.levels):
            errors.append(
                "variable {} has {} numeric values for {} levels".format(
                    self.name, len(self.values), len(self.levels)
                )
            )
        return errors

    def as_dict(self):
        spec = {"name": self.name, "levels": list(self.levels)}
        if self.values is not None:
            spec["values"] = list(self.values)
        return spec


class FiniteDistribution(object):
    """
    Exact joint probability table over named finite variables.
    The table is a read-only numpy array with one axis per variable, in declaration order.
    """

    def __init__(self, variables, table):
        self._variables = tuple(variables)
        table = np.array(table, dtype=float)
        table.setflags(write=False)
        self._table = table
        self._axes = {spec.name: axis for axis, spec in enumerate(self._variables)}

    @classmethod
    def from_cells(cls, variables, cells):
        """
        Builds a distribution from (assignment, probability) pairs or an assignment-keyed mapping.
        Every cell of the Cartesian product must be given exactly once.
        """
        variables = tuple(variables)
        shape = tuple(spec.size for spec in variables)
        table = np.full(shape, np.nan)
        errors = []
        if isinstance(cells, dict):
            cells = cells.items()
        for assignment, probability in cells:
            assignment = dict(assignment)
            names = {spec.name for spec in variables}
            if set(assignment) != names:
                errors.append("cell {} does not assign exactly {}".format(assignment, sorted(names)))
                continue
            try:
                index = tuple(spec.index(assignment[spec.name]) for spec in variables)
            except UnknownVariableError as e:
                errors.append(str(e))
                continue
            if not np.isnan(table[index]):
                errors.append("duplicate cell {}".format(assignment))
                continue
            table[index] = float(probability)

        for index in zip(*np.nonzero(np.isnan(table))):
            errors.append("missing cell {}".format(_assignment_at(variables, index)))
        if errors:
            raise DistributionError(errors)
        return cls(variables, table)

    @property
    def variables(self):
        return self._variables

    @property
    def table(self):
        return self._table

    @property
    def names(self):
        return tuple(spec.name for spec in self._variables)

    def __contains__(self, name):
        return name in self._axes

    def axis(self, name):
        try:
            return self._axes[name]
        except KeyError:
            raise UnknownVariableError(
                "unknown variable '{}', distribution has {}".format(name, list(self.names))
            )

    def variable(self, name):
        return self._variables[self.axis(name)]

    def cells(self):
        """yields (assignment, probability) for every cell in table order"""
        for index in itertools.product(*(range(spec.size) for spec in self._variables)):
            yield _assignment_at(self._variables, index), float(self._table[index])

    def recode(self, name, values):
        """
        Returns the same table with new numeric values for variable name.
        values is a sequence in level order or a level-keyed mapping.
        """
        spec = self.variable(name)
        if isinstance(values, dict):
            values = [values[level] for level in spec.levels]
        variables = list(self._variables)
        variables[self.axis(name)] = spec.with_values(values)
        return FiniteDistribution(variables, self._table)

    def relabel(self, name, mapping):
        """Returns the same table with level labels of variable name renamed through mapping"""
        spec = self.variable(name)
        levels = [mapping.get(level, level) for level in spec.levels]
        variables = list(self._variables)
        variables[self.axis(name)] = VariableSpec(spec.name, levels, spec.values)
        return FiniteDistribution(variables, self._table)

    def reorder(self, name, levels):
        """Returns the distribution with the levels of variable name declared in a new order"""
        spec = self.variable(name)
        positions = [spec.index(level) for level in levels]
        if sorted(positions) != list(range(spec.size)):
            raise UnknownVariableError(
                "{} is not a permutation of {}".format(list(levels), list(spec.levels))
            )
        values = None if spec.values is None else [spec.values[i] for i in positions]
        variables = list(self._variables)
        variables[self.axis(name)] = VariableSpec(spec.name, [spec.levels[i] for i in positions], values)
        table = np.take(self._table, positions, axis=self.axis(name))
        return FiniteDistribution(variables, table)

    def __repr__(self):
        return "FiniteDistribution({})".format(", ".join(self.names))


def _assignment_at(variables, index):
    return {spec.name: spec.levels[i] for spec, i in zip(variables, index)}


def _resolve(dist, assignment):
    """maps an assignment to {axis: level index}, checking names and levels"""
    resolved = {}
    for name, level in dict(assignment or {}).items():
        spec = dist.variable(name)
        resolved[dist.axis(name)] = spec.index(level)
    return resolved


def validate(dist):
    """Returns the list of problems of dist, empty when dist is valid"""
    errors = []
    names = [spec.name for spec in dist.variables]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        errors.append("duplicate variable names {}".format(duplicates))
    for spec in dist.variables:
        errors.extend(spec.problems())

    shape = tuple(spec.size for spec in dist.variables)
    if dist.table.shape != shape:
        errors.append("table shape {} does not match domains {}".format(dist.table.shape, shape))
        return errors

    table = dist.table
    for index in zip(*np.nonzero(np.isnan(table))):
        errors.append("missing probability at {}".format(_assignment_at(dist.variables, index)))
    for index in zip(*np.nonzero(table < 0)):
        errors.append(
            "negative probability {:g} at {}".format(table[index], _assignment_at(dist.variables, index))
        )

    mass = float(np.nansum(table))
    if abs(mass - 1.0) > defaults.TOLERANCE:
        errors.append("mass {:.12g} ≠ 1".format(mass))
    return errors


def ensure_valid(dist):
    """Raises DistributionError listing every violation, returns dist otherwise"""
    errors = validate(dist)
    if errors:
        raise DistributionError(errors)
    return dist


def marginal(dist, keep):
    """Sums out every variable not in keep, variables keep their declaration order"""
    keep = set(keep)
    for name in keep:
        dist.axis(name)
    kept = [spec for spec in dist.variables if spec.name in keep]
    summed = tuple(axis for axis, spec in enumerate(dist.variables) if spec.name not in keep)
    return FiniteDistribution(kept, dist.table.sum(axis=summed) if summed else dist.table)


def condition(dist, given):
    """
    Renormalised distribution of the remaining variables given the assignment.
    Raises ZeroProbabilityCondition when the conditioning event has zero mass.
    """
    resolved = _resolve(dist, given)
    if not resolved:
        return dist
    index = tuple(resolved.get(axis, slice(None)) for axis in range(len(dist.variables)))
    sub = dist.table[index]
    mass = float(np.sum(sub))
    if not mass > 0.0:
        raise ZeroProbabilityCondition("conditioning event {} has zero mass".format(_format_event(given)))
    remaining = [spec for axis, spec in enumerate(dist.variables) if axis not in resolved]
    return FiniteDistribution(remaining, sub / mass)


def probability(dist, assignment):
    """Marginal mass of a (partial) assignment"""
    resolved = _resolve(dist, assignment)
    index = tuple(resolved.get(axis, slice(None)) for axis in range(len(dist.variables)))
    return float(np.sum(dist.table[index]))


def expectation(dist, target, given=None):
    """E[target | given]; target needs numeric values"""
    spec = dist.variable(target)
    values = spec.numeric_values()
    given = dict(given or {})
    conditioned = condition(dist, given)
    if target in given:
        return spec.value_of(given[target])
    return float(np.dot(values, marginal(conditioned, [target]).table))


def total_variation(first, second):
    """Total variation distance between two distributions over the same variables"""
    if sorted(first.names) != sorted(second.names):
        raise UnknownVariableError("cannot compare {} with {}".format(list(first.names), list(second.names)))
    aligned = second
    for spec in first.variables:
        if aligned.variable(spec.name).levels != spec.levels:
            aligned = aligned.reorder(spec.name, spec.levels)
    table = np.transpose(aligned.table, [aligned.axis(name) for name in first.names])
    return 0.5 * float(np.abs(first.table - table).sum())


@dataclass(eq=False)
class Factor(object):
    """Conditional table p(target | given); table axes are given..., target"""

    target: str
    given: tuple
    table: np.ndarray = field(repr=False)

    def label(self):
        if self.given:
            return "p({}|{})".format(self.target, ",".join(self.given))
        return "p({})".format(self.target)


def joint_from_factors(variables, factors):
    """
    Multiplies ancestrally ordered conditional tables into a joint distribution.
    Each factor may only condition on targets of earlier factors.
    """
    variables = tuple(variables)
    dist = FiniteDistribution(variables, np.ones(tuple(spec.size for spec in variables)))
    by_target = {}
    defined = set()
    errors = []
    for factor in factors:
        if factor.target in by_target:
            errors.append("{} given twice".format(factor.label()))
            continue
        for name in factor.given:
            if name not in defined:
                errors.append("{} conditions on {} before it is defined".format(factor.label(), name))
        expected = tuple(dist.variable(name).size for name in factor.given + (factor.target,))
        if factor.table.shape != expected:
            errors.append("{} has shape {}, expected {}".format(factor.label(), factor.table.shape, expected))
            continue
        if np.any(factor.table < 0):
            errors.append("{} has negative probabilities".format(factor.label()))
        sums = factor.table.sum(axis=-1)
        if np.any(np.abs(sums - 1.0) > defaults.TOLERANCE):
            errors.append("{} rows do not sum to 1: {}".format(factor.label(), sums.ravel().tolist()))
        by_target[factor.target] = factor
        defined.add(factor.target)

    for spec in variables:
        if spec.name not in by_target:
            errors.append("p({}) required for joint; use bounds mode".format(spec.name))
    if errors:
        raise DistributionError(errors)

    joint = np.ones(tuple(spec.size for spec in variables))
    for factor in factors:
        axes = [dist.axis(name) for name in factor.given + (factor.target,)]
        order = np.argsort(axes)
        shape = [1] * len(variables)
        for axis in axes:
            shape[axis] = variables[axis].size
        joint = joint * np.transpose(factor.table, order).reshape(shape)
        logger.debug("joint_from_factors: multiplied %s", factor.label())
    return FiniteDistribution(variables, joint)


def _format_event(given):
    return "{" + ", ".join("{}={}".format(name, level) for name, level in dict(given).items()) + "}"
