#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"""
counterfactual term grammar

    Y                      natural outcome
    Y_{X=0}                outcome under do(X=0)
    Y_{X=0,Z_{X=1}}        Z held at its value under do(X=1)
    Y_{X_{},Z_{X=0}}       X at its natural value, Z under do(X=0)
    Y_{X=1} | X=0          evidence evaluated in the natural world
"""

import logging

from medfx.errors import CounterfactualTermError
from medfx.scm.base import CounterfactualTerm
from pyparsing import Group, Optional, ParseException, Regex, StringEnd, Suppress, delimitedList

logger = logging.getLogger(__name__)

LBRACE = Suppress("_{")
RBRACE = Suppress("}")
EQUALS = Suppress("=")
BAR = Suppress("|")

# names may contain underscores as long as one does not open a subscript
NAME = Regex(r"[A-Za-z][A-Za-z0-9]*(?:_(?!\{)[A-Za-z0-9]+)*")
LEVEL = Regex(r"[A-Za-z0-9_.\-]+")

ASSIGNMENT = Group(NAME + EQUALS + LEVEL)
ASSIGNMENTS = Group(Optional(delimitedList(ASSIGNMENT)))
SUBSTITUTION = Group(NAME + LBRACE + ASSIGNMENTS + RBRACE)
WORLD_ENTRY = SUBSTITUTION | ASSIGNMENT
WORLD = Group(Optional(LBRACE + Optional(delimitedList(WORLD_ENTRY)) + RBRACE))
TERM = NAME("outcome") + WORLD("world") + Optional(BAR + ASSIGNMENTS("given")) + StringEnd()


def parse_term(text):
    """Parses text into a CounterfactualTerm; raises CounterfactualTermError on syntax errors"""
    try:
        parsed = TERM.parseString(text.strip())
    except ParseException as e:
        raise CounterfactualTermError("cannot parse term '{}': {} (column {})".format(text, e.msg, e.col))

    world = []
    substitutions = []
    for entry in parsed["world"]:
        name, value = entry[0], entry[1]
        if isinstance(value, str):
            world.append((name, value))
        else:
            substitutions.append((name, [tuple(pair) for pair in value]))
    given = [tuple(pair) for pair in parsed["given"]] if "given" in parsed else []

    names = [name for name, _ in world]
    if len(set(names)) != len(names):
        raise CounterfactualTermError("term '{}' intervenes on a variable twice".format(text))
    term = CounterfactualTerm(parsed["outcome"], world, substitutions, given)
    logger.debug("parse_term: %s -> %r", text, term)
    return term
