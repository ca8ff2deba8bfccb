#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"run reports"

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from medfx import defaults
from medfx.utils import dictionary_hash, file_hash, render_jinja2_file
from medfx.version import PROJECT_NAME, VERSION

logger = logging.getLogger(__name__)


def versions():
    return {PROJECT_NAME: VERSION, "numpy": np.__version__}


def inputs_digest(paths, flags):
    """sha256 over the content hashes of the input files and the flags of a run"""
    return dictionary_hash({"files": [file_hash(path) for path in paths], "flags": flags})


@dataclass
class RunReport(object):
    """
    What a command computed. results holds the as_dict() forms of EffectReport,
    AffineEffect and BoundResult plus the command specific kinds (factored, interval,
    oracle, estimate, validate, suite).
    """

    command: str
    argv: list
    inputs_digest: str
    results: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    versions: dict = field(default_factory=versions)

    def add(self, result):
        self.results.append(result if isinstance(result, dict) else result.as_dict())

    def warn(self, message):
        if message not in self.warnings:
            self.warnings.append(message)

    @property
    def bounds(self):
        return [result for result in self.results if result["kind"] == "bound"]

    @property
    def indeterminate_only(self):
        """True when the run produced bounds and none of them is determinate"""
        bounds = self.bounds
        return bool(bounds) and all(bound["relation"] == "indeterminate" for bound in bounds)

    @property
    def failed(self):
        return any(result.get("failures") for result in self.results if result["kind"] == "suite")

    def as_dict(self):
        return {
            "command": self.command,
            "argv": list(self.argv),
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "warnings": list(self.warnings),
            "versions": dict(self.versions),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), sort_keys=True, indent=2) + "\n"

    def to_text(self):
        return render_jinja2_file(defaults.REPORT_TEMPLATE, self.as_dict())

    def render(self, as_json=False):
        return self.to_json() if as_json else self.to_text()
