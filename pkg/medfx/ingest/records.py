#!/usr/bin/env python3

# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"observation records and joint estimation"

import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from medfx.distribution import FiniteDistribution
from medfx.errors import EmptyBatchError, IngestError

logger = logging.getLogger(__name__)

COUNT_COLUMN = "count"


@dataclass(frozen=True)
class RecordBatch(object):
    """Rows of full assignments under schema, with optional per-row multiplicities"""

    schema: tuple
    rows: tuple
    counts: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "schema", tuple(self.schema))
        object.__setattr__(self, "rows", tuple(tuple(str(level) for level in row) for row in self.rows))
        if self.counts is not None:
            object.__setattr__(self, "counts", tuple(int(count) for count in self.counts))
            if len(self.counts) != len(self.rows):
                raise IngestError("{} counts for {} rows".format(len(self.counts), len(self.rows)))
            if any(count < 0 for count in self.counts):
                raise IngestError("negative row count")
        for number, row in enumerate(self.rows, start=1):
            if len(row) != len(self.schema):
                raise IngestError(
                    "row {} has {} values for {} variables".format(number, len(row), len(self.schema))
                )
            for spec, level in zip(self.schema, row):
                if level not in spec.levels:
                    raise IngestError(
                        "row {}: level '{}' not in the domain of {}: {}".format(
                            number, level, spec.name, list(spec.levels)
                        )
                    )

    @property
    def names(self):
        return tuple(spec.name for spec in self.schema)


def read_records(csv_path, schema):
    """
    Reads a CSV whose header names the schema variables, one observation per row,
    with an optional count column of multiplicities.
    """
    try:
        df = pd.read_csv(csv_path, dtype=str, keep_default_na=False)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise IngestError("{}: {}".format(csv_path, e))
    names = [spec.name for spec in schema]
    missing = [name for name in names if name not in df.columns]
    if missing:
        raise IngestError("{}: missing columns {}".format(csv_path, missing))
    extra = [column for column in df.columns if column not in names and column != COUNT_COLUMN]
    if extra:
        raise IngestError("{}: unknown columns {}".format(csv_path, extra))

    counts = None
    if COUNT_COLUMN in df.columns:
        try:
            counts = df[COUNT_COLUMN].astype(int).tolist()
        except ValueError as e:
            raise IngestError("{}: count column: {}".format(csv_path, e))
    rows = list(df[names].itertuples(index=False, name=None))
    logger.debug("read_records: %d rows from %s", len(rows), csv_path)
    return RecordBatch(schema, rows, counts)


def estimate_joint(batch, alpha=0.0):
    """cell probability (count + alpha) / (N + alpha * cells)"""
    if alpha < 0:
        raise IngestError("smoothing alpha must be >= 0, got {}".format(alpha))
    if not batch.rows:
        raise EmptyBatchError("cannot estimate a joint from zero rows")

    shape = tuple(spec.size for spec in batch.schema)
    counts = np.zeros(shape)
    indices = tuple(
        np.array([spec.index(row[axis]) for row in batch.rows], dtype=int)
        for axis, spec in enumerate(batch.schema)
    )
    weights = np.ones(len(batch.rows)) if batch.counts is None else np.asarray(batch.counts, dtype=float)
    np.add.at(counts, indices, weights)

    total = counts.sum()
    if total + alpha * counts.size <= 0:
        raise EmptyBatchError("every row has count 0")
    logger.debug("estimate_joint: N=%d alpha=%r cells=%d", total, alpha, counts.size)
    return FiniteDistribution(batch.schema, (counts + alpha) / (total + alpha * counts.size))
