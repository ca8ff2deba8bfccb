# SPDX-FileCopyrightText: 2024 The medfx Authors
#
# SPDX-License-Identifier: Apache-2.0

"medfx error classes"


class MedfxError(Exception):
    """generic medfx error"""

    pass


class DistributionError(MedfxError):
    """distribution failed validation"""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("invalid distribution: " + "; ".join(self.errors))


class UnknownVariableError(MedfxError):
    """variable or level not declared"""

    pass


class ZeroProbabilityCondition(MedfxError):
    """conditioning event has zero mass"""

    pass


class NonNumericTarget(MedfxError):
    """expectation requested for a variable without numeric values"""

    pass


class MeasureError(MedfxError):
    """measure request does not fit the distribution"""

    pass


class NonBinaryExposure(MeasureError):
    """exposure must have exactly two levels"""

    pass


class NonBinaryMediator(MeasureError):
    """mediator must have exactly two levels"""

    pass


class NonBinaryProxy(MeasureError):
    """proxy must have exactly two levels"""

    pass


class UnsupportedMeasureError(MeasureError):
    """measure not available for this model or graph"""

    pass


class ModelError(MedfxError):
    """structural model error"""

    pass


class InterventionError(ModelError):
    """intervention targets a variable that cannot be intervened on"""

    pass


class CounterfactualTermError(ModelError):
    """malformed counterfactual term"""

    pass


class StateBudgetExceeded(ModelError):
    """too many exogenous states to enumerate"""

    pass


class RejectionBudgetExceeded(ModelError):
    """random model generation could not satisfy its constraints"""

    pass


class ZeroTotalEffect(MedfxError):
    """relative reduction requested against a zero total effect"""

    pass


class IngestError(MedfxError):
    """input file could not be parsed or validated"""

    pass


class EmptyBatchError(IngestError):
    """record batch has no rows"""

    pass
