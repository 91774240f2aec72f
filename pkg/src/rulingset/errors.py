"""Exception hierarchy shared by all modules."""


class RulingSetError(Exception):
    """Base class for every error raised by this package."""


class InvalidVertex(RulingSetError, IndexError):
    pass


class InvalidInput(RulingSetError, ValueError):
    pass


class NotProper(RulingSetError, ValueError):
    """A coloring has a monochromatic edge."""


class SeedNotCommitted(RulingSetError, ValueError):
    pass


class TooManyPoints(RulingSetError, ValueError):
    pass


class UnsupportedField(RulingSetError, ValueError):
    pass


class DegenerateGraph(RulingSetError, ValueError):
    pass


class InvalidK(RulingSetError, ValueError):
    pass


class DomainTooSmall(RulingSetError, ValueError):
    pass


class EnumerationBudgetExceeded(RulingSetError):
    def __init__(self, needed, budget):
        super().__init__(f"enumeration needs {needed} evaluations, budget is {budget}")
        self.needed = needed
        self.budget = budget


class CandidateOverflow(RulingSetError):
    pass


class InvalidTrace(RulingSetError, ValueError):
    pass


class ModelViolation(RulingSetError):
    """A simulated machine broke a model limit."""

    def __init__(self, message, round_index=None, machine=None, words=None):
        super().__init__(message)
        self.round_index = round_index
        self.machine = machine
        self.words = words


class CapacityViolation(ModelViolation):
    pass


class BandwidthViolation(ModelViolation):
    pass


class PreconditionFailed(RulingSetError):
    """The potential's expectation is not below the bad-vertex weight.

    ``report`` carries the exact expectation breakdown.
    """

    def __init__(self, report):
        super().__init__(
            f"E[psi] = {report.expected_psi} is not below W = {report.weight}"
        )
        self.report = report
