"""Exception types shared across the package."""


class DfrcError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatch(DfrcError):
    pass


class NotHermitian(DfrcError):
    pass


class NotPositiveDefinite(DfrcError):
    pass


class WrongPartition(DfrcError):
    """A target index was used with the wrong direct/indirect set."""


class EmptyIndirectSet(DfrcError):
    """Phase optimization requested but no indirect targets exist."""


class Infeasible(DfrcError):
    """The precoder subproblem has no solution within the power budget."""

    def __init__(self, message, violating_targets=()):
        super().__init__(message)
        self.violating_targets = tuple(violating_targets)


class NonMonotone(DfrcError):
    """Internal-consistency guard: the slack objective decreased."""
