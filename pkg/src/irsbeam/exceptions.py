"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """An input (dimension, count, config field) violates its contract."""


class InfeasibleSearchError(RuntimeError):
    """A search finished without a single feasible candidate."""


class EliteSelectionError(RuntimeError):
    """Fewer feasible candidates than elites requested in one iteration.

    Carries the feasible count so the caller can decide whether to
    resample with a different seed or abort.
    """

    def __init__(self, message, feasible_count=0, required=0):
        super().__init__(message)
        self.feasible_count = feasible_count
        self.required = required
