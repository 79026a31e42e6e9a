"""Shared exception types."""


class ResourceBudgetError(RuntimeError):
    """A configured cap (points, states, configs) was exceeded.

    The message names the budget that ran out; callers map this to the
    CLI resource exit code.
    """


class UndecidedDensityError(ValueError):
    """The implemented density criteria cannot decide this base/alphabet."""
