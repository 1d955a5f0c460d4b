"""Shared exception types."""


class ShapeMismatchError(ValueError):
    """Input does not have the matrix shape an operation requires."""


class BudgetExceededError(RuntimeError):
    """An enumeration would exceed the configured vertex budget."""
