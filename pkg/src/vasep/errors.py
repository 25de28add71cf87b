"""Shared exception types."""

from __future__ import annotations


class DimensionMismatch(ValueError):
    """Vectors of unequal dimension were mixed in one computation."""


class BudgetExceeded(RuntimeError):
    """An exact search hit its configured size or node cap before concluding."""


class InvalidRun(ValueError):
    """A candidate run breaks chaining, nonnegativity, or transition membership."""


class SchemaError(ValueError):
    """A JSON document does not match the expected wire format.

    `path` points at the offending element, e.g. "$.vas.transitions[2]".
    """

    def __init__(self, message: str, path: str = "$") -> None:
        super().__init__(f"{path}: {message}")
        self.path = path
