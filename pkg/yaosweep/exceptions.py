from __future__ import annotations


class InstanceError(ValueError):
    """Raised when point data is inconsistent, e.g. mixed dimensions."""


class ParseError(InstanceError):
    """Raised when an instance file cannot be parsed.

    Args:
        message (str):
            Description of the problem.

        line_number (int | None):
            1-based line of the offending input, if known.
    """

    def __init__(self, message: str, line_number: int | None = None) -> None:
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class ConfigurationError(ValueError):
    """Raised for invalid run settings (dimension, family, backend, budgets)."""


class ContractError(AssertionError):
    """Raised when a caller breaks a documented precondition."""
