"""Exception hierarchy.

``ParameterError`` covers bad thresholds and flag combinations, ``StructuralError``
covers out-of-range indices and malformed in-memory objects, ``DataError`` covers
problems found while ingesting files.
"""


class GranularError(Exception):
    """Base class for all errors raised by this package."""


class ParameterError(GranularError, ValueError):
    pass


class StructuralError(GranularError, IndexError):
    pass


class DataError(GranularError):
    """Raised when input data cannot be turned into a valid model.

    ``location`` is a free-form string such as ``"u.user:12"`` or
    ``"customers.csv row 3, column Age"``.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)


class ValidationError(DataError):
    """Carries every violation found by :func:`granular_rules.model.validate_mmer`."""

    def __init__(self, violations):
        self.violations = list(violations)
        lines = [str(v) for v in self.violations]
        super().__init__(
            f"{len(lines)} violation(s):\n  " + "\n  ".join(lines)
        )
