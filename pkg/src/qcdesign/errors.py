"""Exception types shared across the package.

The CLI maps these onto distinct exit codes, so library code should raise
the most specific class that applies.
"""


class QcDesignError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(QcDesignError, ValueError):
    """An argument violates a documented precondition."""


class ConfigError(QcDesignError, ValueError):
    """A configuration file or section is malformed."""


class ProcedureParseError(QcDesignError, ValueError):
    """Procedure notation could not be parsed.

    ``position`` is the character offset of the first offending token.
    """

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class InfeasibleAssayError(QcDesignError, ValueError):
    """The assay parameters admit no critical-error solution."""
