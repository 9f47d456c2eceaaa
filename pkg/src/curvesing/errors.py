"""Exception hierarchy.  Every subclass carries the CLI exit code it maps to."""


class CurveSingError(Exception):
    exit_code = 1


class ParseError(CurveSingError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        self.message = message
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateInputError(CurveSingError, ValueError):
    """Input is not a curve germ at the origin, or a colength is infinite."""

    exit_code = 3


class GenericityError(CurveSingError):
    """Random choices never produced an admissible, agreeing configuration."""

    exit_code = 4


class StepBudgetExceeded(CurveSingError):
    exit_code = 5
