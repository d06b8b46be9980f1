"""Exception types shared across the package."""


class DeepPslError(Exception):
    """Base class for all package errors."""


class InputError(DeepPslError):
    """Bad user input: files, formats, shapes, config keys. CLI exit code 2."""


class ParseError(InputError):
    """Syntax or semantic error in a rule/domain source file."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        loc = ""
        if path is not None:
            loc += f"{path}:"
        if line is not None:
            loc += f"{line}:"
            if column is not None:
                loc += f"{column}:"
        super().__init__(f"{loc} {message}" if loc else message)


class GroundingError(InputError):
    """Rule set cannot be grounded against the given domain."""


class NumericError(DeepPslError):
    """Non-finite values during optimization (bad weights or step size). CLI exit code 3."""
