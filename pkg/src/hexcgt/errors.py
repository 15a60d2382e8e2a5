"""Exception hierarchy.  Each family carries the exit code the CLI uses."""


class HexcgtError(Exception):
    exit_code = 1


class ParseError(HexcgtError):
    exit_code = 2

    def __init__(self, msg, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            msg = f"{msg} (line {line}, column {col})"
        super().__init__(msg)


class PreconditionError(HexcgtError):
    exit_code = 3


class InvalidArgumentError(PreconditionError):
    pass


class UnsupportedPosetError(PreconditionError):
    pass


class ResourceLimitError(HexcgtError):
    exit_code = 4

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class PropertyViolation(HexcgtError):
    exit_code = 5


class InternalConsistencyError(PropertyViolation):
    pass
