class EccError(Exception):
    """Base class for errors raised by ecckit."""


class ContractError(EccError, ValueError):
    """An operation was called with arguments violating its precondition."""


class ParseError(EccError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GuardError(EccError, ValueError):
    """An exhaustive oracle refused an instance above its size guard."""


class InvariantError(EccError, AssertionError):
    """Internal invariant violated; indicates a bug, not bad input."""
