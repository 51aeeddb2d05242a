"""Exception hierarchy shared by all stabilis modules."""


class StabilisError(Exception):
    """Base class for library errors."""


class DimensionError(StabilisError, ValueError):
    """Operands live in polynomial rings with different numbers of variables."""


class PreconditionError(StabilisError, ValueError):
    """An input violates a documented precondition."""


class DomainError(StabilisError, ValueError):
    """An input lies outside the space an operator is defined on."""


class EmptySupportError(StabilisError, ValueError):
    """The zero polynomial was given where a non-empty support is required."""


class ParseError(StabilisError, ValueError):
    """Malformed polynomial text; ``pos`` is the offending character offset."""

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at position {pos})"
        super().__init__(message)


class SchemaError(StabilisError, ValueError):
    """Malformed JSON input; ``pointer`` is a JSON pointer to the bad node."""

    def __init__(self, message, pointer=""):
        self.pointer = pointer
        super().__init__(f"{message} (at {pointer or '/'})")


class InconsistencyError(StabilisError, RuntimeError):
    """Two independent decision routes disagreed on the same input."""
