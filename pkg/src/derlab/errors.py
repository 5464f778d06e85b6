"""Exception types raised by derlab."""


class DerlabError(Exception):
    """Base class for every error raised by the library."""


class RingMismatchError(DerlabError, ValueError):
    pass


class ParseError(DerlabError, ValueError):
    """Syntax error in a polynomial or derivation expression.

    ``pos`` is the 0-based character offset into the parsed text.
    """

    def __init__(self, message, pos=None):
        self.message = message
        self.pos = pos
        if pos is not None:
            message = f"{message} at column {pos + 1}"
        super().__init__(message)


class PreconditionError(DerlabError, ValueError):
    """An operation was called on input outside its domain."""


class InternalConsistencyError(DerlabError, AssertionError):
    """A result contradicts an identity the algorithms guarantee.

    Seeing this means a bug, not bad input.
    """
