class GrlocalError(Exception):
    """Base class for library errors."""


class PreconditionError(GrlocalError):
    """Caller violated an operation's precondition (CLI exit code 2)."""


class TruncationError(PreconditionError):
    """A product or component lies beyond the degree bound."""


class InvariantError(GrlocalError):
    """An internal consistency check failed (CLI exit code 3)."""


class OracleCapError(PreconditionError):
    """A brute-force check would exceed its size cap."""
