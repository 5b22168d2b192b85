class AlgebraError(Exception):
    """Domain error: an input violates a precondition of the requested operation."""


class NonSplitError(AlgebraError):
    pass


class ParseError(AlgebraError):
    """Malformed or invalid algebra file."""
