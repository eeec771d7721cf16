"""Exception types raised across the package."""


class EvoderError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(EvoderError, ValueError):
    pass


class RankMismatch(EvoderError, ValueError):
    pass


class RadicandMismatch(EvoderError, ValueError):
    pass


class PatternMismatch(EvoderError, ValueError):
    pass


class ExplicitLimit(EvoderError):
    """Raised when a permutation search would exceed the configured size cap."""


class UnsupportedCase(EvoderError, ValueError):
    pass


class DimensionTooSmall(EvoderError, ValueError):
    pass


class ParseError(EvoderError, ValueError):
    pass


class MalformedScalar(ParseError):
    pass


class NonSquare(ParseError):
    pass


class EmptyMatrix(ParseError):
    pass
