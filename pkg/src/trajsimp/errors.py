"""Exception types raised across the package."""


class TrajectoryError(ValueError):
    """Base class for invalid trajectory input or arguments."""


class OutOfDomain(TrajectoryError):
    pass


class BadDimension(TrajectoryError):
    pass


class DomainMismatch(TrajectoryError):
    pass


class BadMetric(TrajectoryError):
    pass


class BadRate(TrajectoryError):
    pass


class InternalGeometry(RuntimeError):
    """A geometric invariant was violated; indicates a bug, not bad input."""


class NotPrefixForm(ValueError):
    """Trajectory cannot be written in the compact representation."""


class CodecError(ValueError):
    pass


class TruncatedStream(CodecError):
    pass


class BadMagic(CodecError):
    pass


class UnsupportedVersion(CodecError):
    pass


class ParseError(ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class MalformedRow(ParseError):
    pass


class NonMonotonicTime(ParseError):
    pass
