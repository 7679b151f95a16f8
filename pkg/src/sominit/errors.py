"""Exception types raised across the package."""


class SomInitError(Exception):
    """Base class for all package errors."""


class EmptyDataSet(SomInitError, ValueError):
    pass


class DegenerateCloud(SomInitError, ValueError):
    """All points coincide, so there is no variance to explain."""


class ZeroLengthSegment(SomInitError, ValueError):
    pass


class DimensionMismatch(SomInitError, ValueError):
    pass


class UnknownShape(SomInitError, KeyError):
    pass


class ParseError(SomInitError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class IoError(SomInitError, OSError):
    pass


class TooManyNodes(SomInitError, ValueError):
    pass


class DomainError(SomInitError, ValueError):
    pass


class DegenerateRegressor(SomInitError, ValueError):
    pass
