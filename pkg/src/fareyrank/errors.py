"""Exception hierarchy. Every error raised by the library derives from FareyError."""


class FareyError(ValueError):
    pass


class InvalidDenominator(FareyError):
    pass


class InvalidOrder(FareyError):
    pass


class InvalidArgument(FareyError):
    pass


class RankOutOfRange(FareyError):
    pass


class OutOfTable(FareyError):
    pass


class ZeroVector(FareyError):
    pass


class NoObject(FareyError):
    pass


class DegenerateObject(FareyError):
    pass


class OpenPolygonUnsupported(FareyError):
    pass


class CacheRejected(FareyError):
    pass


class InputFormatError(FareyError):
    """Malformed input file (bad PBM header, bad contour JSON, ...)."""
