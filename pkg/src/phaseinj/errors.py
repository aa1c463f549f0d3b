"""Exception hierarchy shared by every certifier and the CLI."""


class PhaseInjError(Exception):
    """Base class for all errors raised by this package."""


class NonFinite(PhaseInjError, ValueError):
    pass


class DimensionMismatch(PhaseInjError, ValueError):
    pass


class FieldMismatch(PhaseInjError, ValueError):
    pass


class ShapeError(PhaseInjError, ValueError):
    pass


class ZeroVector(PhaseInjError, ValueError):
    pass


class GuardExceeded(PhaseInjError, RuntimeError):
    """An exhaustive enumeration would exceed its configured limit."""


class NotSpanning(PhaseInjError, ValueError):
    pass


class NotUntf(PhaseInjError, ValueError):
    pass


class DuplicateBases(PhaseInjError, ValueError):
    pass


class BadParam(PhaseInjError, ValueError):
    pass


class ParseError(PhaseInjError, ValueError):
    """A matrix file does not conform to the JSON matrix format."""


class IncompatibleSpec(PhaseInjError, ValueError):
    """The requested property/field/dimension combination has no certifier."""
