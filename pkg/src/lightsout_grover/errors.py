"""Exception hierarchy shared by all modules."""


class LightsOutError(Exception):
    """Base class for every error raised by this package."""


class CircuitError(LightsOutError, ValueError):
    pass


class IndexOutOfRange(CircuitError):
    pass


class ArityMismatch(CircuitError):
    pass


class DuplicateQubit(ArityMismatch):
    pass


class ContainsMeasurement(CircuitError):
    pass


class MidCircuitMeasurement(CircuitError):
    pass


class ParseError(CircuitError):
    """Malformed JSON input; ``context`` names the offending field or line."""

    def __init__(self, message: str, context: str = ""):
        self.context = context
        super().__init__(f"{context}: {message}" if context else message)


class InstanceError(LightsOutError, ValueError):
    pass


class ZeroDimension(InstanceError):
    pass


class OddOrTooSmall(InstanceError):
    pass


class LengthMismatch(InstanceError):
    pass


class TooLarge(LightsOutError, ValueError):
    """Problem exceeds a capacity limit (exhaustive enumeration, full-basis checks)."""


class InsufficientAncillas(LightsOutError, ValueError):
    pass


class BadConfigLength(InstanceError):
    pass


class InvalidCounts(LightsOutError, ValueError):
    pass


class TooManyQubits(TooLarge):
    pass


class NoMeasurements(LightsOutError, ValueError):
    pass


class EmptyDistribution(LightsOutError, ValueError):
    pass


class UnsupportedGate(LightsOutError, ValueError):
    pass


class CircuitTooWide(LightsOutError, ValueError):
    pass
