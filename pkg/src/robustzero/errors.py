"""Exception hierarchy shared by all modules."""


class RobustZeroError(Exception):
    """Base class for library errors."""


class DimensionMismatch(RobustZeroError, ValueError):
    pass


class NonPositiveWeight(RobustZeroError, ValueError):
    pass


class WeightsDoNotSumToOne(RobustZeroError, ValueError):
    pass


class DuplicateAtom(RobustZeroError, ValueError):
    pass


class InvalidSlots(RobustZeroError, ValueError):
    pass


class DegenerateMap(RobustZeroError, ValueError):
    pass


class InvalidConstraintCover(RobustZeroError, ValueError):
    pass


class BudgetExceeded(RobustZeroError, RuntimeError):
    """Raised when branch-and-prune keeps more boxes than the configured cap."""


class NotFound(RobustZeroError, LookupError):
    """Raised by the heuristic box search when nothing certifies."""


class CertificateError(RobustZeroError, ValueError):
    """A certificate document failed to parse or to re-check."""


class DistributionFormatError(RobustZeroError, ValueError):
    """Malformed distribution document; ``lineno`` is 1-based when known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
