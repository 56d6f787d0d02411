"""Exception types shared across the package."""


class AcflowError(Exception):
    """Base class for package-specific failures."""


class DomainBoundError(AcflowError):
    """A field left the admissible pointwise range (e.g. |u| >= 1 for the
    logarithmic potential), which signals an upstream bound violation."""


class NumericRangeError(AcflowError):
    """A scalar evaluation produced a non-finite or out-of-range value."""


class NumericFailure(AcflowError):
    """A time step produced non-finite data; carries the failing step index."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step
