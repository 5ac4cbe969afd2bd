"""Exception types shared across the package."""


class CmproxError(Exception):
    """Base class for errors raised by cmprox."""


class PrecisionExhausted(CmproxError):
    """A quantity cannot be decided at the working precision.

    Raised e.g. when a subtraction cancels every stored digit, so the
    valuation of the result is only bounded below, or when a root search
    cannot separate candidates before running out of digits.
    """

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class NonSmoothPoint(CmproxError):
    """Hensel lifting was attempted at a point violating its precondition."""


class PrecisionFailure(CmproxError):
    """A floating-point computation did not certify to an exact answer.

    Used by the class-polynomial builder when a coefficient lands too far
    from an integer at the chosen working precision.
    """


class NotInIdealAtCap(CmproxError):
    """Ideal membership could not be expressed within the degree cap."""


class Inconclusive(CmproxError):
    """An interval-valued check straddles its decision threshold."""


class ResourceLimit(CmproxError):
    """A configured search or size cap was exceeded."""


class DegenerateMatrix(CmproxError):
    """A matrix invariant needed by the conjugator construction vanishes."""
