"""Exception hierarchy for the shapewave pipeline.

Every domain error derives from :class:`ShapewaveError` so callers (and the
CLI) can distinguish pipeline failures from programming errors.
"""


class ShapewaveError(Exception):
    """Base class for all shapewave domain errors."""


# ---- signal / phase validation ---------------------------------------------

class NonIncreasingTimes(ShapewaveError):
    pass


class NonFiniteValue(ShapewaveError):
    pass


class TooShort(ShapewaveError):
    pass


class NonMonotonePhase(ShapewaveError):
    pass


class TooFewPeriods(ShapewaveError):
    pass


class NotNearIntegerPeriods(ShapewaveError):
    pass


# ---- phase-domain transform -------------------------------------------------

class GridTooCoarse(ShapewaveError):
    pass


class BandExceedsNyquist(ShapewaveError):
    pass


# ---- rank-1 fitting ----------------------------------------------------------

class MismatchedLengths(ShapewaveError):
    pass


class DegenerateInput(ShapewaveError):
    pass


class DegenerateFactors(ShapewaveError):
    pass


class NonConvergence(ShapewaveError):
    pass


# ---- localized extraction ----------------------------------------------------

class WindowTooShort(ShapewaveError):
    pass


# ---- phase estimation ----------------------------------------------------------

class AmbiguousFundamental(ShapewaveError):
    pass


class NonMonotoneEstimate(ShapewaveError):
    pass


# ---- data generation / ingestion ----------------------------------------------

class NonFiniteState(ShapewaveError):
    pass


class ParseError(ShapewaveError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
