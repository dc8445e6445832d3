"""Exception types raised across the package.

Every precondition violation maps to one of these; callers can catch
``BetacpError`` to handle all of them uniformly.
"""


class BetacpError(Exception):
    """Base class for all package errors."""


class BadParameter(BetacpError):
    """A scalar parameter is outside its admissible range."""


class SizeMismatch(BetacpError):
    """Partition counts do not sum to the sample size, or a count is zero."""


class SeriesTooShort(BetacpError):
    """A time series is too short for the requested window or lag."""


class EmptyInput(BetacpError):
    """An operation received an empty score sequence."""


class EmptyConditionSet(BetacpError):
    """A conditioning set contains no calibration points."""


class TooFewPoints(BetacpError):
    """Rank-one-out needs at least two test points."""


class EmptyCalibration(BetacpError):
    """Calibration data is empty."""


class EmptyTraining(BetacpError):
    """Training data is empty."""


class EmptyTest(BetacpError):
    """Test data is empty."""


class NotInvertible(BetacpError):
    """The conformity score has no closed-form interval inversion."""


class NonpositiveScale(BetacpError):
    """A weighted residual score was given a nonpositive scale estimate."""


class NotStochastic(BetacpError):
    """A transition matrix is not row-stochastic."""


class NoUniqueStationary(BetacpError):
    """A transition matrix has no unique stationary distribution."""


class NonStationaryLambda(BetacpError):
    """An AR(1) coefficient has |lambda| >= 1."""


class NoFeasiblePlan(BetacpError):
    """No block plan satisfies the feasibility constraint for the given
    failure probability and mixing profile."""


class LambdaNotInGrid(BetacpError):
    """A threshold value is not a member of the nested family's grid."""


class NoControllingLambda(BetacpError):
    """Even the largest threshold in the grid fails to control the risk."""


class ParseError(BetacpError):
    """A data file failed to parse; the message carries the line number."""


class NonMonotoneTimestamps(BetacpError):
    """Timestamps are not strictly increasing."""


class NonpositivePrice(BetacpError):
    """A price column contains a value <= 0."""


class ConfigError(BetacpError):
    """An experiment configuration is invalid."""
