"""Exception hierarchy.

Every error raised by the library derives from :class:`OnlineConversionError`,
which is itself a :class:`ValueError` so that generic input-validation
handlers keep working.
"""


class OnlineConversionError(ValueError):
    """Base class for all library errors."""


# -- configuration / inputs -------------------------------------------------

class NonPositiveBudget(OnlineConversionError):
    pass


class NonPositiveRate(OnlineConversionError):
    pass


class BadPriceBounds(OnlineConversionError):
    pass


class PriceOutOfBounds(OnlineConversionError):
    def __init__(self, index, value, lo=None, hi=None):
        self.index = index
        self.value = value
        where = f"index {index}"
        bounds = f" outside [{lo}, {hi}]" if lo is not None else " out of bounds"
        super().__init__(f"price {value!r} at {where}{bounds}")


class BadTheta(OnlineConversionError):
    pass


class BadAlpha(OnlineConversionError):
    pass


class BadLambda(OnlineConversionError):
    pass


class InfeasibleHorizon(OnlineConversionError):
    pass


# -- pseudo-cost -------------------------------------------------------------

class SingularEvaluation(OnlineConversionError):
    """alpha * x / k reached 1: the pole of the pseudo-cost."""


class BudgetExceeded(OnlineConversionError):
    pass


# -- trader protocol ---------------------------------------------------------

class NotifyInWrongMode(OnlineConversionError):
    pass


class DoubleNotify(OnlineConversionError):
    pass


class InconsistentNotify(OnlineConversionError):
    pass


class StepAfterHorizon(OnlineConversionError):
    pass


# -- numerics ----------------------------------------------------------------

class DomainError(OnlineConversionError):
    pass


class NoConvergence(OnlineConversionError):
    pass


class TooLarge(OnlineConversionError):
    pass


# -- ingestion ---------------------------------------------------------------

class ParseError(OnlineConversionError):
    def __init__(self, line, message="could not parse"):
        self.line = line
        super().__init__(f"line {line}: {message}")
