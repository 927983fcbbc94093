"""Core value types: market configuration, horizon scenarios, schedules.

All types here are immutable once built.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .exceptions import (
    BadLambda,
    BadPriceBounds,
    NonPositiveBudget,
    NonPositiveRate,
    OnlineConversionError,
    PriceOutOfBounds,
)

#: absolute slack on budget sums
BUDGET_SLACK = 1e-9
#: ratios this close to an integer are snapped before ceil()
SNAP_TOL = 1e-9


def ceil_snap(ratio: float, tol: float = SNAP_TOL) -> int:
    """Integer ceiling that first snaps values within ``tol`` of an integer."""
    nearest = round(ratio)
    if abs(ratio - nearest) <= tol:
        return int(nearest)
    return int(math.ceil(ratio))


@dataclass(frozen=True)
class MarketConfig:
    """Budget ``k``, per-step rate limit ``b`` and the price range.

    Construction does not validate; call :func:`validate_config` (or
    :meth:`validated`) when the values come from outside.
    """

    k: float
    b: float
    p_min: float
    p_max: float

    @property
    def theta(self) -> float:
        return self.p_max / self.p_min

    def validated(self) -> "MarketConfig":
        validate_config(self)
        return self

    def scaled(self, fraction: float) -> "MarketConfig":
        """Same prices, budget and rate multiplied by ``fraction``."""
        return MarketConfig(self.k * fraction, self.b * fraction, self.p_min, self.p_max)


class BoxClass(enum.Enum):
    TRIVIAL_FORCED = "TrivialForced"
    NON_TRIVIAL = "NonTrivial"
    TRIVIAL_UNBOUNDED = "TrivialUnbounded"


# -- horizon scenarios -------------------------------------------------------

@dataclass(frozen=True)
class Known:
    T: int

    def __post_init__(self):
        if int(self.T) != self.T or self.T < 1:
            raise OnlineConversionError(f"Known horizon needs T >= 1, got {self.T}")

    @property
    def name(self) -> str:
        return "known"


@dataclass(frozen=True)
class Notice:
    """Horizon revealed partway.

    ``T_revealed`` is the horizon the environment announces.  With
    ``notify_step=None`` the environment notifies at the zero-laxity moment
    of the run; an explicit step is checked for consistency by the trader.
    ``T_revealed=None`` means no notification ever arrives.
    """

    T_revealed: Optional[int] = None
    notify_step: Optional[int] = None

    def __post_init__(self):
        if self.T_revealed is not None and self.T_revealed < 1:
            raise OnlineConversionError("T_revealed must be >= 1")
        if self.notify_step is not None:
            if self.T_revealed is None:
                raise OnlineConversionError("notify_step given without T_revealed")
            if not 1 <= self.notify_step <= self.T_revealed:
                raise OnlineConversionError(
                    f"notify_step {self.notify_step} outside [1, {self.T_revealed}]"
                )

    @property
    def name(self) -> str:
        return "notice"


@dataclass(frozen=True)
class Unknown:
    @property
    def name(self) -> str:
        return "unknown"


@dataclass(frozen=True)
class Prediction:
    T_pred: int
    lam: float

    def __post_init__(self):
        if self.T_pred < 1:
            raise OnlineConversionError("T_pred must be >= 1")
        if not 0.0 <= self.lam <= 1.0:
            raise BadLambda(f"lambda must lie in [0, 1], got {self.lam}")

    @property
    def name(self) -> str:
        return "prediction"


HorizonScenario = Union[Known, Notice, Unknown, Prediction]


# -- schedules ---------------------------------------------------------------

@dataclass(frozen=True)
class TradeSchedule:
    allocations: np.ndarray
    revenue: float

    @classmethod
    def from_allocations(cls, prices: Sequence[float], allocations: Sequence[float]) -> "TradeSchedule":
        x = np.asarray(allocations, dtype=float)
        p = np.asarray(prices, dtype=float)
        if x.shape != p.shape:
            raise OnlineConversionError("allocations and prices differ in length")
        x.setflags(write=False)
        return cls(allocations=x, revenue=float(np.dot(p, x)))

    @property
    def total(self) -> float:
        return float(np.sum(self.allocations))

    def __len__(self) -> int:
        return len(self.allocations)


def check_schedule(schedule: TradeSchedule, cfg: MarketConfig, slack: float = BUDGET_SLACK) -> None:
    """Raise if the schedule breaks the box or the budget constraint."""
    x = schedule.allocations
    if np.any(x < -slack) or np.any(x > cfg.b + slack):
        bad = int(np.flatnonzero((x < -slack) | (x > cfg.b + slack))[0])
        raise OnlineConversionError(f"allocation {x[bad]!r} at step {bad} violates box [0, {cfg.b}]")
    if x.sum() > cfg.k + slack:
        raise OnlineConversionError(f"total allocation {x.sum()!r} exceeds budget {cfg.k}")


# -- operations --------------------------------------------------------------

def validate_config(cfg: MarketConfig) -> None:
    if not cfg.k > 0:
        raise NonPositiveBudget(f"budget k must be > 0, got {cfg.k}")
    if not cfg.b > 0:
        raise NonPositiveRate(f"rate limit b must be > 0, got {cfg.b}")
    if not cfg.p_min > 0 or not cfg.p_max >= cfg.p_min:
        raise BadPriceBounds(f"need 0 < p_min <= p_max, got [{cfg.p_min}, {cfg.p_max}]")


def classify_box(cfg: MarketConfig, T: int) -> BoxClass:
    """Place ``b`` in (0, k/T], (k/T, k) or [k, inf).

    When ``T == 1`` the middle interval is empty and ``b == k`` counts as
    forced.
    """
    validate_config(cfg)
    if T < 1:
        raise OnlineConversionError(f"T must be >= 1, got {T}")
    if cfg.b * T <= cfg.k:
        return BoxClass.TRIVIAL_FORCED
    if cfg.b >= cfg.k:
        return BoxClass.TRIVIAL_UNBOUNDED
    return BoxClass.NON_TRIVIAL


def validate_prices(cfg: MarketConfig, prices: Sequence[float]) -> None:
    for i, p in enumerate(prices):
        if not cfg.p_min <= p <= cfg.p_max:
            raise PriceOutOfBounds(i, p, cfg.p_min, cfg.p_max)
