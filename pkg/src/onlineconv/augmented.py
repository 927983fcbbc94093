"""Learning-augmented trader driven by a horizon prediction.

The budget and the rate limit are split by the confidence ``lam``: a share
``1 - lam`` is traded by a known-horizon trader that trusts ``T_pred`` and a
share ``lam`` by an unknown-horizon trader.  Both run side by side on the
same prices and their sales add up.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .domain import Known, MarketConfig, TradeSchedule, Unknown, validate_config, validate_prices
from .exceptions import BadAlpha, BadLambda, OnlineConversionError
from .ratios import alpha_known, cr_unknown
from .trader import TraderState, trader_new, trader_step

_BOX_SLACK = 1e-9


@dataclass
class AugmentedState:
    cfg: MarketConfig
    T_pred: int
    lam: float
    alpha1: float
    alpha2: float
    #: known-horizon part; None when its share is empty (lam == 1)
    sub1: Optional[TraderState]
    #: unknown-horizon part; None when its share is empty (lam == 0)
    sub2: Optional[TraderState]
    t: int = 1

    def __post_init__(self):
        self.prices: list = []
        self.allocations: list = []
        self.part1: list = []
        self.part2: list = []

    def schedule(self) -> TradeSchedule:
        return TradeSchedule.from_allocations(self.prices, self.allocations)

    def stranded(self) -> tuple[float, float]:
        """Unsold budget of each sub-trader."""
        s1 = self.sub1.k_remaining if self.sub1 is not None else 0.0
        s2 = self.sub2.k_remaining if self.sub2 is not None else 0.0
        return s1, s2


def default_alphas(cfg: MarketConfig, T_pred: int) -> tuple[float, float]:
    return alpha_known(cfg.theta, T_pred, cfg.k, cfg.b), cr_unknown(cfg.theta)


def augmented_new(
    cfg: MarketConfig,
    T_pred: int,
    lam: float,
    alpha1: Optional[float] = None,
    alpha2: Optional[float] = None,
) -> AugmentedState:
    validate_config(cfg)
    if not 0.0 <= lam <= 1.0:
        raise BadLambda(f"lambda must lie in [0, 1], got {lam}")
    if T_pred < 1:
        raise OnlineConversionError(f"T_pred must be >= 1, got {T_pred}")
    d1, d2 = default_alphas(cfg, T_pred)
    a1 = d1 if alpha1 is None else alpha1
    a2 = d2 if alpha2 is None else alpha2
    if a1 < 1.0 or a2 < 1.0:
        raise BadAlpha(f"alphas must be >= 1, got ({a1}, {a2})")
    sub1 = trader_new(cfg.scaled(1.0 - lam), Known(T_pred), a1) if lam < 1.0 else None
    sub2 = trader_new(cfg.scaled(lam), Unknown(), a2) if lam > 0.0 else None
    return AugmentedState(cfg=cfg, T_pred=T_pred, lam=lam, alpha1=a1, alpha2=a2, sub1=sub1, sub2=sub2)


def augmented_step(s: AugmentedState, p: float) -> tuple[float, AugmentedState]:
    x1 = 0.0
    if s.sub1 is not None and s.t <= s.T_pred:
        x1, _ = trader_step(s.sub1, p)
    x2 = 0.0
    if s.sub2 is not None:
        x2, _ = trader_step(s.sub2, p)
    total = x1 + x2
    if total > s.cfg.b + _BOX_SLACK:
        raise OnlineConversionError(f"combined allocation {total} exceeds rate limit {s.cfg.b}")
    s.prices.append(p)
    s.allocations.append(total)
    s.part1.append(x1)
    s.part2.append(x2)
    s.t += 1
    return total, s


def run_augmented(
    cfg: MarketConfig,
    T_pred: int,
    lam: float,
    alpha1: Optional[float],
    alpha2: Optional[float],
    prices: Sequence[float],
    state_out: Optional[list] = None,
) -> TradeSchedule:
    validate_prices(cfg, prices)
    s = augmented_new(cfg, T_pred, lam, alpha1, alpha2)
    for p in prices:
        augmented_step(s, p)
    if state_out is not None:
        state_out.append(s)
    return s.schedule()
