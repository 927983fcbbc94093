"""Sequential pseudo-revenue-maximizing trader.

One price arrives per step.  While *proactive*, the trader sells the amount
that maximizes pseudo-revenue.  Once the remaining budget can only be spent
by trading at the full rate ``b`` until the horizon (negative laxity, or a
notification), it turns *forced* and never goes back.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from .domain import (
    BUDGET_SLACK,
    HorizonScenario,
    Known,
    MarketConfig,
    Notice,
    TradeSchedule,
    Unknown,
    ceil_snap,
    validate_config,
    validate_prices,
)
from .exceptions import (
    BadAlpha,
    DoubleNotify,
    InconsistentNotify,
    NotifyInWrongMode,
    OnlineConversionError,
    PriceOutOfBounds,
    StepAfterHorizon,
)
from .pseudocost import (
    PhiHatState,
    PhiState,
    phi_commit,
    phi_maximizer,
    phihat_commit,
    phihat_maximizer,
)

logger = logging.getLogger(__name__)

Mode = Union[Known, Notice, Unknown]


class Phase(enum.Enum):
    PROACTIVE = "proactive"
    FORCED = "forced"


def compute_laxity(T: int, t: int, k_prev: float, x: float, b: float) -> int:
    """``(T - t) - ceil((k_prev - x) / b)``; negative means the budget can
    no longer be spent by step ``T``."""
    return (T - t) - ceil_snap((k_prev - x) / b)


@dataclass
class TraderState:
    cfg: MarketConfig
    mode: str
    alpha: float
    phi: Union[PhiState, PhiHatState]
    k_remaining: float
    T: Optional[int] = None
    t: int = 1
    phase: Phase = Phase.PROACTIVE
    switch_step: Optional[int] = None
    notified: bool = False
    prices: list = field(default_factory=list)
    allocations: list = field(default_factory=list)
    #: pseudo-cost level phi(0) after each step
    levels: list = field(default_factory=list)

    def schedule(self) -> TradeSchedule:
        return TradeSchedule.from_allocations(self.prices, self.allocations)

    @property
    def spent(self) -> float:
        return self.cfg.k - self.k_remaining


def trader_new(cfg: MarketConfig, mode: Mode, alpha: float) -> TraderState:
    validate_config(cfg)
    if not alpha >= 1.0:
        raise BadAlpha(f"alpha must be >= 1, got {alpha}")
    if isinstance(mode, Unknown):
        phi = PhiHatState(alpha, cfg.k, cfg.p_min)
        T = None
    elif isinstance(mode, (Known, Notice)):
        phi = PhiState(alpha, cfg.k, cfg.p_min)
        T = mode.T if isinstance(mode, Known) else None
    else:
        raise OnlineConversionError(f"trader does not run scenario {mode!r}")
    return TraderState(cfg=cfg, mode=mode.name, alpha=alpha, phi=phi, k_remaining=cfg.k, T=T)


def _forced_amount(s: TraderState) -> float:
    b = s.cfg.b
    return max(0.0, min(b, s.k_remaining - b * (s.T - s.t), s.k_remaining))


def _commit(s: TraderState, x: float) -> None:
    if isinstance(s.phi, PhiHatState):
        s.phi = phihat_commit(s.phi, min(x, s.phi.k - s.phi.c))
    elif s.alpha > 1.0:
        # alpha == 1 keeps phi flat at p_min whatever the history
        s.phi = phi_commit(s.phi, x)


def trader_step(
    s: TraderState,
    p: float,
    notify: bool = False,
    T_on_notify: Optional[int] = None,
) -> tuple[float, TraderState]:
    """Consume one price; return the amount sold and the (mutated) state."""
    cfg = s.cfg
    if not cfg.p_min <= p <= cfg.p_max:
        raise PriceOutOfBounds(s.t - 1, p, cfg.p_min, cfg.p_max)
    if s.mode == "known" and s.t > s.T:
        raise StepAfterHorizon(f"step {s.t} beyond known horizon T={s.T}")

    if notify:
        if s.mode != "notice":
            raise NotifyInWrongMode(f"notification in {s.mode} mode")
        if s.notified:
            raise DoubleNotify(f"second notification at step {s.t}")
        if T_on_notify is None or T_on_notify < s.t:
            raise InconsistentNotify(f"notification at step {s.t} needs a horizon >= {s.t}")
        steps_left = T_on_notify - s.t + 1
        if ceil_snap(s.k_remaining / cfg.b) != steps_left:
            raise InconsistentNotify(
                f"remaining {s.k_remaining} does not need all {steps_left} steps at rate {cfg.b}"
            )
        s.notified = True
        s.T = T_on_notify
        if s.phase is Phase.PROACTIVE:
            s.phase = Phase.FORCED
            s.switch_step = s.t

    if s.phase is Phase.FORCED:
        alloc = _forced_amount(s)
    elif s.mode == "unknown":
        x_star = phihat_maximizer(s.phi, p, cfg.b)
        alloc = min(x_star, s.k_remaining)
        _commit(s, x_star)
    else:
        x_star = phi_maximizer(s.phi, p, cfg.b)
        if s.mode == "known" and compute_laxity(s.T, s.t, s.k_remaining, x_star, cfg.b) < 0:
            s.phase = Phase.FORCED
            s.switch_step = s.t
            alloc = _forced_amount(s)
        else:
            alloc = min(x_star, s.k_remaining)
            _commit(s, x_star)

    s.k_remaining -= alloc
    if s.k_remaining < 0.0:
        s.k_remaining = 0.0
    s.prices.append(p)
    s.allocations.append(alloc)
    s.levels.append(s.phi.level)
    s.t += 1
    return alloc, s


def _needs_notice(s: TraderState, T: int) -> bool:
    return s.k_remaining > BUDGET_SLACK and ceil_snap(s.k_remaining / s.cfg.b) >= T - s.t + 1


def run_trader(
    cfg: MarketConfig,
    scenario: HorizonScenario,
    alpha: float,
    prices: Sequence[float],
    state_out: Optional[list] = None,
) -> TradeSchedule:
    """Run the trader over a whole price sequence.

    For :class:`Notice` scenarios without an explicit ``notify_step`` the
    environment notifies at the first step whose laxity reaches zero.
    ``state_out``, when given, receives the final :class:`TraderState`.
    """
    validate_prices(cfg, prices)
    if isinstance(scenario, Known) and len(prices) != scenario.T:
        raise OnlineConversionError(f"known horizon T={scenario.T} but {len(prices)} prices")
    s = trader_new(cfg, scenario, alpha)
    for p in prices:
        notify, T_on = False, None
        if isinstance(scenario, Notice) and scenario.T_revealed is not None and not s.notified:
            if scenario.notify_step is not None:
                notify = s.t == scenario.notify_step
            else:
                notify = _needs_notice(s, scenario.T_revealed)
            T_on = scenario.T_revealed if notify else None
        trader_step(s, p, notify=notify, T_on_notify=T_on)
    if isinstance(scenario, Notice) and not s.notified and s.k_remaining > BUDGET_SLACK:
        logger.info("notice run ended without notification; %.6g units unsold", s.k_remaining)
    if state_out is not None:
        state_out.append(s)
    return s.schedule()
