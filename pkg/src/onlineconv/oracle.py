"""Offline optimum of the conversion LP.

``max sum p_t x_t  s.t.  sum x_t <= k,  0 <= x_t <= cap_t``

is a fractional knapsack with unit weights, so filling the highest prices
first is optimal.  A grid dynamic program provides an independent check.
"""
from __future__ import annotations

from typing import Sequence

import numpy as np

from .domain import MarketConfig, TradeSchedule, validate_config, validate_prices
from .exceptions import OnlineConversionError, TooLarge


def greedy_fill(prices: Sequence[float], caps: Sequence[float], budget: float) -> np.ndarray:
    """Fill per-step caps in descending price order until ``budget`` is spent.

    Ties go to the earlier step.
    """
    p = np.asarray(prices, dtype=float)
    caps = np.asarray(caps, dtype=float)
    x = np.zeros_like(p)
    left = budget
    for t in np.argsort(-p, kind="stable"):
        if left <= 0.0:
            break
        x[t] = min(caps[t], left)
        left -= x[t]
    return x


def opt_offline(cfg: MarketConfig, prices: Sequence[float]) -> TradeSchedule:
    validate_config(cfg)
    validate_prices(cfg, prices)
    x = greedy_fill(prices, np.full(len(prices), cfg.b), cfg.k)
    return TradeSchedule.from_allocations(prices, x)


def step_bounds(cfg: MarketConfig, tau: int) -> np.ndarray:
    """Caps of the reduced problem: ``b`` before ``tau`` and ``k`` at ``tau``."""
    caps = np.full(tau, cfg.b, dtype=float)
    caps[-1] = cfg.k
    return caps


def opt_reduced(cfg: MarketConfig, reduced_prices: Sequence[float]) -> TradeSchedule:
    """Optimum over a shortened horizon whose last step may absorb all of ``k``."""
    validate_config(cfg)
    validate_prices(cfg, reduced_prices)
    tau = len(reduced_prices)
    if tau < 1:
        raise OnlineConversionError("reduced sequence must have length >= 1")
    x = greedy_fill(reduced_prices, step_bounds(cfg, tau), cfg.k)
    return TradeSchedule.from_allocations(reduced_prices, x)


def opt_bruteforce(cfg: MarketConfig, prices: Sequence[float], grid: float) -> float:
    """Best revenue over allocations restricted to multiples of ``grid``.

    Exact over the grid (dynamic program on the number of grid units
    used), so it is within ``p_max * grid * T`` of the LP optimum.
    """
    validate_config(cfg)
    validate_prices(cfg, prices)
    T = len(prices)
    if T > 8 or grid < cfg.k / 64 * (1 - 1e-12):
        raise TooLarge(f"brute force limited to T <= 8 and grid >= k/64 (T={T}, grid={grid})")
    units = int(np.floor(cfg.k / grid + 1e-9))
    per_step = int(np.floor(cfg.b / grid + 1e-9))
    best = np.full(units + 1, -np.inf)
    best[0] = 0.0
    for p in prices:
        nxt = best.copy()
        for used in range(units + 1):
            if best[used] == -np.inf:
                continue
            for u in range(1, min(per_step, units - used) + 1):
                cand = best[used] + p * u * grid
                if cand > nxt[used + u]:
                    nxt[used + u] = cand
        best = nxt
    return float(best.max())


def dual_certificate(cfg: MarketConfig, prices: Sequence[float], marginal_value: float) -> float:
    """Dual objective ``k*phi + b*sum(max(0, p_t - phi))`` for a given ``phi``.

    Any ``phi >= 0`` gives an upper bound on the offline optimum.
    """
    p = np.asarray(prices, dtype=float)
    mu = np.maximum(0.0, p - marginal_value)
    return float(cfg.k * marginal_value + cfg.b * mu.sum())
