"""Pseudo-cost functions and their per-step pseudo-revenue maximizers.

Two families are provided:

* ``phi`` -- the history-adaptive pseudo-cost used for known and notified
  horizons.  Its state is the running product ``prod(1 - alpha * x_i / k)``
  over committed trades.
* ``phihat`` -- the flat-then-exponential pseudo-cost used when the horizon
  is unknown.  Its state is the cumulative amount traded ``c``.

Pseudo-revenue of trading ``x`` at price ``p`` is
``p * x - integral_0^x pseudo_cost(beta) dbeta``; both integrals are in
closed form.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .domain import BUDGET_SLACK
from .exceptions import BadAlpha, BudgetExceeded, OnlineConversionError, SingularEvaluation


def _check_alpha(alpha: float) -> None:
    if not alpha >= 1.0:
        raise BadAlpha(f"alpha must be >= 1, got {alpha}")


@dataclass(frozen=True)
class PhiState:
    alpha: float
    k: float
    p_min: float
    hist_product: float = 1.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.k > 0:
            raise OnlineConversionError("PhiState needs k > 0")
        if not 0.0 < self.hist_product <= 1.0:
            raise OnlineConversionError(f"hist_product {self.hist_product} outside (0, 1]")

    @property
    def pole(self) -> float:
        """Amount at which the pseudo-cost diverges (``k / alpha``)."""
        return self.k / self.alpha

    @property
    def level(self) -> float:
        """Current marginal pseudo-cost, i.e. ``phi(0)``."""
        return phi_eval(self, 0.0)


def phi_eval(s: PhiState, beta: float) -> float:
    if beta < 0:
        raise OnlineConversionError(f"beta must be >= 0, got {beta}")
    gap = 1.0 - s.alpha * beta / s.k
    if gap <= 0.0:
        raise SingularEvaluation(f"alpha*beta/k = {s.alpha * beta / s.k} >= 1")
    return s.p_min + (s.alpha - 1.0) * s.p_min / (gap * s.hist_product)


def phi_integral(s: PhiState, x: float) -> float:
    """``integral_0^x phi(beta) dbeta`` via the logarithmic antiderivative."""
    if x < 0:
        raise OnlineConversionError(f"x must be >= 0, got {x}")
    ratio = s.alpha * x / s.k
    if ratio >= 1.0:
        raise SingularEvaluation(f"alpha*x/k = {ratio} >= 1")
    scale = (s.alpha - 1.0) * s.p_min / s.hist_product
    return s.p_min * x - scale * (s.k / s.alpha) * math.log1p(-ratio)


def phi_commit(s: PhiState, x: float) -> PhiState:
    if x < 0:
        raise OnlineConversionError(f"cannot commit negative amount {x}")
    factor = 1.0 - s.alpha * x / s.k
    if factor <= 0.0:
        raise SingularEvaluation(f"alpha*x/k = {s.alpha * x / s.k} >= 1")
    return replace(s, hist_product=s.hist_product * factor)


def phi_maximizer(s: PhiState, p: float, cap: float) -> float:
    """Maximizer of ``p*x - int_0^x phi`` over ``[0, cap]``.

    The unconstrained maximizer solves ``phi(x) = p``; it always lies below
    ``k / alpha`` and is clipped by ``cap``.
    """
    level = phi_eval(s, 0.0)
    if cap <= 0.0 or p <= level:
        return 0.0
    x = (s.k / s.alpha) * (1.0 - (level - s.p_min) / (p - s.p_min))
    return min(cap, x)


def pseudo_revenue(s: PhiState, p: float, x: float) -> float:
    return p * x - phi_integral(s, x)


# -- unknown horizon ---------------------------------------------------------

@dataclass(frozen=True)
class PhiHatState:
    """State of the unknown-horizon pseudo-cost.

    The pseudo-cost as a function of the cumulative amount ``u = c + beta``
    is ``p_min`` up to ``k / alpha`` and ``p_min * exp(alpha * u / k - 1)``
    beyond; the two pieces meet continuously at ``k / alpha``.
    """

    alpha: float
    k: float
    p_min: float
    c: float = 0.0

    def __post_init__(self):
        _check_alpha(self.alpha)
        if not self.k > 0:
            raise OnlineConversionError("PhiHatState needs k > 0")
        if self.c < 0 or self.c > self.k + BUDGET_SLACK:
            raise BudgetExceeded(f"cumulative amount {self.c} outside [0, {self.k}]")

    @property
    def junction(self) -> float:
        return self.k / self.alpha

    @property
    def level(self) -> float:
        return phihat_eval(self, 0.0)


def _phihat_at(s: PhiHatState, u: float) -> float:
    if u <= s.junction:
        return s.p_min
    return s.p_min * math.exp(s.alpha * u / s.k - 1.0)


def phihat_eval(s: PhiHatState, beta: float) -> float:
    if beta < 0:
        raise OnlineConversionError(f"beta must be >= 0, got {beta}")
    if beta > s.k - s.c + BUDGET_SLACK:
        raise BudgetExceeded(f"beta {beta} exceeds remaining budget {s.k - s.c}")
    return _phihat_at(s, s.c + beta)


def phihat_integral(s: PhiHatState, x: float) -> float:
    """``integral_0^x phihat(beta) dbeta``, split at the junction."""
    if x < 0:
        raise OnlineConversionError(f"x must be >= 0, got {x}")
    if x > s.k - s.c + BUDGET_SLACK:
        raise BudgetExceeded(f"x {x} exceeds remaining budget {s.k - s.c}")
    lo, hi = s.c, s.c + x
    flat = max(0.0, min(hi, s.junction) - lo)
    total = s.p_min * flat
    start = max(lo, s.junction)
    if hi > start:
        scale = s.p_min * s.k / s.alpha
        total += scale * (math.exp(s.alpha * hi / s.k - 1.0) - math.exp(s.alpha * start / s.k - 1.0))
    return total


def phihat_maximizer(s: PhiHatState, p: float, cap: float) -> float:
    """Amount at which ``phihat`` first reaches ``p``, clipped to the room left.

    At ``p == p_min`` the objective is flat on the flat branch; the largest
    indifferent amount (up to the junction) is returned.
    """
    room = min(cap, s.k - s.c)
    if room <= 0.0 or p < s.p_min:
        return 0.0
    target = (s.k / s.alpha) * (1.0 + math.log(p / s.p_min))
    return min(room, max(0.0, target - s.c))


def phihat_commit(s: PhiHatState, x: float) -> PhiHatState:
    if x < 0:
        raise OnlineConversionError(f"cannot commit negative amount {x}")
    c = s.c + x
    if c > s.k + BUDGET_SLACK:
        raise BudgetExceeded(f"cumulative amount {c} exceeds budget {s.k}")
    return replace(s, c=min(c, s.k))


def phihat_pseudo_revenue(s: PhiHatState, p: float, x: float) -> float:
    return p * x - phihat_integral(s, x)
