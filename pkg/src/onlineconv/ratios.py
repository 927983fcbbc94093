"""Theoretical competitive ratios.

Closed forms (unknown and notified horizons), the root equation shared by
the known-horizon variants, the earliest switching step, and the
robustness/consistency bounds of the learning-augmented trader.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .domain import BoxClass, MarketConfig, ceil_snap, classify_box
from .exceptions import BadLambda, BadTheta, DomainError, InfeasibleHorizon, NoConvergence

_INV_E = math.exp(-1.0)
MAX_ITER = 200


def lambert_w0(x: float) -> float:
    """Principal branch of the Lambert-W function.

    Halley iteration from a branch-aware starting point, with a bisection
    fallback should the iteration stall.
    """
    if math.isnan(x) or x < -_INV_E - 1e-15:
        raise DomainError(f"lambert_w0 undefined for x = {x} < -1/e")
    if x == 0.0:
        return 0.0
    if x <= -_INV_E:
        return -1.0
    if math.isinf(x):
        return math.inf

    if x < -0.25:
        w = -1.0 + math.sqrt(2.0 * (1.0 + math.e * x))
    elif x < 3.0:
        w = math.log1p(x) * 0.75 if x > 0 else x * (1.0 - x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)

    for _ in range(MAX_ITER):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        step = f / denom
        w_new = w - step
        if not math.isfinite(w_new) or w_new < -1.0:
            break
        if abs(step) <= 4e-16 * (1.0 + abs(w_new)):
            return w_new
        w = w_new
    else:
        return w
    return _lambert_bisect(x)


def _lambert_bisect(x: float) -> float:
    lo, hi = -1.0, max(1.0, math.log(x) if x > 1 else 1.0)
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid * math.exp(mid) < x:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * (1.0 + abs(mid)):
            break
    return 0.5 * (lo + hi)


def _check_theta(theta: float) -> None:
    if not theta >= 1.0 or math.isinf(theta):
        raise BadTheta(f"theta must be a finite value >= 1, got {theta}")


def cr_unknown(theta: float) -> float:
    _check_theta(theta)
    return 1.0 + math.log(theta)


def cr_notice(theta: float) -> float:
    _check_theta(theta)
    if theta == 1.0:
        return 1.0
    return 1.0 + lambert_w0((theta - 1.0) / math.e)


def alpha_tau_residual(alpha: float, theta: float, tau: int) -> float:
    """``alpha - tau * (1 - ((alpha - 1)/(theta - 1))**(1/tau))``."""
    q = (alpha - 1.0) / (theta - 1.0)
    if q <= 0.0:
        return alpha - tau
    # tau*(1 - q**(1/tau)) without cancellation for large tau
    return alpha + tau * math.expm1(math.log(q) / tau)


def alpha_tau(theta: float, tau: int) -> float:
    """Root in ``[1, theta]`` of ``alpha = tau * (1 - ((alpha-1)/(theta-1))**(1/tau))``.

    The residual is strictly increasing in alpha on that interval, so plain
    bisection always converges.
    """
    _check_theta(theta)
    if tau < 1:
        raise DomainError(f"tau must be >= 1, got {tau}")
    if theta == 1.0 or tau == 1:
        return 1.0
    lo, hi = 1.0, theta
    for _ in range(MAX_ITER):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if alpha_tau_residual(mid, theta, tau) < 0.0:
            lo = mid
        else:
            hi = mid
    else:
        raise NoConvergence(f"alpha_tau({theta}, {tau}) did not converge")
    root = lo if abs(alpha_tau_residual(lo, theta, tau)) <= abs(alpha_tau_residual(hi, theta, tau)) else hi
    if abs(alpha_tau_residual(root, theta, tau)) >= 1e-10:
        raise NoConvergence(f"alpha_tau({theta}, {tau}) residual too large")
    return root


def tau_min(T: int, k: float, b: float) -> int:
    """Earliest step at which the known-horizon trader can be forced."""
    if T < 1:
        raise DomainError(f"T must be >= 1, got {T}")
    box = classify_box(MarketConfig(k, b, 1.0, 1.0), T)
    if box is BoxClass.TRIVIAL_FORCED:
        return 1
    if box is BoxClass.TRIVIAL_UNBOUNDED:
        return T
    return T - ceil_snap(k / b) + 1


def cr_known(theta: float, T: int, k: float, b: float) -> float:
    """Optimal ratio for a known horizon under rate limit ``b``.

    Pinned to 1 when ``b <= k/T`` (every step is forced, matching the
    offline optimum); rejected when ``b*T < k``.
    """
    _check_theta(theta)
    if b * T < k * (1.0 - 1e-12):
        raise InfeasibleHorizon(f"b*T = {b * T} < k = {k}: budget cannot be spent")
    if theta == 1.0:
        return 1.0
    return alpha_tau(theta, tau_min(T, k, b))


def cr_known_no_box(theta: float, T: int) -> float:
    return alpha_tau(theta, T)


def alpha_known(theta: float, T: int, k: float, b: float) -> float:
    """Balance parameter for the known-horizon trader.

    Same as :func:`cr_known` except that infeasible horizons (``b*T < k``)
    resolve to 1: the trader is forced on every step and sells exactly
    what the offline optimum sells.
    """
    try:
        return cr_known(theta, T, k, b)
    except InfeasibleHorizon:
        return 1.0


def bounds_augmented(
    theta: float,
    T_pred: int,
    k: float,
    b: float,
    lam: float,
    alpha1: Optional[float] = None,
    alpha2: Optional[float] = None,
) -> tuple[float, float]:
    """(consistency, robustness) of the prediction-augmented trader.

    Robustness is ``math.inf`` at ``lam == 0``.  The budget/rate split does
    not change ``k/b``, so the known-horizon ratio is evaluated on ``(k, b)``.
    """
    if not 0.0 <= lam <= 1.0:
        raise BadLambda(f"lambda must lie in [0, 1], got {lam}")
    a1 = alpha_known(theta, T_pred, k, b) if alpha1 is None else alpha1
    a2 = cr_unknown(theta) if alpha2 is None else alpha2
    consistency = a1 * a2 / (a2 + lam * (a1 - a2))
    robustness = math.inf if lam == 0.0 else a2 / lam
    return consistency, robustness


@dataclass(frozen=True)
class RatioQuery:
    theta: float
    T: Optional[int] = None
    k: Optional[float] = None
    b: Optional[float] = None
    lam: Optional[float] = None

    def evaluate(self) -> dict:
        """Every quantity the supplied fields allow, keyed by name."""
        out = {
            "theta": self.theta,
            "cr_unknown": cr_unknown(self.theta),
            "cr_notice": cr_notice(self.theta),
        }
        if self.T is not None:
            out["cr_known_no_box"] = cr_known_no_box(self.theta, self.T)
            if self.k is not None and self.b is not None:
                out["tau_min"] = tau_min(self.T, self.k, self.b)
                out["cr_known"] = cr_known(self.theta, self.T, self.k, self.b)
                if self.lam is not None:
                    cons, rob = bounds_augmented(self.theta, self.T, self.k, self.b, self.lam)
                    out["consistency"] = cons
                    out["robustness"] = rob
        return out
