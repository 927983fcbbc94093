"""scikit-learn style wrappers around the step-wise traders.

Each row of ``X`` is one price sequence (one trading episode).  ``fit``
validates the market description and resolves the balance parameter;
``transform`` replays every row through a fresh trader and returns the
allocation matrix.  Nothing is learned from data: ``fit`` only pins the
configuration, so a fitted estimator is reusable across price sets with the
same length.
"""
from __future__ import annotations

from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .domain import Known, MarketConfig, Notice, Prediction, Unknown, validate_prices
from .exceptions import OnlineConversionError
from .harness import compute_ecr, resolve_alpha

HORIZONS = ("known", "notice", "unknown")


def check_price_matrix(X, cfg: Optional[MarketConfig] = None) -> np.ndarray:
    """2-D float array of finite prices, each inside ``cfg``'s range if given.

    A single 1-D sequence is promoted to one row.
    """
    X = np.asarray(X, dtype=float) if not hasattr(X, "shape") else X
    if np.ndim(X) == 1:
        X = np.reshape(X, (1, -1))
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if cfg is not None:
        for row in X:
            validate_prices(cfg, row)
    return X


class _TraderBase(TransformerMixin, BaseEstimator):
    def _market(self) -> MarketConfig:
        return MarketConfig(float(self.k), float(self.b), float(self.p_min), float(self.p_max)).validated()

    def _check_width(self, X):
        check_is_fitted(self, "config_")
        X = check_price_matrix(X, self.config_)
        if self.n_steps_ is not None and X.shape[1] != self.n_steps_:
            raise OnlineConversionError(f"fitted for {self.n_steps_} steps, got {X.shape[1]}")
        return X

    def _reports(self, X):
        X = self._check_width(X)
        return [compute_ecr(self.config_, self._scenario(X.shape[1]), row, self.alpha_) for row in X]

    def transform(self, X):
        """Allocation matrix with the shape of ``X``."""
        return np.vstack([sched.allocations for _, sched in self._reports(X)])

    def revenue(self, X) -> np.ndarray:
        return np.array([sched.revenue for _, sched in self._reports(X)])

    def ecr(self, X) -> np.ndarray:
        """Per-row OPT/ALG."""
        return np.array([rep.ecr for rep, _ in self._reports(X)])

    def score(self, X, y=None) -> float:
        """Mean ALG/OPT (higher is better, at most 1)."""
        return float(np.mean(1.0 / self.ecr(X)))


class PseudoMaxTrader(_TraderBase):
    """Pseudo-cost trader for a known, notified or unknown horizon.

    Parameters
    ----------
    k : float
        Budget to sell per episode.
    b : float
        Rate limit per step.
    p_min, p_max : float
        Price bounds.
    horizon : {"known", "notice", "unknown"}
        What the trader knows about the episode length.
    alpha : float or "auto"
        Balance parameter; ``"auto"`` uses the ratio-optimal value.

    Attributes
    ----------
    config_ : MarketConfig
    theta_ : float
    n_steps_ : int
        Episode length seen in ``fit``.
    alpha_ : float
        Resolved balance parameter.

    Examples
    --------
    >>> import numpy as np
    >>> est = PseudoMaxTrader(k=12, b=3, p_min=1, p_max=100).fit(np.ones((1, 6)))
    >>> float(est.transform([[1, 1, 1, 1, 100, 100]]).sum())
    12.0
    """

    def __init__(self, k=12.0, b=5.0, p_min=1.0, p_max=100.0, horizon="known", alpha="auto"):
        self.k = k
        self.b = b
        self.p_min = p_min
        self.p_max = p_max
        self.horizon = horizon
        self.alpha = alpha

    def _scenario(self, T: int):
        if self.horizon == "known":
            return Known(T)
        if self.horizon == "notice":
            return Notice(T_revealed=T)
        return Unknown()

    def fit(self, X, y=None):
        if self.horizon not in HORIZONS:
            raise OnlineConversionError(f"horizon must be one of {HORIZONS}, got {self.horizon!r}")
        cfg = self._market()
        X = check_price_matrix(X, cfg)
        self.config_ = cfg
        self.theta_ = cfg.theta
        self.n_steps_ = X.shape[1]
        self.alpha_ = resolve_alpha(cfg, self._scenario(self.n_steps_), self.alpha)
        return self


class HorizonPredictionTrader(_TraderBase):
    """Trader that splits its budget between a predicted and an unknown horizon.

    ``lam`` is the share given to the horizon-agnostic part; ``T_pred=None``
    trusts the episode length seen in ``fit``.
    """

    def __init__(self, k=12.0, b=5.0, p_min=1.0, p_max=100.0, T_pred=None, lam=0.5,
                 alpha1: Union[str, float] = "auto", alpha2: Union[str, float] = "auto"):
        self.k = k
        self.b = b
        self.p_min = p_min
        self.p_max = p_max
        self.T_pred = T_pred
        self.lam = lam
        self.alpha1 = alpha1
        self.alpha2 = alpha2

    def _scenario(self, T: int):
        return Prediction(self.T_pred_, float(self.lam))

    def fit(self, X, y=None):
        cfg = self._market()
        X = check_price_matrix(X, cfg)
        self.config_ = cfg
        self.theta_ = cfg.theta
        self.n_steps_ = X.shape[1]
        self.T_pred_ = int(self.T_pred) if self.T_pred is not None else self.n_steps_
        self.alpha_ = resolve_alpha(cfg, self._scenario(self.n_steps_), (self.alpha1, self.alpha2))
        return self
