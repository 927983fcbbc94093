"""Online conversion of a divisible budget under rate limits and horizon uncertainty.

The functional core lives in the submodules; :mod:`onlineconv.estimators`
offers a scikit-learn style facade over it.
"""
from .augmented import AugmentedState, augmented_new, augmented_step, run_augmented
from .domain import (
    BoxClass,
    HorizonScenario,
    Known,
    MarketConfig,
    Notice,
    Prediction,
    TradeSchedule,
    Unknown,
    check_schedule,
    classify_box,
)
from .exceptions import *  # noqa: F401,F403
from .harness import EcrReport, SweepSpec, compute_ecr, format_rows, run_sweep
from .instances import GeneratorSpec, generate, load_csv
from .oracle import opt_bruteforce, opt_offline, opt_reduced
from .pseudocost import PhiHatState, PhiState
from .ratios import (
    alpha_known,
    alpha_tau,
    bounds_augmented,
    cr_known,
    cr_known_no_box,
    cr_notice,
    cr_unknown,
    lambert_w0,
    tau_min,
)
from .trader import Phase, TraderState, run_trader, trader_new, trader_step

__version__ = "0.1.0"


_LAZY = {"PseudoMaxTrader", "HorizonPredictionTrader", "check_price_matrix"}


def __getattr__(name):
    # scikit-learn is imported only when the estimator facade is used
    if name in _LAZY:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
