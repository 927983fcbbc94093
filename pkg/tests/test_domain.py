import math

import numpy as np
import pytest

from onlineconv.domain import (
    BoxClass,
    Known,
    MarketConfig,
    Notice,
    Prediction,
    TradeSchedule,
    ceil_snap,
    check_schedule,
    classify_box,
    validate_config,
    validate_prices,
)
from onlineconv.exceptions import (
    BadLambda,
    BadPriceBounds,
    NonPositiveBudget,
    NonPositiveRate,
    OnlineConversionError,
    PriceOutOfBounds,
)


def test_theta_and_scaling():
    cfg = MarketConfig(10.0, 4.0, 2.0, 50.0)
    assert cfg.theta == 25.0
    half = cfg.scaled(0.5)
    assert (half.k, half.b, half.p_min, half.p_max) == (5.0, 2.0, 2.0, 50.0)
    assert half.k / half.b == cfg.k / cfg.b


@pytest.mark.parametrize(
    "cfg, exc",
    [
        (MarketConfig(0.0, 1.0, 1.0, 2.0), NonPositiveBudget),
        (MarketConfig(1.0, -1.0, 1.0, 2.0), NonPositiveRate),
        (MarketConfig(1.0, 1.0, 0.0, 2.0), BadPriceBounds),
        (MarketConfig(1.0, 1.0, 3.0, 2.0), BadPriceBounds),
        (MarketConfig(1.0, 1.0, math.nan, 2.0), BadPriceBounds),
    ],
)
def test_validate_config_rejects(cfg, exc):
    with pytest.raises(exc):
        validate_config(cfg)
    assert issubclass(exc, ValueError)


def test_equal_bounds_are_valid():
    MarketConfig(1.0, 1.0, 3.0, 3.0).validated()


@pytest.mark.parametrize(
    "T, k, b, expected",
    [
        (6, 12, 2, BoxClass.TRIVIAL_FORCED),
        (6, 12, 1, BoxClass.TRIVIAL_FORCED),
        (6, 12, 3, BoxClass.NON_TRIVIAL),
        (6, 12, 12, BoxClass.TRIVIAL_UNBOUNDED),
        (6, 12, 40, BoxClass.TRIVIAL_UNBOUNDED),
        (1, 5, 5, BoxClass.TRIVIAL_FORCED),
        (1, 5, 6, BoxClass.TRIVIAL_UNBOUNDED),
    ],
)
def test_classify_box(T, k, b, expected):
    assert classify_box(MarketConfig(k, b, 1.0, 2.0), T) is expected


def test_validate_prices_reports_index(cfg):
    with pytest.raises(PriceOutOfBounds) as info:
        validate_prices(cfg, [1.0, 50.0, 100.5])
    assert info.value.index == 2


def test_ceil_snap():
    assert ceil_snap(3.0000000001) == 3
    assert ceil_snap(2.9999999999) == 3
    assert ceil_snap(3.01) == 4
    assert ceil_snap(0.1 * 3 / 0.1) == 3


def test_schedule_is_read_only():
    s = TradeSchedule.from_allocations([1.0, 2.0], [0.5, 1.5])
    assert s.revenue == pytest.approx(3.5)
    assert s.total == 2.0 and len(s) == 2
    with pytest.raises(ValueError):
        s.allocations[0] = 3.0


def test_check_schedule(cfg):
    check_schedule(TradeSchedule.from_allocations(np.ones(3), [5.0, 5.0, 2.0]), cfg)
    with pytest.raises(OnlineConversionError):
        check_schedule(TradeSchedule.from_allocations(np.ones(3), [5.1, 5.0, 1.0]), cfg)
    with pytest.raises(OnlineConversionError):
        check_schedule(TradeSchedule.from_allocations(np.ones(3), [5.0, 5.0, 2.1]), cfg)


def test_scenarios_validate():
    with pytest.raises(OnlineConversionError):
        Known(0)
    with pytest.raises(BadLambda):
        Prediction(5, 1.5)
    with pytest.raises(OnlineConversionError):
        Notice(T_revealed=5, notify_step=6)
    with pytest.raises(OnlineConversionError):
        Notice(notify_step=2)
    assert {Known(3).name, Notice().name, Prediction(2, 0.0).name} == {"known", "notice", "prediction"}
