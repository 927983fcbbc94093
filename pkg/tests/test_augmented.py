import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from onlineconv.augmented import augmented_new, augmented_step, default_alphas, run_augmented
from onlineconv.domain import Known, MarketConfig, Unknown, check_schedule
from onlineconv.exceptions import BadAlpha, BadLambda
from onlineconv.trader import run_trader

from conftest import configs_with_prices


@settings(max_examples=80, deadline=None)
@given(configs_with_prices(min_len=1, max_len=30))
def test_degenerate_splits_bit_match(data):
    cfg, prices = data
    T = len(prices)
    a1, a2 = default_alphas(cfg, T)
    if cfg.b * T >= cfg.k:
        np.testing.assert_array_equal(
            run_augmented(cfg, T, 0.0, a1, a2, prices).allocations,
            run_trader(cfg, Known(T), a1, prices).allocations,
        )
    np.testing.assert_array_equal(
        run_augmented(cfg, T, 1.0, a1, a2, prices).allocations,
        run_trader(cfg, Unknown(), a2, prices).allocations,
    )


@settings(max_examples=80, deadline=None)
@given(configs_with_prices(min_len=1, max_len=30), st.floats(0, 1), st.floats(0.3, 2.0))
def test_combined_schedule_feasible(data, lam, factor):
    cfg, prices = data
    T_pred = max(1, int(round(factor * len(prices))))
    state = []
    sched = run_augmented(cfg, T_pred, lam, None, None, prices, state_out=state)
    check_schedule(sched, cfg)
    s = state[0]
    np.testing.assert_allclose(np.add(s.part1, s.part2), sched.allocations)


def test_known_part_silent_after_prediction(cfg):
    s = augmented_new(cfg, 2, 0.5)
    for p in [1.0, 1.0, 100.0, 100.0]:
        augmented_step(s, p)
    assert s.part1[2:] == [0.0, 0.0]


def test_validation(cfg):
    with pytest.raises(BadLambda):
        augmented_new(cfg, 5, 1.2)
    with pytest.raises(BadAlpha):
        augmented_new(cfg, 5, 0.5, alpha1=0.5)
    s = augmented_new(cfg, 5, 0.0)
    assert s.sub2 is None and s.sub1.cfg.k == cfg.k
