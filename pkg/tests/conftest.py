import numpy as np
import pytest
from hypothesis import strategies as st

from onlineconv.domain import MarketConfig


@pytest.fixture
def cfg():
    return MarketConfig(k=12.0, b=5.0, p_min=1.0, p_max=100.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def market_configs(draw, max_theta=200.0):
    p_min = draw(st.floats(0.5, 20.0))
    theta = draw(st.floats(1.0, max_theta))
    k = draw(st.floats(0.5, 100.0))
    b = draw(st.floats(0.05, 2.0)) * k
    return MarketConfig(k, b, p_min, p_min * theta)


@st.composite
def configs_with_prices(draw, min_len=1, max_len=30):
    cfg = draw(market_configs())
    n = draw(st.integers(min_len, max_len))
    u = draw(st.lists(st.floats(0.0, 1.0), min_size=n, max_size=n))
    prices = np.clip(cfg.p_min + np.array(u) * (cfg.p_max - cfg.p_min), cfg.p_min, cfg.p_max)
    return cfg, prices
