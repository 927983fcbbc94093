import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import lambertw

from onlineconv.exceptions import BadLambda, BadTheta, DomainError, InfeasibleHorizon
from onlineconv.ratios import (
    RatioQuery,
    alpha_known,
    alpha_tau,
    alpha_tau_residual,
    bounds_augmented,
    cr_known,
    cr_known_no_box,
    cr_notice,
    cr_unknown,
    lambert_w0,
    tau_min,
)


@pytest.mark.parametrize("x", [-1 / math.e + 1e-9, -0.3, -0.01, 1e-8, 0.5, 1.0, math.e, 10.0, 1e3, 1e8, 1e250])
def test_lambert_matches_scipy(x):
    # W is ill-conditioned at the branch point; scipy itself is only ~1e-12 there
    rel = 1e-11 if x < -0.36 else 1e-13
    assert lambert_w0(x) == pytest.approx(lambertw(x).real, rel=rel, abs=1e-15)


def test_lambert_special_points():
    assert lambert_w0(0.0) == 0.0
    assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-15)
    assert lambert_w0(-1 / math.e) == pytest.approx(-1.0, abs=1e-7)
    with pytest.raises(DomainError):
        lambert_w0(-0.5)


@settings(max_examples=200, deadline=None)
@given(st.floats(-1 / math.e + 1e-6, 1e6))
def test_lambert_identity(x):
    w = lambert_w0(x)
    assert w * math.exp(w) == pytest.approx(x, rel=1e-12, abs=1e-12)


def test_closed_forms():
    assert cr_unknown(math.e ** 2) == 3.0
    assert cr_unknown(200) == pytest.approx(6.298317366548036, rel=1e-14)
    assert cr_notice(1.0) == 1.0
    assert cr_notice(math.e ** 2 + 1) == pytest.approx(2.0, abs=1e-12)
    with pytest.raises(BadTheta):
        cr_unknown(0.5)


def _alpha_tau_brentq(theta, tau):
    from scipy.optimize import brentq
    return brentq(lambda a: a - tau * (1 - ((a - 1) / (theta - 1)) ** (1 / tau)), 1 + 1e-15, theta, xtol=1e-14)


@pytest.mark.parametrize("theta", [2.0, 10.0, 100.0, 200.0])
@pytest.mark.parametrize("tau", [2, 5, 18, 20, 100])
def test_alpha_tau_independent_root(theta, tau):
    a = alpha_tau(theta, tau)
    assert abs(alpha_tau_residual(a, theta, tau)) < 1e-10
    assert a == pytest.approx(_alpha_tau_brentq(theta, tau), rel=1e-10)


def test_alpha_tau_edges():
    assert alpha_tau(100.0, 1) == 1.0
    assert alpha_tau(1.0, 50) == 1.0
    assert alpha_tau(100.0, 18) == pytest.approx(3.370529045642905, rel=1e-12)
    for theta in (2.0, 10.0, 100.0):
        assert abs(alpha_tau(theta, 10 ** 6) - cr_notice(theta)) < 1e-3


@pytest.mark.parametrize("T, k, b, expected", [(6, 12, 3, 3), (6, 12, 2, 1), (6, 12, 12, 6), (20, 12, 5, 18)])
def test_tau_min(T, k, b, expected):
    assert tau_min(T, k, b) == expected


def test_cr_known():
    assert cr_known(100.0, 20, 12, 5) == alpha_tau(100.0, 18)
    assert cr_known(100.0, 6, 12, 2) == 1.0
    assert cr_known(100.0, 1, 3, 5) == 1.0
    assert cr_known(100.0, 20, 12, 50) == cr_known_no_box(100.0, 20)
    with pytest.raises(InfeasibleHorizon):
        cr_known(100.0, 6, 12, 1)
    assert alpha_known(100.0, 6, 12, 1) == 1.0


@settings(max_examples=100, deadline=None)
@given(st.floats(1.01, 500), st.integers(1, 200), st.floats(0.1, 50), st.floats(0.01, 3))
def test_ratio_ordering(theta, T, k, b_frac):
    b = max(b_frac * k, k / T)
    ck = cr_known(theta, T, k, b)
    slack = 1e-9
    assert 1.0 - slack <= ck <= cr_known_no_box(theta, T) + slack
    assert cr_known_no_box(theta, T) <= cr_notice(theta) + slack
    assert cr_notice(theta) <= cr_unknown(theta) + slack


@settings(max_examples=50, deadline=None)
@given(st.floats(1.01, 500), st.integers(1, 100))
def test_alpha_tau_monotone(theta, tau):
    assert alpha_tau(theta, tau) < alpha_tau(theta, tau + 1)
    assert alpha_tau(theta, tau) <= alpha_tau(theta * 1.5, tau)


def test_bounds_augmented():
    theta = math.e
    cons, rob = bounds_augmented(theta, 10, 12, 5, 0.5, alpha1=1.5, alpha2=2.0)
    assert rob == pytest.approx(4.0)
    assert cons == pytest.approx(1.5 * 2.0 / (2.0 + 0.5 * (1.5 - 2.0)))
    cons, rob = bounds_augmented(100.0, 20, 12, 5, 1.0)
    assert cons == pytest.approx(cr_unknown(100.0)) and rob == pytest.approx(cr_unknown(100.0))
    cons, rob = bounds_augmented(100.0, 20, 12, 5, 0.0)
    assert cons == pytest.approx(cr_known(100.0, 20, 12, 5)) and rob == math.inf
    with pytest.raises(BadLambda):
        bounds_augmented(100.0, 20, 12, 5, -0.1)


def test_ratio_query():
    out = RatioQuery(theta=100.0, T=20, k=12, b=5, lam=0.5).evaluate()
    assert out["tau_min"] == 18
    assert set(out) >= {"cr_unknown", "cr_notice", "cr_known", "cr_known_no_box", "consistency", "robustness"}
    assert set(RatioQuery(theta=10.0).evaluate()) == {"theta", "cr_unknown", "cr_notice"}


def test_known_ratio_of_one_is_unreachable_when_k_over_b_fills_horizon():
    """T=2, k=1.5, b=1: the formula gives 1, yet any first-step sale loses on one continuation."""
    from onlineconv.domain import MarketConfig
    from onlineconv.oracle import opt_offline

    cfg = MarketConfig(1.5, 1.0, 1.0, 100.0)
    assert cr_known(cfg.theta, 2, cfg.k, cfg.b) == 1.0
    best = math.inf
    for x1 in np.linspace(0.5, 1.0, 501):  # step 1 must sell at least k - b
        worst = 0.0
        for p1, p2 in ((1.0, 100.0), (100.0, 1.0)):
            alg = p1 * x1 + p2 * (cfg.k - x1)
            worst = max(worst, opt_offline(cfg, [p1, p2]).revenue / alg)
        best = min(best, worst)
    assert best > 1.3
