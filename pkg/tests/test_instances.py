import numpy as np
import pytest

from onlineconv.domain import Known, MarketConfig
from onlineconv.exceptions import BadTheta, OnlineConversionError, ParseError, PriceOutOfBounds
from onlineconv.harness import compute_ecr
from onlineconv.instances import (
    KINDS,
    GeneratorSpec,
    format_csv,
    gen_daily,
    gen_switch_family,
    gen_worst_increasing,
    generate,
    load_csv,
    parse_prices,
)
from onlineconv.ratios import alpha_tau

BOX_FREE = MarketConfig(1.0, 1.0, 1.0, 100.0)


@pytest.mark.parametrize("kind", [k for k in KINDS if k != "csv"])
def test_generators_stay_in_bounds_and_are_seeded(kind, cfg):
    spec = GeneratorSpec(kind, 25, seed=7, params={"tau": 10} if kind == "switch" else {})
    a, b = generate(spec, cfg), generate(spec, cfg)
    assert len(a) == 25
    assert np.all((a >= cfg.p_min) & (a <= cfg.p_max))
    np.testing.assert_array_equal(a, b)


def test_unknown_kind():
    with pytest.raises(OnlineConversionError):
        GeneratorSpec("nope", 3)


@pytest.mark.parametrize("theta, T", [(10.0, 10), (100.0, 20), (100.0, 5), (2.0, 3)])
def test_worst_increasing_reaches_ratio(theta, T):
    cfg = MarketConfig(1.0, 1.0, 1.0, theta)
    prices = gen_worst_increasing(cfg, T)
    assert np.all(np.diff(prices) > 0) and prices[-1] == theta
    rep, sched = compute_ecr(cfg, Known(T), prices)
    assert rep.ecr == pytest.approx(alpha_tau(theta, T), rel=1e-9)
    np.testing.assert_allclose(sched.allocations, 1.0 / T, rtol=1e-9)


def test_worst_increasing_edges():
    assert list(gen_worst_increasing(BOX_FREE, 1)) == [100.0]
    with pytest.raises(BadTheta):
        gen_worst_increasing(MarketConfig(1.0, 1.0, 2.0, 2.0), 4)


def test_switch_family(cfg):
    p = gen_switch_family(cfg, 6, 3, prefix=[50.0, 60.0])
    assert list(p) == [50.0, 60.0, 1.0, 1.0, 1.0, 1.0]
    assert list(gen_switch_family(cfg, 3, 1)) == [1.0, 1.0, 1.0]
    with pytest.raises(OnlineConversionError):
        gen_switch_family(cfg, 3, 4)
    with pytest.raises(OnlineConversionError):
        gen_switch_family(cfg, 3, 2, prefix=[1.0, 2.0])


def test_daily_has_period():
    cfg = MarketConfig(68.0, 6.0, 5.0, 1000.0)
    p = gen_daily(cfg, 576, seed=1, period=288, noise=0.0)
    np.testing.assert_allclose(p[:288], p[288:])


def test_parse_variants():
    assert parse_prices("1.5\n2\n") == [(1, 1.5), (2, 2.0)]
    assert parse_prices("t,price\n1,3.0\n2,4.0\n") == [(2, 3.0), (3, 4.0)]
    assert parse_prices("price,t\n3.0,1\n") == [(2, 3.0)]
    assert parse_prices("\n1e1\n\n") == [(2, 10.0)]


@pytest.mark.parametrize("text, line", [("1\nnan\n", 2), ("1,2,3\n", 1), ("1\n1_0\n", 2), ("1\nprice\n", 2), ("1\ninf\n", 2)])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as info:
        parse_prices(text)
    assert info.value.line == line


def test_load_csv_round_trip(tmp_path, cfg):
    seqs = [np.array([1.0, 2.5, 99.0]), np.array([3.0, 4.0])]
    path = tmp_path / "p.csv"
    path.write_text(format_csv(seqs))
    days = load_csv(path, cfg, slots_per_day=3)
    assert len(days) == 2
    np.testing.assert_array_equal(days[0], seqs[0])
    np.testing.assert_array_equal(days[1], seqs[1])


def test_load_csv_out_of_bounds_line(tmp_path, cfg):
    path = tmp_path / "p.csv"
    path.write_text("t,price\n1,5\n2,500\n")
    with pytest.raises(PriceOutOfBounds) as info:
        load_csv(path, cfg)
    assert info.value.index == 3


def test_empty_csv(tmp_path, cfg):
    path = tmp_path / "p.csv"
    path.write_text("price\n")
    with pytest.raises(ParseError):
        load_csv(path, cfg)
