"""Price-sequence generators and CSV ingestion."""
from __future__ import annotations

import csv
import io
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .domain import MarketConfig, validate_config, validate_prices
from .exceptions import BadAlpha, BadTheta, OnlineConversionError, ParseError, PriceOutOfBounds
from .ratios import alpha_tau

KINDS = ("worst", "switch", "allmin", "allmax", "uniform", "geometric", "minprefix", "flat", "daily", "csv")


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one price sequence; enough to regenerate it exactly.

    ``params`` carries kind-specific values: ``tau`` and ``prefix`` for
    ``switch``, ``alpha`` for ``worst``, ``prefix_len`` for ``minprefix``,
    ``level`` (a multiple of ``p_min``) for ``flat``, ``path`` for ``csv``.
    """

    kind: str
    length: int
    seed: Optional[int] = None
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise OnlineConversionError(f"unknown generator kind {self.kind!r}")

    def as_dict(self) -> dict:
        return {"kind": self.kind, "length": self.length, "seed": self.seed, **self.params}


def gen_worst_increasing(cfg: MarketConfig, T: int, alpha_target: Optional[float] = None) -> np.ndarray:
    """Strictly increasing prices that hold the known-horizon trader to its ratio.

    Price ``t`` equals the pseudo-cost level the trader reaches after ``t``
    equal multiplicative steps, ending exactly at ``p_max``.  Run at
    ``alpha = alpha_tau(theta, T)`` the trader sells ``k/T`` per step and
    earns ``k * p_max / alpha``.
    """
    theta = cfg.theta
    if not theta > 1.0:
        raise BadTheta("worst-case construction needs theta > 1")
    if T == 1:
        return np.array([cfg.p_max])
    alpha = alpha_tau(theta, T) if alpha_target is None else alpha_target
    if not 1.0 < alpha <= theta:
        raise BadAlpha(f"alpha_target must lie in (1, theta], got {alpha}")
    q = (alpha - 1.0) / (theta - 1.0)
    t = np.arange(1, T + 1)
    prices = cfg.p_min * (1.0 + (alpha - 1.0) * q ** (-t / T))
    prices[-1] = cfg.p_max
    return np.minimum(prices, cfg.p_max)


def gen_switch_family(
    cfg: MarketConfig,
    T: int,
    tau: int,
    prefix: Union[str, Sequence[float]] = "random",
    seed: Optional[int] = None,
) -> np.ndarray:
    """Arbitrary prefix of length ``tau - 1`` followed by ``p_min`` up to ``T``."""
    if not 1 <= tau <= T:
        raise OnlineConversionError(f"tau must lie in [1, {T}], got {tau}")
    n = tau - 1
    if isinstance(prefix, str):
        if prefix == "random":
            head = np.random.default_rng(seed).uniform(cfg.p_min, cfg.p_max, n)
        elif prefix == "increasing":
            head = np.geomspace(cfg.p_min, cfg.p_max, n + 2)[1:-1] if n else np.empty(0)
        elif prefix == "max":
            head = np.full(n, cfg.p_max)
        else:
            raise OnlineConversionError(f"unknown prefix {prefix!r}")
    else:
        head = np.asarray(prefix, dtype=float)
        if len(head) != n:
            raise OnlineConversionError(f"prefix must have length {n}, got {len(head)}")
    prices = np.concatenate([head, np.full(T - n, cfg.p_min)])
    validate_prices(cfg, prices)
    return prices


def gen_min_prefix(cfg: MarketConfig, T: int, prefix_len: int, seed: Optional[int] = None) -> np.ndarray:
    """``p_min`` for the first ``prefix_len`` steps, then random high prices."""
    prefix_len = max(0, min(prefix_len, T))
    rng = np.random.default_rng(seed)
    tail = rng.uniform(math.sqrt(cfg.p_min * cfg.p_max), cfg.p_max, T - prefix_len)
    return np.concatenate([np.full(prefix_len, cfg.p_min), tail])


def gen_random(cfg: MarketConfig, T: int, kind: str = "uniform", seed: Optional[int] = None) -> np.ndarray:
    """i.i.d. prices: ``uniform`` on the range or log-uniform (``geometric``)."""
    rng = np.random.default_rng(seed)
    if kind == "uniform":
        prices = rng.uniform(cfg.p_min, cfg.p_max, T)
    elif kind == "geometric":
        prices = np.exp(rng.uniform(math.log(cfg.p_min), math.log(cfg.p_max), T))
    else:
        raise OnlineConversionError(f"unknown random kind {kind!r}")
    return np.clip(prices, cfg.p_min, cfg.p_max)


def gen_daily(
    cfg: MarketConfig,
    T: int,
    seed: Optional[int] = None,
    period: Optional[int] = None,
    noise: float = 0.1,
) -> np.ndarray:
    """Log-price with one sinusoidal cycle per ``period`` steps plus Gaussian noise.

    Mimics a day-ahead electricity curve: a night trough, an evening peak,
    and occasional spikes to the cap.  ``period`` defaults to ``T``.
    """
    rng = np.random.default_rng(seed)
    period = period or T
    phase = np.arange(T) / period
    lo, hi = math.log(cfg.p_min), math.log(cfg.p_max)
    level = 0.35 + 0.25 * np.sin(2.0 * np.pi * (phase - 0.3)) + noise * rng.standard_normal(T)
    return np.clip(np.exp(lo + (hi - lo) * level), cfg.p_min, cfg.p_max)


def generate(spec: GeneratorSpec, cfg: MarketConfig) -> np.ndarray:
    validate_config(cfg)
    T, pr = spec.length, spec.params
    if spec.kind == "worst":
        return gen_worst_increasing(cfg, T, pr.get("alpha"))
    if spec.kind == "switch":
        return gen_switch_family(cfg, T, pr.get("tau", T), pr.get("prefix", "random"), spec.seed)
    if spec.kind == "allmin":
        return np.full(T, cfg.p_min)
    if spec.kind == "allmax":
        return np.full(T, cfg.p_max)
    if spec.kind == "minprefix":
        return gen_min_prefix(cfg, T, pr.get("prefix_len", T // 2), spec.seed)
    if spec.kind == "flat":
        return np.full(T, min(cfg.p_max, cfg.p_min * pr.get("level", 1.0)))
    if spec.kind == "daily":
        return gen_daily(cfg, T, spec.seed, pr.get("period"), pr.get("noise", 0.1))
    if spec.kind == "csv":
        seqs = load_csv(pr["path"], cfg, slots_per_day=pr.get("slots_per_day"))
        return seqs[pr.get("day", 0)]
    return gen_random(cfg, T, spec.kind, spec.seed)


# -- CSV ----------------------------------------------------------------------

_NUMBER = re.compile(r"^[+-]?(\d+(\.\d*)?|\.\d+)([eE][+-]?\d+)?$")


def _to_float(text: str, line: int) -> float:
    text = text.strip()
    if not _NUMBER.match(text):
        raise ParseError(line, f"not a decimal number: {text!r}")
    return float(text)


def parse_prices(text: str) -> list[tuple[int, float]]:
    """(line number, price) pairs from ``price`` or ``t,price`` CSV text."""
    rows = []
    price_col = None
    for lineno, record in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not record or all(not f.strip() for f in record):
            continue
        if len(record) not in (1, 2):
            raise ParseError(lineno, f"expected 1 or 2 columns, got {len(record)}")
        if price_col is None:
            width = len(record)
            names = [f.strip().lower() for f in record]
            if not all(_NUMBER.match(f.strip()) for f in record):
                if rows:
                    raise ParseError(lineno, "header after data")
                price_col = names.index("price") if "price" in names else width - 1
                continue
            price_col = width - 1
        if len(record) != width:
            raise ParseError(lineno, f"expected {width} columns, got {len(record)}")
        rows.append((lineno, _to_float(record[price_col], lineno)))
    return rows


def load_csv(
    path: Union[str, Path],
    cfg: MarketConfig,
    slots_per_day: Optional[int] = None,
) -> list[np.ndarray]:
    """Read prices and split them into day-long sequences.

    Every price is checked against the configured bounds; a violation aborts
    with the offending line.  A trailing partial day is kept as a shorter
    sequence.
    """
    text = Path(path).read_text(encoding="utf-8")
    rows = parse_prices(text)
    for lineno, p in rows:
        if not cfg.p_min <= p <= cfg.p_max:
            raise PriceOutOfBounds(lineno, p, cfg.p_min, cfg.p_max)
    prices = np.array([p for _, p in rows], dtype=float)
    if len(prices) == 0:
        raise ParseError(1, "no prices found")
    if not slots_per_day:
        return [prices]
    return [prices[i:i + slots_per_day] for i in range(0, len(prices), slots_per_day)]


def format_csv(sequences: Sequence[Sequence[float]]) -> str:
    """``t,price`` CSV; ``t`` restarts at 1 for every sequence."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "price"])
    for seq in sequences:
        for t, p in enumerate(seq, start=1):
            w.writerow([t, repr(float(p))])
    return buf.getvalue()
