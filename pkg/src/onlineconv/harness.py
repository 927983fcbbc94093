"""Empirical competitive ratio (ECR) evaluation and parameter sweeps."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .augmented import run_augmented
from .domain import (
    BUDGET_SLACK,
    HorizonScenario,
    Known,
    MarketConfig,
    Notice,
    Prediction,
    Unknown,
    check_schedule,
    validate_config,
)
from .exceptions import InfeasibleHorizon, OnlineConversionError
from .instances import GeneratorSpec, generate
from .oracle import opt_offline
from .ratios import alpha_known, bounds_augmented, cr_notice, cr_unknown
from .trader import run_trader

logger = logging.getLogger(__name__)

AlphaArg = Union[str, float, tuple]
AXES = ("T", "b", "theta", "lambda", "prediction_error")


def resolve_alpha(cfg: MarketConfig, scenario: HorizonScenario, alpha: AlphaArg = "auto"):
    """Balance parameter(s) prescribed for the scenario.

    ``"auto"`` picks the ratio-optimal value: the known-horizon root, the
    notice ratio, ``1 + ln(theta)``, or the pair of those for predictions.
    A prediction scenario accepts a ``(alpha1, alpha2)`` pair in which
    either entry may be ``"auto"``.
    """
    theta = cfg.theta
    if isinstance(scenario, Prediction):
        a1, a2 = (alpha, alpha) if not isinstance(alpha, tuple) else alpha
        a1 = alpha_known(theta, scenario.T_pred, cfg.k, cfg.b) if a1 == "auto" else float(a1)
        a2 = cr_unknown(theta) if a2 == "auto" else float(a2)
        return a1, a2
    if alpha != "auto":
        return float(alpha)
    if isinstance(scenario, Known):
        return alpha_known(theta, scenario.T, cfg.k, cfg.b)
    if isinstance(scenario, Notice):
        return cr_notice(theta)
    return cr_unknown(theta)


def theoretical_bound(cfg: MarketConfig, scenario: HorizonScenario, T: int) -> float:
    """Worst-case ratio guaranteed when the scenario runs with ``alpha="auto"``."""
    theta = cfg.theta
    if isinstance(scenario, Known):
        return alpha_known(theta, scenario.T, cfg.k, cfg.b)
    if isinstance(scenario, Notice):
        return cr_notice(theta)
    if isinstance(scenario, Unknown):
        return cr_unknown(theta)
    cons, rob = bounds_augmented(theta, scenario.T_pred, cfg.k, cfg.b, scenario.lam)
    return min(cons, rob) if T == scenario.T_pred else rob


def scenario_label(scenario: HorizonScenario) -> str:
    if isinstance(scenario, Prediction):
        return f"prediction(lam={scenario.lam:g})"
    return scenario.name


@dataclass
class EcrReport:
    opt_revenue: float
    alg_revenue: float
    ecr: float
    scenario: HorizonScenario
    alpha_used: Union[float, tuple]
    stranded_budget: float
    bound: float
    generator: Optional[GeneratorSpec] = None
    warnings: list = field(default_factory=list)

    def as_row(self) -> dict:
        alpha = self.alpha_used if isinstance(self.alpha_used, tuple) else (self.alpha_used,)
        row = {
            "mode": scenario_label(self.scenario),
            "opt_revenue": self.opt_revenue,
            "alg_revenue": self.alg_revenue,
            "ecr": self.ecr,
            "bound": self.bound,
            "alpha": alpha[0],
            "alpha2": alpha[1] if len(alpha) > 1 else None,
            "stranded_budget": self.stranded_budget,
            "warnings": "; ".join(self.warnings),
        }
        if self.generator is not None:
            row["generator"] = self.generator.kind
            row["seed"] = self.generator.seed
        return row


def ecr_ratio(opt: float, alg: float) -> float:
    if alg > 0.0:
        return opt / alg
    return math.inf if opt > 0.0 else 1.0


def compute_ecr(
    cfg: MarketConfig,
    scenario: HorizonScenario,
    prices: Sequence[float],
    alpha: AlphaArg = "auto",
    generator: Optional[GeneratorSpec] = None,
    check: bool = True,
):
    """Run the online trader and the offline optimum on the same prices.

    Returns ``(report, schedule)``.
    """
    validate_config(cfg)
    prices = np.asarray(prices, dtype=float)
    a = resolve_alpha(cfg, scenario, alpha)
    warnings = []
    holder: list = []
    if isinstance(scenario, Prediction):
        sched = run_augmented(cfg, scenario.T_pred, scenario.lam, a[0], a[1], prices, state_out=holder)
        s1, s2 = holder[0].stranded()
        if s1 > BUDGET_SLACK:
            warnings.append(f"known part stranded {s1:.6g}")
        if s2 > BUDGET_SLACK:
            warnings.append(f"unknown part stranded {s2:.6g}")
    else:
        if isinstance(scenario, Notice) and scenario.T_revealed is not None:
            if cfg.b * scenario.T_revealed < cfg.k * (1.0 - 1e-12):
                raise InfeasibleHorizon("notice horizon too short to spend the budget")
        sched = run_trader(cfg, scenario, a, prices, state_out=holder)
        if isinstance(scenario, Notice) and not holder[0].notified and cfg.k - sched.total > BUDGET_SLACK:
            warnings.append("no notification received")
    if check:
        check_schedule(sched, cfg)
    opt = opt_offline(cfg, prices)
    report = EcrReport(
        opt_revenue=opt.revenue,
        alg_revenue=sched.revenue,
        ecr=ecr_ratio(opt.revenue, sched.revenue),
        scenario=scenario,
        alpha_used=a,
        stranded_budget=max(0.0, cfg.k - sched.total),
        bound=theoretical_bound(cfg, scenario, len(prices)),
        generator=generator,
        warnings=warnings,
    )
    return report, sched


def scenario_for(mode: str, T: int, T_pred: Optional[int] = None, lam: Optional[float] = None) -> HorizonScenario:
    """Scenario for a price sequence of length ``T``."""
    if mode == "known":
        return Known(T)
    if mode == "notice":
        return Notice(T_revealed=T)
    if mode == "unknown":
        return Unknown()
    if mode == "prediction":
        return Prediction(T_pred if T_pred is not None else T, 0.5 if lam is None else lam)
    raise OnlineConversionError(f"unknown mode {mode!r}")


# -- sweeps --------------------------------------------------------------------

DEFAULT_FIXED = {
    "T": 20,
    "k": 12.0,
    "b": 5.0,
    "p_min": 1.0,
    "p_max": 100.0,
    "modes": ["known", "notice", "unknown"],
    "lam": 0.5,
    "lams": None,
    "tpred_factor": 1.0,
    "generator": "geometric",
}


@dataclass
class SweepSpec:
    axis: str
    values: list
    fixed: dict = field(default_factory=dict)
    replications: int = 20
    seed: int = 0

    def __post_init__(self):
        if self.axis not in AXES:
            raise OnlineConversionError(f"unknown sweep axis {self.axis!r}; choose from {AXES}")
        if not self.values:
            raise OnlineConversionError("sweep needs at least one value")
        if self.replications < 1:
            raise OnlineConversionError("replications must be >= 1")

    def settings(self) -> dict:
        out = dict(DEFAULT_FIXED)
        out.update({k: v for k, v in self.fixed.items() if v is not None})
        return out


def _cells(spec: SweepSpec, value) -> list[tuple]:
    """(config, T, scenario-maker list) for one axis value."""
    f = spec.settings()
    T, k, b, p_min, p_max = int(f["T"]), f["k"], f["b"], f["p_min"], f["p_max"]
    modes = list(f["modes"])
    lams = f["lams"] if f["lams"] is not None else [f["lam"]]
    factor = f["tpred_factor"]
    if spec.axis == "T":
        T = int(value)
    elif spec.axis == "b":
        b = float(value)
    elif spec.axis == "theta":
        p_max = p_min * float(value)
    elif spec.axis == "lambda":
        lams = [float(value)]
        modes = ["prediction"]
    elif spec.axis == "prediction_error":
        factor = 1.0 + float(value)
    T_pred = max(1, int(round(factor * T)))
    cfg = MarketConfig(k, b, p_min, p_max)
    scenarios = []
    for mode in modes:
        if mode == "prediction":
            scenarios.extend(Prediction(T_pred, lam) for lam in lams)
        else:
            scenarios.append(scenario_for(mode, T))
    return [(cfg, T, T_pred, scenarios)]


def run_sweep(spec: SweepSpec) -> list[dict]:
    """One row per (axis value, scenario): mean/max ECR and the matching bound.

    Replication ``r`` uses seed ``spec.seed + r``, so every scenario in a
    cell sees the same prices.  Notice scenarios whose horizon cannot absorb
    the budget (``b*T < k``) are skipped with a warning.  Infinite ECRs are left out of the mean but
    counted in ``n_infinite`` and reflected in ``max_ecr``.
    """
    rows = []
    kind = spec.settings()["generator"]
    for value in spec.values:
        for cfg, T, T_pred, scenarios in _cells(spec, value):
            sequences = [
                generate(GeneratorSpec(kind, T, seed=spec.seed + r), cfg) for r in range(spec.replications)
            ]
            for scenario in scenarios:
                if isinstance(scenario, Notice) and cfg.b * T < cfg.k:
                    logger.warning("skipping notice at T=%d: b*T < k", T)
                    continue
                ecrs = np.array([compute_ecr(cfg, scenario, seq)[0].ecr for seq in sequences])
                finite = ecrs[np.isfinite(ecrs)]
                rows.append({
                    "axis": spec.axis,
                    "value": value,
                    "mode": scenario_label(scenario),
                    "T": T,
                    "T_pred": T_pred if isinstance(scenario, Prediction) else None,
                    "k": cfg.k,
                    "b": cfg.b,
                    "theta": cfg.theta,
                    "mean_ecr": float(finite.mean()) if len(finite) else math.inf,
                    "max_ecr": float(ecrs.max()),
                    "bound": theoretical_bound(cfg, scenario, T),
                    "n": len(ecrs),
                    "n_infinite": int(len(ecrs) - len(finite)),
                    "generator": kind,
                })
    return rows


# -- serialization ------------------------------------------------------------

def _cell(v):
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if v is None:
        return ""
    return v


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    if isinstance(v, (np.floating, np.integer)):
        return _json_value(v.item())
    return v


def format_rows(rows: Sequence[dict], fmt: str = "csv") -> str:
    """Flat rows as CSV (header = union of keys in first-seen order) or JSON."""
    if fmt == "json":
        clean = [{k: _json_value(v) for k, v in row.items()} for row in rows]
        return json.dumps(clean, indent=2) + "\n"
    if fmt != "csv":
        raise OnlineConversionError(f"unknown format {fmt!r}")
    columns: list = []
    for row in rows:
        columns.extend(c for c in row if c not in columns)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({c: _cell(row.get(c)) for c in columns})
    return buf.getvalue()
