"""Command-line interface: ``onlineconv {ratio,simulate,sweep,oracle,gen}``.

Exit status is 0 on success, 1 when inputs fail validation and 2 on I/O or
parse errors.  Diagnostics are a single line on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .domain import MarketConfig, Notice, Prediction
from .exceptions import OnlineConversionError, ParseError
from .harness import SweepSpec, compute_ecr, format_rows, run_sweep, scenario_for
from .instances import KINDS, GeneratorSpec, format_csv, generate, load_csv
from .oracle import opt_offline
from .ratios import RatioQuery

OUT_DIR_ENV = "ONLINECONV_OUT_DIR"
MODES = ("known", "notice", "unknown", "prediction")

# defaults mirror a 5-minute-slot electricity day
DEFAULTS = {"k": 68.0, "b": 6.0, "p_min": 5.0, "p_max": 1000.0}
CONFIG_KEYS = {
    "mode": "mode",
    "T": "T",
    "k": "k",
    "b": "b",
    "p_min": "p_min",
    "p_max": "p_max",
    "alpha": "alpha",
    "lambda": "lam",
    "tpred": "tpred",
    "seed": "seed",
    "format": "format",
    "out": "out",
}

log = logging.getLogger("onlineconv")


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers: {text!r}") from exc


def _alpha(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"alpha must be a number or 'auto': {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--config", default=None, help="JSON file whose keys mirror the flags")
    common.add_argument("-v", "--verbose", action="store_true")

    market = argparse.ArgumentParser(add_help=False)
    market.add_argument("--k", type=float, default=None, help="budget to sell")
    market.add_argument("--b", type=float, default=None, help="per-step rate limit")
    market.add_argument("--p-min", dest="p_min", type=float, default=None)
    market.add_argument("--p-max", dest="p_max", type=float, default=None)

    parser = argparse.ArgumentParser(prog="onlineconv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ratio", parents=[common, market], help="theoretical competitive ratios")
    p.add_argument("--theta", type=float, default=None, help="p_max/p_min (overrides the price bounds)")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)

    p = sub.add_parser("simulate", parents=[common, market], help="run one trader against the offline optimum")
    p.add_argument("--mode", choices=MODES, default=None)
    p.add_argument("--T", type=int, default=None, help="horizon (default: length of the sequence)")
    p.add_argument("--prices", default=None, help="CSV of prices; otherwise generated")
    p.add_argument("--slots-per-day", type=int, default=None)
    p.add_argument("--day", type=int, default=None, help="simulate only this day (0-based)")
    p.add_argument("--generator", choices=[k for k in KINDS if k != "csv"], default="geometric")
    p.add_argument("--alpha", type=_alpha, default=None)
    p.add_argument("--alpha2", type=_alpha, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--tpred", type=int, default=None)
    p.add_argument("--notify-step", type=int, default=None)

    p = sub.add_parser("sweep", parents=[common, market], help="mean/max ECR along one parameter axis")
    p.add_argument("--axis", choices=("T", "b", "theta", "lambda", "prediction_error"), required=True)
    p.add_argument("--values", type=_float_list, required=True)
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--modes", default=None, help="comma-separated subset of known,notice,unknown,prediction")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--tpred-factor", type=float, default=None)
    p.add_argument("--generator", choices=[k for k in KINDS if k != "csv"], default=None)
    p.add_argument("--replications", type=int, default=20)

    p = sub.add_parser("oracle", parents=[common, market], help="offline optimum of a price CSV")
    p.add_argument("prices")
    p.add_argument("--slots-per-day", type=int, default=None)

    p = sub.add_parser("gen", parents=[common, market], help="write generated price sequences as CSV")
    p.add_argument("--kind", choices=[k for k in KINDS if k != "csv"], default="geometric")
    p.add_argument("--T", type=int, default=None)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--tau", type=int, default=None, help="switching step for the switch family")
    return parser


def _apply_config(args: argparse.Namespace) -> None:
    """Fill unset flags from ``--config``; explicit flags win."""
    if not args.config:
        return
    raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ParseError(1, "config must be a JSON object")
    for key, value in raw.items():
        dest = CONFIG_KEYS.get(key)
        if dest is None:
            raise OnlineConversionError(f"unknown config key {key!r}")
        if getattr(args, dest, None) is None:
            setattr(args, dest, value)


def _config(args) -> MarketConfig:
    vals = {name: getattr(args, name) if getattr(args, name, None) is not None else DEFAULTS[name]
            for name in DEFAULTS}
    return MarketConfig(**vals).validated()


def _emit(args, text: str) -> None:
    out = args.out
    if out is None and os.environ.get(OUT_DIR_ENV):
        out = str(Path(os.environ[OUT_DIR_ENV]) / f"{args.command}.{args.format}")
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    log.info("wrote %s", path)


def cmd_ratio(args) -> str:
    cfg = _config(args)
    theta = args.theta if args.theta is not None else cfg.theta
    q = RatioQuery(theta=theta, T=args.T, k=cfg.k, b=cfg.b, lam=args.lam)
    row = {"T": args.T, "k": cfg.k, "b": cfg.b, "lambda": args.lam, **q.evaluate()}
    return format_rows([row], args.format)


def _load_sequences(args, cfg) -> list[np.ndarray]:
    if args.prices:
        seqs = load_csv(args.prices, cfg, args.slots_per_day)
        if args.day is not None:
            if not 0 <= args.day < len(seqs):
                raise OnlineConversionError(f"day {args.day} out of range (0..{len(seqs) - 1})")
            seqs = [seqs[args.day]]
        return seqs
    T = args.T or 24
    return [generate(GeneratorSpec(args.generator, T, seed=args.seed), cfg)]


def cmd_simulate(args) -> str:
    cfg = _config(args)
    mode = args.mode or "known"
    rows = []
    for day, prices in enumerate(_load_sequences(args, cfg)):
        T = len(prices)
        if mode == "notice":
            scenario = Notice(T_revealed=args.T or T, notify_step=args.notify_step)
        elif mode == "prediction":
            scenario = Prediction(args.tpred or T, 0.5 if args.lam is None else args.lam)
        else:
            if args.T is not None and args.T != T and mode == "known":
                raise OnlineConversionError(f"--T {args.T} does not match {T} prices")
            scenario = scenario_for(mode, T)
        alpha = args.alpha if args.alpha is not None else "auto"
        if mode == "prediction":
            alpha = (alpha, args.alpha2 if args.alpha2 is not None else "auto")
        report, sched = compute_ecr(cfg, scenario, prices, alpha)
        for w in report.warnings:
            log.warning("day %d: %s", day, w)
        if args.format == "json":
            rows.append({**report.as_row(), "day": day, "allocations": [float(x) for x in sched.allocations]})
        else:
            for t, (p, x) in enumerate(zip(prices, sched.allocations), start=1):
                rows.append({"day": day, "t": t, "price": float(p), "allocation": float(x)})
            rows.append({"day": day, "t": "summary", **report.as_row(), "allocation": sched.total})
    return format_rows(rows, args.format)


def cmd_sweep(args) -> str:
    cfg = _config(args)
    fixed = {
        "T": args.T,
        "k": cfg.k,
        "b": cfg.b,
        "p_min": cfg.p_min,
        "p_max": cfg.p_max,
        "lam": args.lam,
        "tpred_factor": args.tpred_factor,
        "generator": args.generator,
    }
    if args.modes:
        modes = [m.strip() for m in args.modes.split(",")]
        bad = [m for m in modes if m not in MODES]
        if bad:
            raise OnlineConversionError(f"unknown modes {bad}")
        fixed["modes"] = modes
    elif args.axis in ("prediction_error",):
        fixed["modes"] = ["prediction"]
        fixed["lams"] = [0.0, 0.5, 1.0] if args.lam is None else [args.lam]
    spec = SweepSpec(args.axis, args.values, fixed, args.replications, args.seed or 0)
    return format_rows(run_sweep(spec), args.format)


def cmd_oracle(args) -> str:
    cfg = _config(args)
    rows = []
    for day, prices in enumerate(load_csv(args.prices, cfg, args.slots_per_day)):
        opt = opt_offline(cfg, prices)
        rows.append({"day": day, "T": len(prices), "opt_revenue": opt.revenue, "sold": opt.total})
    return format_rows(rows, args.format)


def cmd_gen(args) -> str:
    cfg = _config(args)
    T = args.T or 24
    params = {"tau": args.tau} if args.tau is not None else {}
    base = args.seed or 0
    seqs = [generate(GeneratorSpec(args.kind, T, seed=base + i, params=params), cfg) for i in range(args.count)]
    if args.format == "json":
        return json.dumps([[float(p) for p in s] for s in seqs], indent=2) + "\n"
    return format_csv(seqs)


COMMANDS = {"ratio": cmd_ratio, "simulate": cmd_simulate, "sweep": cmd_sweep, "oracle": cmd_oracle, "gen": cmd_gen}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        _apply_config(args)
        args.format = args.format or "csv"
        _emit(args, COMMANDS[args.command](args))
    except (OSError, ParseError, json.JSONDecodeError) as exc:
        print(f"onlineconv: error: {exc}", file=sys.stderr)
        return 2
    except OnlineConversionError as exc:
        print(f"onlineconv: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
