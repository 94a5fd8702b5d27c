"""Command-line front end.

Subcommands:
  run     execute an experiment preset and write CSV/JSON rows
  curve   trace one EE-SE curve for a single random drop
  maxee   locate the efficiency-optimal spectral efficiency for one drop
  verify  run the brute-force oracle suite against the closed forms
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import oracle, single_pair
from .channel import build_scenario, generate_drop
from .errors import FdTradeoffError
from .harness import ExperimentConfig, aggregate, emit, run_preset
from .multi_user import solve_min_total_power
from .tradeoff import max_ee, trace_curve, unimodality_report


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fdtradeoff",
        description="Energy/spectral-efficiency tradeoff for full-duplex small cells",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment preset")
    run.add_argument("--config", help="JSON config file (field names as in docs)")
    run.add_argument("--preset", choices=("curve", "rsi_sweep", "user_sweep",
                                          "single_pair", "custom"))
    run.add_argument("--seed", type=int, dest="base_seed")
    run.add_argument("--drops", type=int, dest="n_drops")
    run.add_argument("--pairs", type=int, dest="n_pairs")
    run.add_argument("--se-eval", type=float, dest="se_eval")
    run.add_argument("--out", dest="output_path")
    run.add_argument("--format", choices=("csv", "json"))

    curve = sub.add_parser("curve", help="trace one EE-SE curve")
    curve.add_argument("--pairs", type=int, default=6)
    curve.add_argument("--rsi-db", type=float, default=None)
    curve.add_argument("--seed", type=int, default=1)
    curve.add_argument("--se-min", type=float, default=0.5)
    curve.add_argument("--se-max", type=float, default=12.0)
    curve.add_argument("--se-points", type=int, default=24)
    curve.add_argument("--out", default=None)
    curve.add_argument("--format", choices=("csv", "json"), default="csv")

    maxee = sub.add_parser("maxee", help="find the efficiency-optimal SE")
    maxee.add_argument("--pairs", type=int, default=6)
    maxee.add_argument("--rsi-db", type=float, default=None)
    maxee.add_argument("--seed", type=int, default=1)
    maxee.add_argument("--se-min", type=float, default=0.05)
    maxee.add_argument("--se-max", type=float, default=12.0)
    maxee.add_argument("--tol-se", type=float, default=1e-4)
    maxee.add_argument("--out", default=None)

    verify = sub.add_parser("verify", help="run the oracle cross-check suite")
    verify.add_argument("--samples", type=int, default=200)
    verify.add_argument("--seed", type=int, default=7)
    return parser


def _demo_scenario(pairs: int, rsi_db: float | None, seed: int):
    chi = 0.0 if rsi_db is None else 10.0 ** (rsi_db / 10.0)
    drop = generate_drop(pairs, pairs, 150.0, seed)
    return build_scenario(drop, rsi=chi, allow_pair_exclusion=True)


def _cmd_run(args) -> int:
    config = (
        ExperimentConfig.from_json(args.config) if args.config else ExperimentConfig()
    )
    config = config.with_overrides(
        preset=args.preset,
        base_seed=args.base_seed,
        n_drops=args.n_drops,
        n_pairs=args.n_pairs,
        se_eval=args.se_eval,
        output_path=args.output_path,
        format=args.format,
    )
    rows = run_preset(config)
    path = config.output_path or f"results_{config.preset}.{config.format}"
    emit(rows, config.format, path)
    print(f"wrote {len(rows)} rows to {path}")
    print(f"{'sweep':>12} {'mode':>4} {'n':>4} {'excl':>4} "
          f"{'ee_mean':>14} {'p_min_mean':>12}")
    for s in aggregate(rows):
        print(f"{s.sweep_value:>12.6g} {s.mode:>4} {s.n:>4} {s.n_excluded:>4} "
              f"{s.ee_mean:>14.6g} {s.p_min_mean:>12.6g}")
    return 0


def _cmd_curve(args) -> int:
    scenario = _demo_scenario(args.pairs, args.rsi_db, args.seed)
    grid = np.linspace(args.se_min, args.se_max, args.se_points)
    curve = trace_curve(scenario, grid)
    unimodal, first_bad = unimodality_report(curve)
    if args.out:
        from dataclasses import dataclass, make_dataclass

        point_cls = make_dataclass("CurvePoint", [("se", float), ("p_min_w", float),
                                                  ("ee", float)], frozen=True)
        rows = [point_cls(float(s), float(p), float(e))
                for s, p, e in zip(curve.se_points, curve.p_min, curve.ee)]
        emit(rows, args.format, args.out)
        print(f"wrote {len(rows)} points to {args.out}")
    else:
        print(f"{'se':>8} {'p_min_w':>14} {'ee':>14}")
        for s, p, e in zip(curve.se_points, curve.p_min, curve.ee):
            print(f"{s:>8.3f} {p:>14.6g} {e:>14.6g}")
    print(f"unimodal: {unimodal}" + ("" if unimodal else f" (violation at {first_bad})"))
    return 0


def _cmd_maxee(args) -> int:
    scenario = _demo_scenario(args.pairs, args.rsi_db, args.seed)
    se_star, ee_star, _ = max_ee(scenario, (args.se_min, args.se_max), args.tol_se)
    result = {"se_star": se_star, "ee_star": ee_star}
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(result, fh, indent=2)
            fh.write("\n")
        print(f"wrote {args.out}")
    print(json.dumps(result))
    return 0


def _check(name: str, ok: bool, detail: str) -> bool:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def _random_gains(rng, valid: bool) -> single_pair.GainTriple:
    h_up, h_down = 10.0 ** rng.uniform(-1.0, 3.0, size=2)
    chi = rng.uniform(0.0, 1.0)
    cap = min(h_up, h_down) / (1.0 + chi)
    if valid:
        h_cci = cap * rng.uniform(0.0, 0.999)
    else:
        h_cci = cap * rng.uniform(1.001, 10.0)
    return single_pair.GainTriple(h_up, h_down, h_cci, chi)


def _cmd_verify(args) -> int:
    rng = np.random.default_rng(args.seed)
    ok = True

    worst = 0.0
    for _ in range(args.samples):
        gains = _random_gains(rng, valid=True)
        rate = rng.uniform(0.05, 10.0)
        closed, _ = single_pair.min_power(rate, gains)
        brute = oracle.oracle_min_power_single(rate, gains, 1e-7)
        worst = max(worst, abs(closed - brute) / max(brute, 1e-300))
    ok &= _check("closed form vs oracle", worst <= 1e-4, f"worst rel err {worst:.2e}")

    worst = math.inf
    for _ in range(max(args.samples // 4, 10)):
        gains = _random_gains(rng, valid=True)
        report = oracle.convexity_probe(
            lambda r: single_pair.min_power(r, gains)[0], 0.05, 10.0, 120
        )
        worst = min(worst, report.min_second_diff)
    ok &= _check("power curve convexity", worst >= -1e-8,
                 f"min second difference {worst:.2e}")

    worst = 0.0
    for _ in range(max(args.samples // 4, 10)):
        gains = _random_gains(rng, valid=True)
        edge = single_pair.case_boundary_rate(gains)
        if edge <= 0:
            continue
        p_edge, label = single_pair.min_power(edge, gains)
        p_int = single_pair.power_interior(edge, gains)
        worst = max(worst, abs(p_edge - p_int))
    ok &= _check("regime continuity", worst <= 1e-9, f"worst value gap {worst:.2e}")

    violations = 0
    for _ in range(max(args.samples // 2, 20)):
        gains = _random_gains(rng, valid=False)
        rate = rng.uniform(0.1, 8.0)
        p_fd = oracle.oracle_min_power_single(rate, gains, 1e-7)
        p_hd = single_pair.hd_min_power(rate, gains.h_up, gains.h_down)
        if p_fd < p_hd * (1.0 - 1e-5):
            violations += 1
    ok &= _check("half-duplex wins when blocked", violations == 0,
                 f"{violations} violations")

    worst = 0.0
    for k in range(5):
        gains = _random_gains(rng, valid=True)
        scenario = build_scenario(
            generate_drop(1, 1, 150.0, 1000 + k), rsi=0.1, allow_pair_exclusion=True
        )
        rate = rng.uniform(0.5, 8.0)
        try:
            sol = solve_min_total_power(rate, scenario)
        except FdTradeoffError:
            continue
        closed, _ = single_pair.min_power(
            rate,
            single_pair.GainTriple(
                float(scenario.h_up[0]), float(scenario.h_down[0]),
                float(scenario.h_cci[0, 0]), scenario.rsi,
            ),
        )
        worst = max(worst, abs(sol.power_w - closed) / max(closed, 1e-300))
    ok &= _check("solver single-pair reduction", worst <= 1e-6,
                 f"worst rel err {worst:.2e}")

    print("verify:", "all checks passed" if ok else "FAILURES above")
    return 0 if ok else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "curve":
            return _cmd_curve(args)
        if args.command == "maxee":
            return _cmd_maxee(args)
        return _cmd_verify(args)
    except FdTradeoffError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
