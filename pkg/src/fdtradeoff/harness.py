"""Experiment presets, Monte Carlo aggregation, and CSV/JSON emission.

A preset runs many random user drops through the solvers and emits one row
per (drop, sweep point, spectral efficiency, duplex mode).  Rows where the
solver cannot produce a value (for example, fairness floors unreachable after
excluding hopeless pairs) carry NaN in the power and efficiency columns and
are excluded, with a count, by :func:`aggregate`.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .channel import PathLossModel, Scenario, UserDrop, build_scenario, generate_drop
from .errors import ConfigurationError, FdTradeoffError
from .multi_user import (
    energy_efficiency,
    hd_baseline_min_power,
    solve_min_total_power,
)

PRESETS = ("curve", "rsi_sweep", "user_sweep", "single_pair", "custom")
SWEEP_AXES = ("rsi_db", "n_pairs", "se")


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: scenario parameters, sweep definition, output target.

    ``rsi_db`` entries are residual self-interference powers in dB relative
    to the noise floor; ``None`` means ideal cancellation (zero).  A JSON
    config file mirrors these field names; CLI flags override file values.
    """

    preset: str = "curve"
    n_pairs: int = 6
    cell_radius_m: float = 150.0
    bandwidth_hz: float = 10e6
    noise_density_dbm_per_hz: float = -174.0
    omega: float = 1.0
    p_fix_w: float = 0.1
    shadow_sigma_db: float = 10.0
    sbs_intercept_db: float = 145.4
    sbs_slope_db: float = 37.5
    uu_intercept_db: float = 175.78
    uu_slope_db: float = 40.0
    rsi_db: tuple = (None, -20.0, -10.0, 0.0)
    rsi_db_eval: float | None = -10.0
    se_grid: tuple = (2.0, 4.0, 6.0, 8.0, 10.0, 12.0)
    se_eval: float = 8.0
    pair_counts: tuple = (2, 3, 4, 5, 6, 7, 8, 9, 10)
    n_drops: int = 50
    base_seed: int = 20260
    min_share_up: float | None = None
    min_share_down: float | None = None
    sweep_axis: str | None = None
    sweep_values: tuple | None = None
    output_path: str | None = None
    format: str = "csv"

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise ConfigurationError(f"unknown preset {self.preset!r}")
        if self.n_drops < 1:
            raise ConfigurationError("n_drops must be >= 1")
        if self.n_pairs < 1:
            raise ConfigurationError("n_pairs must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigurationError(f"unknown format {self.format!r}")
        chis = [_chi_from_db(v) for v in self.rsi_db]
        if any(not math.isfinite(c) for c in chis):
            raise ConfigurationError("rsi_db values must be finite or None")
        if sorted(chis) != chis:
            raise ConfigurationError("rsi_db must be sorted ascending")
        for name in ("se_grid", "pair_counts"):
            vals = list(getattr(self, name))
            if any(not math.isfinite(v) for v in vals):
                raise ConfigurationError(f"{name} must be finite")
            if sorted(vals) != vals or len(set(vals)) != len(vals):
                raise ConfigurationError(f"{name} must be strictly increasing")
        if self.sweep_axis is not None and self.sweep_axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown sweep axis {self.sweep_axis!r}")
        if self.preset == "custom" and (
            self.sweep_axis is None or not self.sweep_values
        ):
            raise ConfigurationError("custom preset needs sweep_axis and sweep_values")

    @classmethod
    def from_json(cls, path: str) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        for key in ("rsi_db", "se_grid", "pair_counts", "sweep_values"):
            if key in data and data[key] is not None:
                data[key] = tuple(data[key])
        return cls(**data)

    def with_overrides(self, **overrides) -> "ExperimentConfig":
        """New config with the non-None overrides applied."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        return replace(self, **updates) if updates else self


@dataclass(frozen=True)
class ResultRow:
    """One solved operating point of one drop."""

    drop_seed: int
    sweep_value: float
    se: float
    p_min_w: float
    ee: float
    mode: str


@dataclass(frozen=True)
class SummaryRow:
    """Aggregated statistics for one (sweep value, mode) group."""

    sweep_value: float
    mode: str
    n: int
    n_excluded: int
    ee_mean: float
    ee_median: float
    ee_std: float
    p_min_mean: float
    p_min_median: float
    p_min_std: float


def _chi_from_db(value_db) -> float:
    """Linear residual self-interference power from a dB setting (None = 0)."""
    if value_db is None:
        return 0.0
    return 10.0 ** (float(value_db) / 10.0)


def _models(config: ExperimentConfig):
    sbs = PathLossModel(
        config.sbs_intercept_db, config.sbs_slope_db, config.shadow_sigma_db
    )
    uu = PathLossModel(
        config.uu_intercept_db, config.uu_slope_db, config.shadow_sigma_db
    )
    return sbs, uu


def _scenario(config: ExperimentConfig, drop: UserDrop, chi: float) -> Scenario:
    sbs, uu = _models(config)
    return build_scenario(
        drop,
        user_sbs_model=sbs,
        user_user_model=uu,
        rsi=chi,
        bandwidth_hz=config.bandwidth_hz,
        omega=config.omega,
        p_fix_w=config.p_fix_w,
        min_share_up=config.min_share_up,
        min_share_down=config.min_share_down,
        noise_density_dbm_per_hz=config.noise_density_dbm_per_hz,
        allow_pair_exclusion=True,
    )


def _prefix_scenario(scn: Scenario, m: int, config: ExperimentConfig) -> Scenario:
    """First-m-users view of a scenario; keeps shadowing draws aligned."""
    floor_up = config.min_share_up
    floor_down = config.min_share_down
    if floor_up is None:
        floor_up = 1.0 / (2.0 * m)
    if floor_down is None:
        floor_down = 1.0 / (2.0 * m)
    return Scenario(
        h_up=scn.h_up[:m],
        h_down=scn.h_down[:m],
        h_cci=scn.h_cci[:m, :m],
        rsi=scn.rsi,
        bandwidth_hz=scn.bandwidth_hz,
        omega=scn.omega,
        p_fix_w=scn.p_fix_w,
        min_share_up=floor_up,
        min_share_down=floor_down,
        allow_pair_exclusion=True,
    )


def _fd_power(se: float, scn: Scenario, hint_box: dict) -> float:
    try:
        sol = solve_min_total_power(se, scn, mu_hint=hint_box.get("mu"))
    except FdTradeoffError:
        return math.nan
    if sol.duals.rate_price > 0:
        hint_box["mu"] = sol.duals.rate_price
    return sol.power_w


def _hd_power(se: float, scn: Scenario, hint_box: dict) -> float:
    try:
        sol = hd_baseline_min_power(se, scn, mu_hint=hint_box.get("mu"))
    except FdTradeoffError:
        return math.nan
    if sol.duals.rate_price > 0:
        hint_box["mu"] = sol.duals.rate_price
    return sol.power_w


def _row(scn, seed, sweep_value, se, power, mode) -> ResultRow:
    ee = energy_efficiency(se, power, scn) if math.isfinite(power) else math.nan
    return ResultRow(seed, float(sweep_value), float(se), float(power), ee, mode)


def run_preset(config: ExperimentConfig) -> list[ResultRow]:
    """Run one preset over all drops; deterministic in the config and seed.

    Drop ``d`` uses seed ``base_seed + d``.  Rows are ordered by (drop,
    sweep index, spectral efficiency, mode) with FD before HD.  Solver
    failures become NaN rows; the run continues.
    """
    preset = config.preset
    if preset in ("curve", "single_pair"):
        return _run_chi_by_se(config, m=1 if preset == "single_pair" else None)
    if preset == "rsi_sweep":
        return _run_chi_at_se(config, [_chi_from_db(v) for v in config.rsi_db])
    if preset == "user_sweep":
        return _run_user_sweep(config, list(config.pair_counts))
    # custom
    axis, values = config.sweep_axis, list(config.sweep_values)
    if axis == "rsi_db":
        return _run_chi_at_se(config, [_chi_from_db(v) for v in values])
    if axis == "n_pairs":
        return _run_user_sweep(config, [int(v) for v in values])
    grid = replace(config, se_grid=tuple(float(v) for v in values))
    return _run_se_sweep(grid)


def _run_chi_by_se(config: ExperimentConfig, m: int | None = None) -> list[ResultRow]:
    """EE-SE curves: sweep value is the RSI power, rows over the SE grid."""
    m = m or config.n_pairs
    chis = [_chi_from_db(v) for v in config.rsi_db]
    rows: list[ResultRow] = []
    for d in range(config.n_drops):
        seed = config.base_seed + d
        drop = generate_drop(m, m, config.cell_radius_m, seed)
        scenarios = [_scenario(config, drop, chi) for chi in chis]
        hd_hint: dict = {}
        hd_powers = [_hd_power(se, scenarios[0], hd_hint) for se in config.se_grid]
        for chi, scn in zip(chis, scenarios):
            fd_hint: dict = {}
            for k, se in enumerate(config.se_grid):
                p_fd = _fd_power(se, scn, fd_hint)
                rows.append(_row(scn, seed, chi, se, p_fd, "FD"))
                rows.append(_row(scn, seed, chi, se, hd_powers[k], "HD"))
    return rows


def _run_chi_at_se(config: ExperimentConfig, chis: list[float]) -> list[ResultRow]:
    """RSI sweep at the fixed evaluation SE."""
    se = config.se_eval
    rows: list[ResultRow] = []
    for d in range(config.n_drops):
        seed = config.base_seed + d
        drop = generate_drop(config.n_pairs, config.n_pairs, config.cell_radius_m, seed)
        scenarios = [_scenario(config, drop, chi) for chi in chis]
        p_hd = _hd_power(se, scenarios[0], {})
        for chi, scn in zip(chis, scenarios):
            p_fd = _fd_power(se, scn, {})
            rows.append(_row(scn, seed, chi, se, p_fd, "FD"))
            rows.append(_row(scn, seed, chi, se, p_hd, "HD"))
    return rows


def _run_user_sweep(config: ExperimentConfig, counts: list[int]) -> list[ResultRow]:
    """Pair-count sweep; each drop reuses one master geometry so the counts
    compare nested user populations."""
    se = config.se_eval
    chi = _chi_from_db(config.rsi_db_eval)
    master_m = max(counts)
    rows: list[ResultRow] = []
    for d in range(config.n_drops):
        seed = config.base_seed + d
        drop = generate_drop(master_m, master_m, config.cell_radius_m, seed)
        master = _scenario(config, drop, chi)
        for m in counts:
            scn = _prefix_scenario(master, m, config)
            p_fd = _fd_power(se, scn, {})
            p_hd = _hd_power(se, scn, {})
            rows.append(_row(scn, seed, m, se, p_fd, "FD"))
            rows.append(_row(scn, seed, m, se, p_hd, "HD"))
    return rows


def _run_se_sweep(config: ExperimentConfig) -> list[ResultRow]:
    """SE sweep at the single evaluation RSI; sweep value equals the SE."""
    chi = _chi_from_db(config.rsi_db_eval)
    rows: list[ResultRow] = []
    for d in range(config.n_drops):
        seed = config.base_seed + d
        drop = generate_drop(config.n_pairs, config.n_pairs, config.cell_radius_m, seed)
        scn = _scenario(config, drop, chi)
        fd_hint: dict = {}
        hd_hint: dict = {}
        for se in config.se_grid:
            p_fd = _fd_power(se, scn, fd_hint)
            p_hd = _hd_power(se, scn, hd_hint)
            rows.append(_row(scn, seed, se, se, p_fd, "FD"))
            rows.append(_row(scn, seed, se, se, p_hd, "HD"))
    return rows


def aggregate(rows: list[ResultRow]) -> list[SummaryRow]:
    """Group rows by (sweep_value, mode) and summarize ee and p_min.

    NaN rows are excluded from the statistics but counted in ``n_excluded``;
    a group consisting only of errors keeps its row (NaN statistics) so the
    failure stays visible.
    """
    if not rows:
        raise ValueError("aggregate needs at least one row")
    groups: dict[tuple, list[ResultRow]] = {}
    for row in rows:
        groups.setdefault((row.sweep_value, row.mode), []).append(row)
    out = []
    for (sweep_value, mode), members in groups.items():
        good = [r for r in members if math.isfinite(r.ee) and math.isfinite(r.p_min_w)]
        n_excl = len(members) - len(good)
        if good:
            ee = np.array([r.ee for r in good])
            pw = np.array([r.p_min_w for r in good])
            stats = (
                float(ee.mean()), float(np.median(ee)), float(ee.std()),
                float(pw.mean()), float(np.median(pw)), float(pw.std()),
            )
        else:
            stats = (math.nan,) * 6
        out.append(SummaryRow(sweep_value, mode, len(good), n_excl, *stats))
    return out


def _cell(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def emit(rows, fmt: str, path: str, row_type=None) -> str:
    """Write rows (any dataclass type) as CSV or a JSON array.

    CSV uses the dataclass field names as the header and shortest
    round-trip float formatting, so emit-then-parse is lossless.  Pass
    ``row_type`` to fix the columns of an empty table.
    """
    if rows:
        row_type = type(rows[0])
    elif row_type is None:
        row_type = ResultRow
    names = [f.name for f in dataclasses.fields(row_type)]
    try:
        if fmt == "csv":
            import csv

            with open(path, "w", newline="", encoding="utf-8") as fh:
                writer = csv.writer(fh)
                writer.writerow(names)
                for row in rows:
                    writer.writerow([_cell(getattr(row, n)) for n in names])
        elif fmt == "json":
            payload = [
                {n: _json_value(getattr(row, n)) for n in names} for row in rows
            ]
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, allow_nan=False)
                fh.write("\n")
        else:
            raise ConfigurationError(f"unknown format {fmt!r}")
    except OSError as exc:
        raise ConfigurationError(f"cannot write {path!r}: {exc}") from exc
    return path


def load_rows_csv(path: str) -> list[ResultRow]:
    """Parse a CSV written by :func:`emit` back into result rows."""
    import csv

    with open(path, "r", newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        rows = []
        for rec in reader:
            rows.append(
                ResultRow(
                    drop_seed=int(rec["drop_seed"]),
                    sweep_value=float(rec["sweep_value"]),
                    se=float(rec["se"]),
                    p_min_w=float(rec["p_min_w"]),
                    ee=float(rec["ee"]),
                    mode=rec["mode"],
                )
            )
    return rows
