"""Tracing and maximizing the energy-efficiency curve over spectral efficiency.

Minimum power is convex and increasing in the total rate, so the efficiency
curve se -> W*se / (omega*P(se) + p_fix) is unimodal (rises, then falls).
That makes golden-section search exact for locating its maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Scenario
from .errors import FdTradeoffError, SolverError
from .multi_user import (
    Allocation,
    MinPowerSolution,
    SolverConfig,
    ee_at,
    energy_efficiency,
    solve_min_total_power,
)

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
_PLATEAU_TOL = 1e-12


@dataclass
class TradeoffCurve:
    """Sampled (spectral efficiency, minimum power, best efficiency) triples."""

    se_points: np.ndarray
    p_min: np.ndarray
    ee: np.ndarray

    def __post_init__(self):
        self.se_points = np.asarray(self.se_points, dtype=float)
        self.p_min = np.asarray(self.p_min, dtype=float)
        self.ee = np.asarray(self.ee, dtype=float)
        if not (self.se_points.size == self.p_min.size == self.ee.size):
            raise ValueError("curve arrays must have equal length")
        if np.any(np.diff(self.se_points) <= 0):
            raise ValueError("se_points must be strictly increasing")
        if np.any(self.ee < 0):
            raise ValueError("efficiencies must be >= 0")
        scale = max(float(self.p_min.max(initial=0.0)), 1e-300)
        if np.any(np.diff(self.p_min) < -1e-9 * scale):
            raise ValueError("minimum power must be nondecreasing in rate")


def trace_curve(
    scenario: Scenario,
    se_grid,
    config: SolverConfig | None = None,
) -> TradeoffCurve:
    """Evaluate the minimum-power and efficiency curve on a rate grid.

    Points are solved in order so each solve warm-starts the next price
    search; results are identical to cold starts up to solver tolerance.
    """
    se_grid = np.asarray(se_grid, dtype=float)
    p_min = np.empty(se_grid.size)
    ee = np.empty(se_grid.size)
    hint = None
    for k, se in enumerate(se_grid):
        try:
            sol = solve_min_total_power(float(se), scenario, config, mu_hint=hint)
        except FdTradeoffError as exc:
            raise SolverError(f"curve point {k} (se={se}): {exc}") from exc
        p_min[k] = sol.power_w
        ee[k] = energy_efficiency(float(se), sol.power_w, scenario) if se > 0 else 0.0
        if sol.duals.rate_price > 0:
            hint = sol.duals.rate_price
    return TradeoffCurve(se_grid, p_min, ee)


def unimodality_report(curve: TradeoffCurve, tol: float = 1e-9):
    """Check that the efficiency sequence rises then falls (plateaus allowed).

    ``tol`` is relative to the largest efficiency on the curve.  Returns
    ``(True, None)`` for unimodal curves, otherwise ``(False, index)`` with
    the index of the first interior local minimum.
    """
    ee = np.asarray(curve.ee, dtype=float)
    eps = tol * max(float(np.abs(ee).max(initial=0.0)), 1.0)
    falling = False
    min_idx = 0
    for k in range(1, ee.size):
        step = ee[k] - ee[k - 1]
        if step < -eps:
            if not falling:
                falling = True
                min_idx = k
            elif ee[k] < ee[min_idx]:
                min_idx = k
        elif step > eps:
            if falling:
                return False, min_idx
        elif falling and ee[k] < ee[min_idx]:
            min_idx = k
    return True, None


def max_ee(
    scenario: Scenario,
    se_interval: tuple[float, float],
    tol_se: float = 1e-4,
    config: SolverConfig | None = None,
) -> tuple[float, float, Allocation]:
    """Maximize efficiency over a spectral-efficiency interval.

    Golden-section search on the unimodal efficiency curve; converges to
    within ``tol_se`` of the interior maximizer, or to the closer endpoint
    when the true maximizer lies outside the interval.  If the curve is flat
    across a bracket (within 1e-12 relative) the bracket midpoint is taken.
    """
    lo, hi = float(se_interval[0]), float(se_interval[1])
    if not (0 <= lo < hi):
        raise ValueError("need 0 <= lower < upper spectral efficiency")
    if not tol_se > 0:
        raise ValueError("tol_se must be > 0")

    hint_box = {"mu": None}

    def f(se: float) -> float:
        if se == 0:
            return 0.0
        sol = solve_min_total_power(se, scenario, config, mu_hint=hint_box["mu"])
        if sol.duals.rate_price > 0:
            hint_box["mu"] = sol.duals.rate_price
        return energy_efficiency(se, sol.power_w, scenario)

    x1 = hi - _INV_PHI * (hi - lo)
    x2 = lo + _INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while hi - lo > tol_se:
        scale = max(abs(f1), abs(f2), 1e-300)
        if abs(f1 - f2) <= _PLATEAU_TOL * scale:
            lo, hi = x1, x2
            break
        if f1 > f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_PHI * (hi - lo)
            f2 = f(x2)
    se_star = 0.5 * (lo + hi)
    final = solve_min_total_power(se_star, scenario, config, mu_hint=hint_box["mu"])
    ee_star = energy_efficiency(se_star, final.power_w, scenario)
    return se_star, ee_star, final.allocation
