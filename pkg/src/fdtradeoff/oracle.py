"""Brute-force verifiers for the test suite.

Deliberately slow and simple: everything here recomputes from the rate
equations of the two links directly and never imports the closed forms or
the solver internals it is meant to check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import Scenario
from .errors import ConfigurationError
from .single_pair import GainTriple


def _pair_total_power(rate, h_up, h_down, h_cci, rsi, p_up):
    """Total power when the uplink takes ``p_up`` and the downlink completes
    the target rate; straight from the two rate equations."""
    c = 1.0 + rsi
    r_up = np.log2(1.0 + p_up * h_up / c)
    r_down = np.maximum(rate - r_up, 0.0)
    p_down = (np.exp2(r_down) - 1.0) * (1.0 + p_up * h_cci) / h_down
    return p_up + p_down


def _refine_min(rate, gains: GainTriple, lo, hi, resolution):
    """Scan-and-shrink search over 1-D arrays of brackets in lockstep.

    Returns the best value seen across all rounds, so minima at the bracket
    endpoints (single-direction service) are evaluated exactly.
    """
    lo = np.atleast_1d(np.asarray(lo, dtype=float))
    hi = np.atleast_1d(np.asarray(hi, dtype=float))
    rate = np.atleast_1d(np.asarray(rate, dtype=float))
    span = np.maximum(hi - lo, 0.0)
    target = resolution * np.maximum(hi, 1e-300)
    best_value = np.full(lo.shape, np.inf)
    samples = 65
    while True:
        steps = lo[:, None] + np.linspace(0.0, 1.0, samples) * span[:, None]
        totals = _pair_total_power(
            rate[:, None], gains.h_up, gains.h_down, gains.h_cci, gains.rsi, steps
        )
        best = np.argmin(totals, axis=-1)
        best_value = np.minimum(best_value, np.min(totals, axis=-1))
        if not np.any(span > target):
            return best_value
        lo = np.take_along_axis(
            steps, np.maximum(best - 1, 0)[:, None], axis=-1
        ).squeeze(-1)
        hi = np.take_along_axis(
            steps, np.minimum(best + 1, samples - 1)[:, None], axis=-1
        ).squeeze(-1)
        span = hi - lo


def oracle_min_power_single(
    rate: float, gains: GainTriple, resolution: float = 1e-6
) -> float:
    """Minimum pair power by 1-D search over the uplink power.

    For each uplink power the downlink power follows in closed form from the
    rate equality, leaving a 1-D minimization over [0, uplink-only power],
    refined by recursive bracket shrinking to the requested relative
    resolution.  Valid for any gains, including pairs where full-duplex
    cannot win (there the optimum sits at an endpoint).
    """
    if not resolution > 0:
        raise ValueError("resolution must be > 0")
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if rate == 0:
        return 0.0
    p_up_max = (math.pow(2.0, rate) - 1.0) * (1.0 + gains.rsi) / gains.h_up
    value = _refine_min(rate, gains, 0.0, p_up_max, resolution)
    return float(value[0])


# Per-time rates beyond this are never optimal; the cap keeps exp2 finite.
_RATE_CAP = 600.0


def _batch_min_power_single(rates: np.ndarray, gains: GainTriple, resolution):
    """Vector version of the single-pair oracle over many target rates."""
    rates = np.minimum(np.asarray(rates, dtype=float), _RATE_CAP)
    p_up_max = (np.exp2(rates) - 1.0) * (1.0 + gains.rsi) / gains.h_up
    values = _refine_min(rates, gains, np.zeros_like(rates), p_up_max, resolution)
    return np.where(rates > 0, values, 0.0)


def oracle_min_power_multi(
    r_tot: float,
    scenario: Scenario,
    grid_steps: int = 13,
    rounds: int = 4,
) -> tuple[float, float]:
    """Grid minimum of the time-shared problem for instances with <= 2 pairs.

    Exhaustive grid over (share_1, share_2, rate split), shrunk ``rounds``
    times around the incumbent, with per-pair powers from the single-pair
    oracle.  Returns ``(value, resolution_bound)`` where the bound combines
    the final improvement with the local variation across one grid cell.
    """
    if grid_steps < 5:
        raise ValueError("grid_steps must be >= 5")
    m, n = scenario.m, scenario.n
    if m * n > 2:
        raise ConfigurationError("multi oracle handles at most 2 pairs")
    pairs = [
        GainTriple(scenario.h_up[i], scenario.h_down[j],
                   scenario.h_cci[i, j], scenario.rsi)
        for i in range(m)
        for j in range(n)
    ]
    a, b = scenario.min_share_up, scenario.min_share_down

    if r_tot < 0:
        raise ValueError("r_tot must be >= 0")
    if r_tot == 0:
        return 0.0, 0.0

    if len(pairs) == 1:
        lo_share = max(a, b)
        shares = np.linspace(max(lo_share, 1e-9), 1.0, 4097)
        totals = shares * _batch_min_power_single(r_tot / shares, pairs[0], 1e-7)
        k = int(np.argmin(totals))
        res = abs(totals[max(k - 1, 0)] - totals[k]) + abs(
            totals[min(k + 1, totals.size - 1)] - totals[k]
        )
        return float(totals[k]), float(res)

    # Two pairs: they either share the downlink user (m=2) or the uplink
    # user (n=2); the floor structure below covers both.
    if m == 2:
        floor_1 = floor_2 = a
        floor_sum = b
    else:
        floor_1 = floor_2 = b
        floor_sum = a

    box = np.array(
        [
            [max(floor_1, 1e-9), 1.0],
            [max(floor_2, 1e-9), 1.0],
            [0.0, r_tot],
        ]
    )

    def evaluate(g1, g2, r1):
        p1 = g1 * _batch_min_power_single(r1 / g1, pairs[0], 1e-7)
        p2 = g2 * _batch_min_power_single((r_tot - r1) / g2, pairs[1], 1e-7)
        total = p1 + p2
        bad = (g1 + g2 > 1.0 + 1e-12) | (g1 + g2 < floor_sum - 1e-12)
        return np.where(bad, np.inf, total)

    best_val = np.inf
    best_pt = None
    prev_val = np.inf
    for _ in range(rounds):
        axes = [np.linspace(box[d, 0], box[d, 1], grid_steps) for d in range(3)]
        g1, g2, r1 = np.meshgrid(*axes, indexing="ij")
        vals = evaluate(g1.ravel(), g2.ravel(), r1.ravel())
        k = int(np.argmin(vals))
        if not np.isfinite(vals[k]):
            raise ConfigurationError("no feasible grid point for the floors")
        prev_val = best_val
        best_val = float(vals[k])
        best_pt = np.array([g1.ravel()[k], g2.ravel()[k], r1.ravel()[k]])
        spans = (box[:, 1] - box[:, 0]) / (grid_steps - 1)
        box = np.column_stack(
            [
                np.maximum(best_pt - spans, [max(floor_1, 1e-9), max(floor_2, 1e-9), 0.0]),
                np.minimum(best_pt + spans, [1.0, 1.0, r_tot]),
            ]
        )

    spans = (box[:, 1] - box[:, 0]) / (grid_steps - 1)
    local = 0.0
    for d in range(3):
        for sign in (-1.0, 1.0):
            probe = best_pt.copy()
            probe[d] += sign * spans[d]
            probe = np.clip(probe, [1e-9, 1e-9, 0.0], [1.0, 1.0, r_tot])
            val = float(evaluate(*(np.array([v]) for v in probe)))
            if np.isfinite(val):
                local = max(local, abs(val - best_val))
    improvement = prev_val - best_val if np.isfinite(prev_val) else 0.0
    return best_val, float(local + max(improvement, 0.0))


@dataclass(frozen=True)
class ConvexityReport:
    """Worst-case convexity diagnostics of a sampled scalar function."""

    min_second_diff: float
    min_midpoint_slack: float

    @property
    def convex(self) -> bool:
        return self.min_second_diff >= 0 and self.min_midpoint_slack >= 0


def convexity_probe(func, lo: float, hi: float, n_samples: int) -> ConvexityReport:
    """Sample ``func`` on a grid and report the worst second difference and
    the worst midpoint-inequality slack (both nonnegative for convex f)."""
    if n_samples < 3:
        raise ValueError("need at least 3 samples")
    xs = np.linspace(lo, hi, n_samples)
    ys = np.array([func(float(x)) for x in xs])
    second = ys[:-2] - 2.0 * ys[1:-1] + ys[2:]
    slack = np.inf
    stride = max(n_samples // 16, 1)
    for gap in range(2, n_samples, stride):
        x_lo, x_hi = xs[:-gap], xs[gap:]
        mids = np.array([func(float(x)) for x in 0.5 * (x_lo + x_hi)])
        slack = min(slack, float((0.5 * (ys[:-gap] + ys[gap:]) - mids).min()))
    return ConvexityReport(float(second.min()), float(slack))


def finite_difference_check(func, x: float, analytic: float, h: float) -> float:
    """Relative error between a central difference and a claimed derivative."""
    if not h > 0:
        raise ValueError("h must be > 0")
    numeric = (func(x + h) - func(x - h)) / (2.0 * h)
    scale = max(abs(analytic), 1e-300)
    return abs(numeric - analytic) / scale
