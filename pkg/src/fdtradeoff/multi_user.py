"""Minimum-power time sharing across user pairs at a fixed total rate.

The problem: choose time shares gamma[i, j] and time-averaged rates
rhat[i, j] = gamma[i, j] * rate[i, j] so that the total transmit power

    sum_ij gamma[i, j] * P_ij(rhat[i, j] / gamma[i, j])

is minimized subject to sum(gamma) <= 1, sum(rhat) == r_tot, and per-user
fairness floors on row/column time shares.  The substitution to averaged
rates makes each term the perspective of the convex per-pair power curve, so
the whole problem is convex and has zero duality gap.

The solver is a dual decomposition on the throughput constraint: for a rate
price mu, each pair's best operating point has a closed form (invert the
marginal-power curve), and the remaining choice of time shares is a small
linear program over the fairness polytope.  A safeguarded secant/bisection
search drives the delivered rate to r_tot; the primal is recovered exactly by
combining the two bracketing points, and dual certificates from the LP bound
the gap, which is checked against the configured tolerance before returning.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from . import single_pair
from .channel import Scenario
from .errors import (
    ConfigurationError,
    ConvergenceError,
    PreconditionViolated,
    SolverError,
)
from .single_pair import GainTriple

LN2 = math.log(2.0)

# Bracket width (relative to the price) at which the dual search stops.
_PRICE_RTOL = 1e-13


@dataclass(frozen=True)
class SolverConfig:
    """Tolerances and caps for the dual search."""

    max_iters: int = 200
    tol_gap: float = 1e-5
    tol_feas: float = 1e-6
    share_floor: float = 1e-9

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not (self.tol_gap > 0 and self.tol_feas > 0):
            raise ValueError("tolerances must be > 0")
        if not 0 < self.share_floor <= 1e-3:
            raise ValueError("share_floor must be in (0, 1e-3]")


DEFAULT_CONFIG = SolverConfig()


@dataclass
class Allocation:
    """Time shares and time-averaged rates over the M x N pair grid."""

    time_share: np.ndarray
    avg_rate: np.ndarray

    def __post_init__(self):
        self.time_share = np.asarray(self.time_share, dtype=float)
        self.avg_rate = np.asarray(self.avg_rate, dtype=float)
        if self.time_share.shape != self.avg_rate.shape:
            raise ValueError("time_share and avg_rate shapes differ")
        if np.any(self.time_share < -1e-12) or np.any(self.time_share > 1 + 1e-9):
            raise ValueError("time shares must lie in [0, 1]")
        if np.any(self.avg_rate < -1e-12):
            raise ValueError("averaged rates must be >= 0")
        carrying = self.avg_rate > 1e-15
        if np.any(carrying & (self.time_share <= 0)):
            raise ValueError("a pair with positive rate needs positive time")


@dataclass
class LinkAllocation:
    """Per-link time shares and averaged rates for the half-duplex baseline."""

    time_share_up: np.ndarray
    avg_rate_up: np.ndarray
    time_share_down: np.ndarray
    avg_rate_down: np.ndarray


@dataclass(frozen=True)
class DualVars:
    """Multipliers of the time budget, throughput, and fairness constraints."""

    time_price: float
    rate_price: float
    up_floor_prices: np.ndarray
    down_floor_prices: np.ndarray

    def __post_init__(self):
        if self.time_price < 0:
            raise ValueError("time_price must be >= 0")
        if np.any(np.asarray(self.up_floor_prices) < 0):
            raise ValueError("up_floor_prices must be >= 0")
        if np.any(np.asarray(self.down_floor_prices) < 0):
            raise ValueError("down_floor_prices must be >= 0")


@dataclass(frozen=True)
class Residuals:
    """Constraint violations of a returned allocation (0 means satisfied)."""

    time_budget: float
    rate_abs: float
    up_floor: float
    down_floor: float

    def worst(self) -> float:
        return max(self.time_budget, self.rate_abs, self.up_floor, self.down_floor)


@dataclass
class MinPowerSolution:
    """Result of a minimum-power solve, with optimality certificates."""

    power_w: float
    allocation: Allocation | LinkAllocation
    duals: DualVars
    gap_rel: float
    residuals: Residuals
    price_evals: int


def perspective_cost(time_share: float, avg_rate: float, gains: GainTriple) -> float:
    """Power cost gamma * P(rhat / gamma) with the closure value 0 at (0, 0)."""
    if avg_rate < 0:
        raise ValueError("avg_rate must be >= 0")
    if not 0 <= time_share <= 1:
        raise ValueError("time_share must lie in [0, 1]")
    if time_share == 0:
        if avg_rate > 0:
            raise PreconditionViolated("positive rate with zero time has infinite cost")
        return 0.0
    power, _ = single_pair.min_power(avg_rate / time_share, gains)
    return time_share * power


def pair_subproblem(
    duals: DualVars,
    gains: GainTriple,
    config: SolverConfig | None = None,
    row: int = 0,
    col: int = 0,
) -> tuple[float, float]:
    """Best (time_share, avg_rate) of one pair against fixed prices.

    Minimizes ``perspective_cost + (time_price - nu_row - xi_col)*gamma
    - rate_price*rhat`` over gamma in [0, 1], rhat >= 0.  The inner rate
    choice inverts the marginal power curve; the time share is then bang-bang
    on the sign of the reduced cost, with ties broken to zero.
    """
    del config  # closed form, no tolerances needed
    reduced = (
        duals.time_price
        - float(np.asarray(duals.up_floor_prices)[row])
        - float(np.asarray(duals.down_floor_prices)[col])
    )
    mu = duals.rate_price
    if mu <= 0:
        rate = 0.0
        value = 0.0
    else:
        rate = single_pair.rate_at_marginal_power(mu, gains)
        power = single_pair.min_power(rate, gains)[0] if rate > 0 else 0.0
        value = power - mu * rate
    if value + reduced >= 0:
        return 0.0, 0.0
    return 1.0, rate


class _FdArms:
    """Vectorized closed forms over the candidate full-duplex pairs."""

    def __init__(self, h_up, h_down, h_cci, rsi):
        self.h_up = np.asarray(h_up, dtype=float)
        self.h_down = np.asarray(h_down, dtype=float)
        self.h_cci = np.asarray(h_cci, dtype=float)
        c = 1.0 + rsi
        self.c = c
        self.up_margin = self.h_up - c * self.h_cci
        self.down_margin = self.h_down - self.h_cci
        if np.any(self.up_margin <= 0) or np.any(self.down_margin <= 0):
            raise PreconditionViolated("arm set contains a blocked pair")
        self.t_down = self.down_margin * c / self.up_margin
        self.boundary_rate = np.abs(np.log2(self.t_down))
        self.h_eff = np.maximum(self.h_down, self.h_up / c)
        self.sqrt_bc = np.sqrt(c * self.up_margin * self.down_margin)
        self.c_hcci = c * self.h_cci
        self.hh = self.h_up * self.h_down
        self.price_floor = LN2 / self.h_eff

    @property
    def n(self) -> int:
        return self.h_up.size

    def power(self, rates: np.ndarray) -> np.ndarray:
        a = np.exp2(rates)
        p_down = (a - 1.0) / self.h_down
        p_up = (a - 1.0) * self.c / self.h_up
        p_mid = (
            2.0 * np.sqrt(a) * self.sqrt_bc
            + (1.0 + a) * self.c_hcci
            - self.h_up
            - self.c * self.h_down
        ) / self.hh
        t_up = 1.0 / self.t_down
        return np.where(a <= self.t_down, p_down, np.where(a <= t_up, p_up, p_mid))

    def rates_at_price(self, price: float) -> np.ndarray:
        """Per-arm rate where the marginal power equals ``price``."""
        edge = np.log2(np.maximum(price * self.h_eff / LN2, 1.0))
        k = price * self.hh / LN2
        bc = self.sqrt_bc * self.sqrt_bc
        z = 2.0 * k / (self.sqrt_bc + np.sqrt(bc + 4.0 * self.c_hcci * k))
        interior = np.maximum(2.0 * np.log2(np.maximum(z, 1.0)), self.boundary_rate)
        return np.where(edge <= self.boundary_rate, edge, interior)

    def marginal(self, rate: float) -> np.ndarray:
        a = math.pow(2.0, rate)
        on_edge = a <= np.maximum(self.t_down, 1.0 / self.t_down)
        edge = a * LN2 / self.h_eff
        interior = LN2 * (self.sqrt_bc * math.sqrt(a) + a * self.c_hcci) / self.hh
        return np.where(on_edge, edge, interior)


class _HdArms:
    """Vectorized single-link costs for the half-duplex baseline."""

    def __init__(self, h):
        self.h = np.asarray(h, dtype=float)
        self.price_floor = LN2 / self.h

    @property
    def n(self) -> int:
        return self.h.size

    def power(self, rates: np.ndarray) -> np.ndarray:
        return (np.exp2(rates) - 1.0) / self.h

    def rates_at_price(self, price: float) -> np.ndarray:
        return np.log2(np.maximum(price * self.h / LN2, 1.0))

    def marginal(self, rate: float) -> np.ndarray:
        return math.pow(2.0, rate) * LN2 / self.h


class _TimeShareLp:
    """min w . gamma over the fairness polytope, with dual extraction."""

    def __init__(self, row_of, col_of, m, n, floor_up, floor_down):
        self.row_of = np.asarray(row_of, dtype=int)
        self.col_of = np.asarray(col_of, dtype=int)
        self.m, self.n = m, n
        self.floor_up = floor_up
        self.floor_down = floor_down
        k = self.row_of.size
        self.k = k
        self.trivial_floors = (m * floor_up <= 1e-15) and (n * floor_down <= 1e-15)
        a_ub = np.zeros((1 + m + n, k))
        a_ub[0, :] = 1.0
        for idx in range(k):
            if self.row_of[idx] >= 0:
                a_ub[1 + self.row_of[idx], idx] = -1.0
            if self.col_of[idx] >= 0:
                a_ub[1 + m + self.col_of[idx], idx] = -1.0
        self.a_ub = a_ub
        self.b_ub = np.concatenate(
            [[1.0], np.full(m, -floor_up), np.full(n, -floor_down)]
        )

    def feasible(self) -> bool:
        if self.trivial_floors:
            return True
        res = linprog(
            np.zeros(self.k),
            A_ub=self.a_ub,
            b_ub=self.b_ub,
            bounds=(0.0, 1.0),
            method="highs",
        )
        return bool(res.success)

    def solve(self, w: np.ndarray):
        """Return (gamma, time_price, up_floor_prices, down_floor_prices)."""
        m, n = self.m, self.n
        if self.k == 1:
            return self._solve_single(float(w[0]))
        if self.trivial_floors:
            best = int(np.argmin(w))
            gamma = np.zeros(self.k)
            lam = 0.0
            if w[best] < 0:
                gamma[best] = 1.0
                lam = -float(w[best])
            return gamma, lam, np.zeros(m), np.zeros(n)
        res = linprog(
            w,
            A_ub=self.a_ub,
            b_ub=self.b_ub,
            bounds=(0.0, 1.0),
            method="highs",
        )
        if not res.success:
            raise SolverError(f"time-share LP failed: {res.message}")
        marg = res.ineqlin.marginals
        lam = max(-float(marg[0]), 0.0)
        nu = np.clip(-marg[1 : 1 + m], 0.0, None)
        xi = np.clip(-marg[1 + m :], 0.0, None)
        return res.x, lam, nu, xi

    def _solve_single(self, w: float):
        m, n = self.m, self.n
        lower = 0.0
        if self.row_of[0] >= 0:
            lower = max(lower, self.floor_up)
        if self.col_of[0] >= 0:
            lower = max(lower, self.floor_down)
        nu = np.zeros(m)
        xi = np.zeros(n)
        if w < 0:
            return np.array([1.0]), -w, nu, xi
        if w > 0 and lower > 0:
            # Floor binds; assign the whole reduced cost to one active floor.
            if self.row_of[0] >= 0 and self.floor_up >= self.floor_down:
                nu[self.row_of[0]] = w
            elif self.col_of[0] >= 0:
                xi[self.col_of[0]] = w
            else:
                nu[self.row_of[0]] = w
        return np.array([lower]), 0.0, nu, xi


@dataclass
class _PricePoint:
    price: float
    gamma: np.ndarray
    rates: np.ndarray
    delivered: float  # sum(gamma * rates)
    lp_value: float  # sum(gamma * w)
    time_price: float
    nu: np.ndarray
    xi: np.ndarray
    w: np.ndarray


class _DualSearch:
    """Safeguarded secant/bisection on the delivered rate vs. price curve."""

    def __init__(self, arms, lp, r_tot, config):
        self.arms = arms
        self.lp = lp
        self.r_tot = r_tot
        self.config = config
        self.evals = 0

    def eval_price(self, price: float) -> _PricePoint:
        self.evals += 1
        if self.evals > self.config.max_iters:
            raise ConvergenceError(
                f"price search exceeded {self.config.max_iters} evaluations",
                best=None,
            )
        rates = self.arms.rates_at_price(price)
        w = self.arms.power(rates) - price * rates
        gamma, lam, nu, xi = self.lp.solve(w)
        return _PricePoint(
            price=price,
            gamma=gamma,
            rates=rates,
            delivered=float(gamma @ rates),
            lp_value=float(gamma @ w),
            time_price=lam,
            nu=nu,
            xi=xi,
            w=w,
        )

    def zero_point(self) -> _PricePoint:
        gamma, lam, nu, xi = self.lp.solve(np.zeros(self.arms.n))
        zeros = np.zeros(self.arms.n)
        return _PricePoint(0.0, gamma, zeros, 0.0, 0.0, lam, nu, xi, zeros)

    def _walk_down(self, hi: _PricePoint, price: float):
        while True:
            if price * self.arms.n < 1e-280:
                return self.zero_point(), hi
            cand = self.eval_price(price)
            if cand.delivered <= self.r_tot:
                return cand, hi
            hi = cand
            price *= 0.25

    def _walk_up(self, lo: _PricePoint, price: float):
        while True:
            cand = self.eval_price(price)
            if cand.delivered >= self.r_tot:
                return lo, cand
            lo = cand
            price *= 4.0

    def bracket(self, hint: float | None):
        """Find prices straddling the target rate.

        A hint (the price of a nearby solved instance) is probed with a tight
        window first; the price typically moves a few percent between
        adjacent grid points of a traced curve.
        """
        if hint is not None and hint > 0:
            start = hint
            step_up, step_down = 1.08, 0.96
        else:
            start = float(np.max(self.arms.marginal(self.r_tot)))
            step_up, step_down = 4.0, 0.25
        pt = self.eval_price(start)
        if pt.delivered >= self.r_tot:
            return self._walk_down(pt, start * step_down)
        return self._walk_up(pt, start * step_up)

    def _recovery_gap(self, lo: _PricePoint, hi: _PricePoint) -> float:
        gamma, rhat = _combine(lo, hi, self.r_tot)
        active = gamma > 1e-12
        per_time = np.zeros(gamma.size)
        per_time[active] = rhat[active] / gamma[active]
        power = float((gamma[active] * self.arms.power(per_time)[active]).sum())
        bound = max(
            lo.lp_value + lo.price * self.r_tot,
            hi.lp_value + hi.price * self.r_tot,
        )
        return (power - bound) / max(power, 1e-300)

    def run(self, hint: float | None):
        lo, hi = self.bracket(hint)
        # A bracketing point whose delivered rate already matches the target
        # is Lagrangian-optimal and rate-feasible at once, so the search can
        # stop; the gap certificate downstream still validates the result.
        exact = 1e-11 * max(self.r_tot, 1.0)
        # Illinois scaling keeps both bracket ends moving; the scaled
        # residuals steer the secant only, never the exit tests.
        psi_lo_s = lo.delivered - self.r_tot
        psi_hi_s = hi.delivered - self.r_tot
        side = 0
        while hi.price - lo.price > _PRICE_RTOL * hi.price:
            if min(self.r_tot - lo.delivered, hi.delivered - self.r_tot) <= exact:
                break
            width = hi.price - lo.price
            # At a vertex switch the delivered rate jumps across the target
            # and never gets small; once the bracket is tight, certify the
            # recovered combination directly instead of grinding the width.
            if width <= 1e-6 * hi.price and self._recovery_gap(lo, hi) <= 1e-10:
                break
            mid = None
            denom = psi_hi_s - psi_lo_s
            if denom > 0:
                cand = hi.price - psi_hi_s * width / denom
                pad = 1e-3 * width
                if lo.price + pad <= cand <= hi.price - pad:
                    mid = cand
            if mid is None:
                mid = lo.price + 0.5 * width
            point = self.eval_price(mid)
            psi = point.delivered - self.r_tot
            if psi >= 0:
                hi = point
                psi_hi_s = psi
                if side == 1:
                    psi_lo_s *= 0.5
                side = 1
            else:
                lo = point
                psi_lo_s = psi
                if side == -1:
                    psi_hi_s *= 0.5
                side = -1
        return lo, hi


def _combine(lo: _PricePoint, hi: _PricePoint, r_tot: float):
    """Convex-combine the bracketing points to hit the rate target exactly."""
    psi_hi = hi.delivered - r_tot
    psi_lo = lo.delivered - r_tot
    span = psi_hi - psi_lo
    theta = psi_hi / span if span > 0 else 0.0
    gamma = theta * lo.gamma + (1.0 - theta) * hi.gamma
    rhat = theta * lo.gamma * lo.rates + (1.0 - theta) * hi.gamma * hi.rates
    return gamma, rhat


def _full_dual_value(point: _PricePoint, lp: _TimeShareLp, r_tot: float) -> float:
    """Lower bound from dualizing every constraint at this point's prices."""
    reduced = point.w + point.time_price
    if lp.m:
        row_adj = np.where(lp.row_of >= 0, point.nu[np.maximum(lp.row_of, 0)], 0.0)
        reduced = reduced - row_adj
    if lp.n:
        col_adj = np.where(lp.col_of >= 0, point.xi[np.maximum(lp.col_of, 0)], 0.0)
        reduced = reduced - col_adj
    return (
        float(np.minimum(reduced, 0.0).sum())
        - point.time_price
        + point.price * r_tot
        + lp.floor_up * float(point.nu.sum())
        + lp.floor_down * float(point.xi.sum())
    )


def _residuals(gamma, rhat, lp: _TimeShareLp, r_tot: float) -> Residuals:
    time_res = max(float(gamma.sum()) - 1.0, 0.0)
    rate_res = abs(float(rhat.sum()) - r_tot)
    up_res = down_res = 0.0
    if lp.m and lp.floor_up > 0:
        sums = np.zeros(lp.m)
        mask = lp.row_of >= 0
        np.add.at(sums, lp.row_of[mask], gamma[mask])
        up_res = max(float((lp.floor_up - sums).max()), 0.0)
    if lp.n and lp.floor_down > 0:
        sums = np.zeros(lp.n)
        mask = lp.col_of >= 0
        np.add.at(sums, lp.col_of[mask], gamma[mask])
        down_res = max(float((lp.floor_down - sums).max()), 0.0)
    return Residuals(time_res, rate_res, up_res, down_res)


def _solve_arms(r_tot, arms, lp, config, mu_hint):
    """Core dual search shared by the full-duplex and half-duplex solvers."""
    search = _DualSearch(arms, lp, r_tot, config)
    if r_tot <= 0:
        base = search.zero_point()
        duals = DualVars(0.0, 0.0, np.zeros(lp.m), np.zeros(lp.n))
        residuals = _residuals(base.gamma, np.zeros(arms.n), lp, 0.0)
        return 0.0, base.gamma, np.zeros(arms.n), duals, 0.0, residuals, search.evals

    lo, hi = search.run(mu_hint)
    gamma, rhat = _combine(lo, hi, r_tot)

    # Inactive arms carry no rate by construction, so they cost nothing.
    per_time = np.zeros(arms.n)
    active = gamma > config.share_floor
    per_time[active] = rhat[active] / gamma[active]
    arm_power = arms.power(per_time)
    power = float((gamma[active] * arm_power[active]).sum())

    bound = max(
        lo.lp_value + lo.price * r_tot,
        hi.lp_value + hi.price * r_tot,
        _full_dual_value(lo, lp, r_tot),
        _full_dual_value(hi, lp, r_tot),
    )
    gap_rel = (power - bound) / max(power, 1e-300)
    residuals = _residuals(gamma, rhat, lp, r_tot)

    better = hi if (hi.lp_value + hi.price * r_tot) >= (lo.lp_value + lo.price * r_tot) else lo
    duals = DualVars(better.time_price, better.price, better.nu, better.xi)

    if gap_rel > config.tol_gap or residuals.worst() > config.tol_feas:
        raise ConvergenceError(
            f"tolerances not met: gap={gap_rel:.3e}, residual={residuals.worst():.3e}",
            best=(power, gamma, rhat),
        )
    return power, gamma, rhat, duals, gap_rel, residuals, search.evals


def valid_pair_mask(scenario: Scenario) -> np.ndarray:
    """Boolean (M, N) mask of pairs passing the full-duplex advantage check."""
    c = 1.0 + scenario.rsi
    return scenario.h_cci * c < np.minimum(
        scenario.h_up[:, None], scenario.h_down[None, :]
    )


def solve_min_total_power(
    r_tot: float,
    scenario: Scenario,
    config: SolverConfig | None = None,
    *,
    mu_hint: float | None = None,
) -> MinPowerSolution:
    """Minimum total transmit power (watts) delivering ``r_tot`` bit/s/Hz.

    Pairs failing the full-duplex advantage check are rejected unless the
    scenario allows excluding them (their time share is forced to zero).
    Raises :class:`ConvergenceError` if the duality gap or feasibility
    tolerances cannot be certified within the iteration cap.
    """
    if config is None:
        config = DEFAULT_CONFIG
    if r_tot < 0:
        raise ValueError("r_tot must be >= 0")
    if scenario.m == 0 or scenario.n == 0:
        raise ConfigurationError("scenario has no user pairs")
    mask = valid_pair_mask(scenario)
    if not mask.all():
        if not scenario.allow_pair_exclusion:
            bad = np.argwhere(~mask)
            raise PreconditionViolated(
                f"{bad.shape[0]} pair(s) cannot beat half-duplex, e.g. "
                f"(i={bad[0][0]}, j={bad[0][1]}); set allow_pair_exclusion "
                "to drop them"
            )
        if not mask.any():
            raise ConfigurationError("every pair is excluded")
    rows, cols = np.nonzero(mask)
    arms = _FdArms(
        scenario.h_up[rows],
        scenario.h_down[cols],
        scenario.h_cci[rows, cols],
        scenario.rsi,
    )
    lp = _TimeShareLp(
        rows, cols, scenario.m, scenario.n,
        scenario.min_share_up, scenario.min_share_down,
    )
    if not mask.all() and not lp.feasible():
        raise ConfigurationError(
            "fairness floors are unreachable once blocked pairs are excluded"
        )
    power, gamma, rhat, duals, gap, residuals, evals = _solve_arms(
        r_tot, arms, lp, config, mu_hint
    )
    gamma_mat = np.zeros((scenario.m, scenario.n))
    rhat_mat = np.zeros((scenario.m, scenario.n))
    gamma_mat[rows, cols] = gamma
    rhat_mat[rows, cols] = rhat
    return MinPowerSolution(
        power_w=power,
        allocation=Allocation(gamma_mat, rhat_mat),
        duals=duals,
        gap_rel=gap,
        residuals=residuals,
        price_evals=evals,
    )


def energy_efficiency(se: float, power_w: float, scenario: Scenario) -> float:
    """Bits per joule delivered at spectral efficiency ``se`` and power ``power_w``."""
    return scenario.bandwidth_hz * se / (scenario.omega * power_w + scenario.p_fix_w)


def ee_at(
    r_tot: float,
    scenario: Scenario,
    config: SolverConfig | None = None,
    *,
    mu_hint: float | None = None,
) -> float:
    """Best energy efficiency (bit/J) at total rate ``r_tot`` bit/s/Hz."""
    if r_tot == 0:
        return 0.0
    sol = solve_min_total_power(r_tot, scenario, config, mu_hint=mu_hint)
    return energy_efficiency(r_tot, sol.power_w, scenario)


def hd_baseline_min_power(
    r_tot: float,
    scenario: Scenario,
    config: SolverConfig | None = None,
    *,
    mu_hint: float | None = None,
) -> MinPowerSolution:
    """Half-duplex baseline: time-share the M+N single links, same floors.

    Each link serves one direction with rate log2(1 + p*h); the same convex
    machinery applies with each link as its own arm.
    """
    if config is None:
        config = DEFAULT_CONFIG
    if r_tot < 0:
        raise ValueError("r_tot must be >= 0")
    m, n = scenario.m, scenario.n
    if m + n == 0:
        raise ConfigurationError("scenario has no links")
    total_floor = m * scenario.min_share_up + n * scenario.min_share_down
    if total_floor > 1.0 + 1e-12:
        raise ConfigurationError(
            f"half-duplex floors need {total_floor:.3f} of the frame"
        )
    arms = _HdArms(np.concatenate([scenario.h_up, scenario.h_down]))
    row_of = np.concatenate([np.arange(m), np.full(n, -1, dtype=int)])
    col_of = np.concatenate([np.full(m, -1, dtype=int), np.arange(n)])
    lp = _TimeShareLp(
        row_of, col_of, m, n, scenario.min_share_up, scenario.min_share_down
    )
    power, gamma, rhat, duals, gap, residuals, evals = _solve_arms(
        r_tot, arms, lp, config, mu_hint
    )
    allocation = LinkAllocation(
        time_share_up=gamma[:m],
        avg_rate_up=rhat[:m],
        time_share_down=gamma[m:],
        avg_rate_down=rhat[m:],
    )
    return MinPowerSolution(
        power_w=power,
        allocation=allocation,
        duals=duals,
        gap_rel=gap,
        residuals=residuals,
        price_evals=evals,
    )
