"""Closed-form power allocation for one full-duplex user pair.

A pair is an uplink user and a downlink user served simultaneously by the
base station.  With noise-normalized CNRs, residual self-interference ``rsi``
at the base station, and cross interference ``h_cci`` between the two users,
the per-Hz sum rate of a power split (p_up, p_down) is

    log2(1 + p_up*h_up/(1+rsi)) + log2(1 + p_down*h_down/(1 + p_up*h_cci)).

For a target sum rate the minimum total transmit power has three regimes:
all power on the downlink, all power on the uplink, or a shared interior
split.  All three have closed forms, the piecewise function is C1 and convex
in the rate, and the resulting efficiency curve rate/(omega*P + p_fix) is
unimodal.  Those facts drive everything in :mod:`fdtradeoff.multi_user`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from scipy.optimize import brentq

from .errors import PreconditionViolated, SolverError

LN2 = math.log(2.0)

# The closed forms are exact; only the interior split recovery is numeric.
TOL_RATE = 1e-9  # absolute, bit/s/Hz
TOL_SPLIT = 1e-9  # relative, on the recovered power sum


@dataclass(frozen=True)
class GainTriple:
    """Noise-normalized link gains of one user pair."""

    h_up: float
    h_down: float
    h_cci: float
    rsi: float

    def __post_init__(self):
        if not (self.h_up > 0 and self.h_down > 0):
            raise ValueError("direct-link CNRs must be > 0")
        if self.h_cci < 0:
            raise ValueError("cross-interference CNR must be >= 0")
        if self.rsi < 0:
            raise ValueError("rsi must be >= 0")


@dataclass(frozen=True)
class PowerSplit:
    """Per-direction transmit powers, watts (noise-normalized units)."""

    p_up: float
    p_down: float

    def __post_init__(self):
        if self.p_up < 0 or self.p_down < 0:
            raise ValueError("powers must be >= 0")

    @property
    def total(self) -> float:
        return self.p_up + self.p_down


class CaseLabel(Enum):
    """Which regime of the minimum-power solution is active."""

    DOWNLINK_ONLY = "downlink_only"
    UPLINK_ONLY = "uplink_only"
    INTERIOR = "interior"


def fd_sum_rate(split: PowerSplit, gains: GainTriple) -> float:
    """Sum rate of the pair in bit/s/Hz for a given power split."""
    up_snr = split.p_up * gains.h_up / (1.0 + gains.rsi)
    down_snr = split.p_down * gains.h_down / (1.0 + split.p_up * gains.h_cci)
    return math.log2(1.0 + up_snr) + math.log2(1.0 + down_snr)


def fd_necessary_condition(gains: GainTriple) -> bool:
    """True when the pair can possibly beat half-duplex at equal rate.

    Requires the cross interference, inflated by the self-interference
    penalty, to sit below both direct links.  When this fails, serving one
    direction at a time never costs more power (see ``compare_ee``).
    """
    return gains.h_cci * (1.0 + gains.rsi) < min(gains.h_up, gains.h_down)


def _thresholds(gains: GainTriple) -> tuple[float, float]:
    """Case thresholds (t_down, t_up) on A = 2**rate; reciprocals of each other."""
    c = 1.0 + gains.rsi
    up_margin = gains.h_up - c * gains.h_cci
    down_margin = gains.h_down - gains.h_cci
    if up_margin <= 0 or down_margin <= 0:
        raise PreconditionViolated(
            "closed forms need h_cci*(1+rsi) < min(h_up, h_down); got "
            f"h_up={gains.h_up}, h_down={gains.h_down}, "
            f"h_cci={gains.h_cci}, rsi={gains.rsi}"
        )
    t_down = down_margin * c / up_margin
    t_up = up_margin / (down_margin * c)
    return t_down, t_up


def select_case(rate: float, gains: GainTriple) -> CaseLabel:
    """Pick the active regime for a target sum rate.

    Ties at a threshold resolve to the boundary case; the interior value
    coincides there so the choice does not change the power.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    t_down, t_up = _thresholds(gains)
    a = math.pow(2.0, rate)
    if a <= t_down:
        return CaseLabel.DOWNLINK_ONLY
    if a <= t_up:
        return CaseLabel.UPLINK_ONLY
    return CaseLabel.INTERIOR


def power_downlink_only(rate: float, gains: GainTriple) -> float:
    """Total power when the whole rate rides on the downlink."""
    return (math.pow(2.0, rate) - 1.0) / gains.h_down


def power_uplink_only(rate: float, gains: GainTriple) -> float:
    """Total power when the whole rate rides on the uplink."""
    return (math.pow(2.0, rate) - 1.0) * (1.0 + gains.rsi) / gains.h_up


def power_interior(rate: float, gains: GainTriple) -> float:
    """Total power of the shared split (valid as a formula at any rate)."""
    a = math.pow(2.0, rate)
    c = 1.0 + gains.rsi
    up_margin = gains.h_up - c * gains.h_cci
    down_margin = gains.h_down - gains.h_cci
    root = math.sqrt(a * c * up_margin * down_margin)
    num = 2.0 * root + (1.0 + a) * c * gains.h_cci - gains.h_up - c * gains.h_down
    return num / (gains.h_up * gains.h_down)


_PIECES = {
    CaseLabel.DOWNLINK_ONLY: power_downlink_only,
    CaseLabel.UPLINK_ONLY: power_uplink_only,
    CaseLabel.INTERIOR: power_interior,
}


def min_power(rate: float, gains: GainTriple) -> tuple[float, CaseLabel]:
    """Minimum total transmit power for a target sum rate, plus its regime."""
    label = select_case(rate, gains)
    return _PIECES[label](rate, gains), label


def marginal_power(rate: float, gains: GainTriple) -> float:
    """Analytic derivative of ``min_power`` with respect to the rate."""
    label = select_case(rate, gains)
    a = math.pow(2.0, rate)
    c = 1.0 + gains.rsi
    if label is CaseLabel.DOWNLINK_ONLY:
        return a * LN2 / gains.h_down
    if label is CaseLabel.UPLINK_ONLY:
        return a * LN2 * c / gains.h_up
    up_margin = gains.h_up - c * gains.h_cci
    down_margin = gains.h_down - gains.h_cci
    bc = c * up_margin * down_margin
    return LN2 * (math.sqrt(bc * a) + a * c * gains.h_cci) / (gains.h_up * gains.h_down)


def rate_at_marginal_power(price: float, gains: GainTriple) -> float:
    """Inverse of ``marginal_power``: the rate where dP/dR equals ``price``.

    Returns 0 for prices at or below the slope at zero rate.  Used by the
    multi-user solver, where the rate price is the dual variable of the
    throughput constraint.
    """
    t_down, t_up = _thresholds(gains)
    c = 1.0 + gains.rsi
    h_eff = max(gains.h_down, gains.h_up / c)
    if price <= LN2 / h_eff:
        return 0.0
    boundary_rate = abs(math.log2(t_down))
    r_edge = math.log2(price * h_eff / LN2)
    if r_edge <= boundary_rate:
        return r_edge
    up_margin = gains.h_up - c * gains.h_cci
    down_margin = gains.h_down - gains.h_cci
    bc = c * up_margin * down_margin
    k = price * gains.h_up * gains.h_down / LN2
    # Stable positive root of (c*h_cci) z^2 + sqrt(bc) z - k = 0, z = sqrt(A).
    z = 2.0 * k / (math.sqrt(bc) + math.sqrt(bc + 4.0 * c * gains.h_cci * k))
    return max(2.0 * math.log2(z), boundary_rate)


def case_boundary_rate(gains: GainTriple) -> float:
    """Rate where the active boundary regime hands over to the interior one."""
    t_down, t_up = _thresholds(gains)
    return math.log2(max(t_down, t_up))


def _split_down_power(rate: float, gains: GainTriple, p_up: float) -> float:
    """Downlink power completing ``rate`` given an uplink power."""
    c = 1.0 + gains.rsi
    r_up = math.log2(1.0 + p_up * gains.h_up / c)
    r_down = max(rate - r_up, 0.0)
    return (math.pow(2.0, r_down) - 1.0) * (1.0 + p_up * gains.h_cci) / gains.h_down


def recover_split(rate: float, gains: GainTriple) -> PowerSplit:
    """Per-direction powers achieving ``min_power`` at the target rate.

    Boundary regimes are immediate.  The interior split is the stationary
    point of total power along the constant-rate curve, found by a
    safeguarded 1-D root find on the uplink power; both postconditions
    (power sum and rate residual) are checked before returning.
    """
    total, label = min_power(rate, gains)
    if label is CaseLabel.DOWNLINK_ONLY:
        return PowerSplit(0.0, total)
    if label is CaseLabel.UPLINK_ONLY:
        return PowerSplit(total, 0.0)

    c = 1.0 + gains.rsi
    p_up_max = (math.pow(2.0, rate) - 1.0) * c / gains.h_up
    hi = min(p_up_max, total)

    def slope(p_up: float) -> float:
        # d(total)/d(p_up) along the constant-rate curve.
        a = math.pow(2.0, rate)
        s = 1.0 + p_up * gains.h_up / c
        ds = gains.h_up / c
        d_down = (
            -a * ds / (s * s) * (1.0 + p_up * gains.h_cci)
            + (a / s - 1.0) * gains.h_cci
        ) / gains.h_down
        return 1.0 + d_down

    try:
        p_up = brentq(slope, 0.0, hi, xtol=1e-300, rtol=8.9e-16)
    except ValueError as exc:  # no sign change: contradicts the interior label
        raise SolverError(f"interior split bracketing failed: {exc}") from exc
    split = PowerSplit(p_up, _split_down_power(rate, gains, p_up))

    if abs(split.total - total) > TOL_SPLIT * max(total, 1e-300):
        raise SolverError(
            f"split power {split.total} disagrees with closed form {total}"
        )
    if abs(fd_sum_rate(split, gains) - rate) > TOL_RATE:
        raise SolverError("recovered split misses the target rate")
    return split


def hd_min_power(rate: float, h_up: float, h_down: float) -> float:
    """Minimum power in half-duplex mode: serve the stronger link alone."""
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if not (h_up > 0 and h_down > 0):
        raise ValueError("CNRs must be > 0")
    return (math.pow(2.0, rate) - 1.0) / max(h_up, h_down)


def fd_min_power_unrestricted(rate: float, gains: GainTriple) -> float:
    """Minimum full-duplex power without the :func:`fd_necessary_condition`.

    Total power along the constant-rate curve is convex in the uplink power
    when h_up > (1+rsi)*h_cci and concave otherwise, so the minimum is either
    the unique stationary point or an endpoint (single-direction service).
    Agrees with ``min_power`` whenever the condition holds.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if rate == 0:
        return 0.0
    c = 1.0 + gains.rsi
    p_down_only = power_downlink_only(rate, gains)
    p_up_only = power_uplink_only(rate, gains)
    best = min(p_down_only, p_up_only)
    if gains.h_up <= c * gains.h_cci:
        return best  # concave: endpoint minimum
    # Convex: golden-section over the uplink power.
    lo, hi = 0.0, p_up_only
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0

    def total(p_up):
        return p_up + _split_down_power(rate, gains, p_up)

    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f1, f2 = total(x1), total(x2)
    while hi - lo > 1e-12 * max(p_up_only, 1.0):
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = total(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = total(x2)
    return min(best, total((lo + hi) / 2.0))


def compare_ee(
    rate: float, gains: GainTriple, omega: float, p_fix: float
) -> tuple[float, float]:
    """Energy efficiency of full-duplex vs half-duplex at the same rate.

    Works on any gains: pairs failing the necessary condition fall back to
    the unrestricted minimizer, and there full-duplex never wins.
    """
    if rate < 0:
        raise ValueError("rate must be >= 0")
    if rate == 0:
        return 0.0, 0.0
    if fd_necessary_condition(gains):
        p_fd, _ = min_power(rate, gains)
    else:
        p_fd = fd_min_power_unrestricted(rate, gains)
    p_hd = hd_min_power(rate, gains.h_up, gains.h_down)
    ee_fd = rate / (omega * p_fd + p_fix)
    ee_hd = rate / (omega * p_hd + p_fix)
    return ee_fd, ee_hd
