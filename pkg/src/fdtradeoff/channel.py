"""Single-cell geometry and propagation.

Generates random user drops inside a disk-shaped small cell (base station at
the origin) and converts geometry plus propagation parameters into the
noise-normalized carrier-to-noise ratios (CNRs) consumed by the solvers.
Everything downstream of ``build_scenario`` is unit-free: transmit powers are
in watts and ``p * cnr`` is a plain SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

LN10 = math.log(10.0)

# Default propagation models for a picocell deployment, in dB:
# loss(d) = intercept_db + slope_db * log10(d_km), log-normal shadowing on top.
USER_SBS_PATH_LOSS_DB = (145.4, 37.5)
USER_USER_PATH_LOSS_DB = (175.78, 40.0)
SHADOW_SIGMA_DB = 10.0
NOISE_DENSITY_DBM_PER_HZ = -174.0

# Derived shadowing stream offset so a drop seed fixes both geometry and
# shadowing without the two RNGs colliding.
_SHADOW_SEED_OFFSET = 0x5EED


@dataclass(frozen=True)
class PathLossModel:
    """Log-distance path loss with optional log-normal shadowing.

    ``intercept_db`` is the loss at 1 km, ``slope_db`` the loss added per
    decade of distance, ``shadow_sigma_db`` the shadowing standard deviation.
    """

    intercept_db: float
    slope_db: float
    shadow_sigma_db: float = 0.0

    def __post_init__(self):
        if not self.slope_db > 0:
            raise ValueError(f"slope_db must be > 0, got {self.slope_db}")
        if self.shadow_sigma_db < 0:
            raise ValueError("shadow_sigma_db must be >= 0")


USER_SBS_MODEL = PathLossModel(*USER_SBS_PATH_LOSS_DB, SHADOW_SIGMA_DB)
USER_USER_MODEL = PathLossModel(*USER_USER_PATH_LOSS_DB, SHADOW_SIGMA_DB)


@dataclass
class UserDrop:
    """One random realization of user positions, meters, cell center at origin."""

    uplink_positions: np.ndarray  # (m, 2)
    downlink_positions: np.ndarray  # (n, 2)
    cell_radius_m: float
    seed: int

    @property
    def m(self) -> int:
        return self.uplink_positions.shape[0]

    @property
    def n(self) -> int:
        return self.downlink_positions.shape[0]


@dataclass
class Scenario:
    """Full multi-user problem instance in noise-normalized units.

    ``h_up[i]`` and ``h_down[j]`` are the direct-link CNRs of uplink user i
    and downlink user j; ``h_cci[i, j]`` is the cross-interference CNR from
    uplink user i into downlink user j.  ``rsi`` is the residual
    self-interference power at the base station, normalized to the noise
    floor.  ``omega`` is the inverse power-amplifier efficiency.
    """

    h_up: np.ndarray
    h_down: np.ndarray
    h_cci: np.ndarray
    rsi: float
    bandwidth_hz: float
    omega: float
    p_fix_w: float
    min_share_up: float
    min_share_down: float
    # Allow the solver to force the time share of pairs where full-duplex
    # cannot beat half-duplex to zero instead of rejecting the scenario.
    allow_pair_exclusion: bool = field(default=False)

    def __post_init__(self):
        self.h_up = np.atleast_1d(np.asarray(self.h_up, dtype=float))
        self.h_down = np.atleast_1d(np.asarray(self.h_down, dtype=float))
        self.h_cci = np.asarray(self.h_cci, dtype=float).reshape(
            self.h_up.size, self.h_down.size
        )
        if self.h_up.size and not np.all(self.h_up > 0):
            raise ConfigurationError("all uplink CNRs must be > 0")
        if self.h_down.size and not np.all(self.h_down > 0):
            raise ConfigurationError("all downlink CNRs must be > 0")
        if self.h_cci.size and not np.all(self.h_cci >= 0):
            raise ConfigurationError("cross-interference CNRs must be >= 0")
        if self.rsi < 0:
            raise ConfigurationError("rsi must be >= 0")
        if not self.omega > 0:
            raise ConfigurationError("omega must be > 0")
        if self.p_fix_w < 0:
            raise ConfigurationError("p_fix_w must be >= 0")
        if not self.bandwidth_hz > 0:
            raise ConfigurationError("bandwidth_hz must be > 0")
        if self.min_share_up < 0 or self.min_share_down < 0:
            raise ConfigurationError("minimum time shares must be >= 0")
        if self.m * self.min_share_up > 1.0 + 1e-12:
            raise ConfigurationError(
                f"uplink fairness floors infeasible: {self.m} users x "
                f"{self.min_share_up} > 1"
            )
        if self.n * self.min_share_down > 1.0 + 1e-12:
            raise ConfigurationError(
                f"downlink fairness floors infeasible: {self.n} users x "
                f"{self.min_share_down} > 1"
            )

    @property
    def m(self) -> int:
        return self.h_up.size

    @property
    def n(self) -> int:
        return self.h_down.size


def path_loss_db(distance_km: float, model: PathLossModel) -> float:
    """Median path loss in dB at ``distance_km``; no shadowing applied."""
    if not distance_km > 0:
        raise ValueError(f"distance must be > 0 km, got {distance_km}")
    return model.intercept_db + model.slope_db * math.log10(distance_km)


def noise_power_w(density_dbm_per_hz: float, bandwidth_hz: float) -> float:
    """Thermal noise power in watts over ``bandwidth_hz``."""
    if not bandwidth_hz > 0:
        raise ValueError(f"bandwidth must be > 0 Hz, got {bandwidth_hz}")
    dbm = density_dbm_per_hz + 10.0 * math.log10(bandwidth_hz)
    return 10.0 ** ((dbm - 30.0) / 10.0)


def normalized_cnr(loss_db: float, shadow_db: float, noise_w: float) -> float:
    """Noise-normalized CNR for a link with the given loss and shadowing."""
    if not noise_w > 0:
        raise ValueError(f"noise power must be > 0 W, got {noise_w}")
    return 10.0 ** (-(loss_db + shadow_db) / 10.0) / noise_w


def generate_drop(m: int, n: int, radius_m: float, seed: int) -> UserDrop:
    """Drop ``m`` uplink and ``n`` downlink users uniformly over the cell disk.

    Area-uniform sampling: radius drawn as R*sqrt(u).  Deterministic per seed.
    """
    if m < 1 or n < 1:
        raise ValueError("need at least one user on each side")
    if not radius_m > 0:
        raise ValueError("cell radius must be > 0")
    rng = np.random.default_rng(seed)

    def disk(count):
        r = radius_m * np.sqrt(rng.uniform(size=count))
        theta = rng.uniform(0.0, 2.0 * np.pi, size=count)
        return np.column_stack([r * np.cos(theta), r * np.sin(theta)])

    return UserDrop(disk(m), disk(n), float(radius_m), int(seed))


def build_scenario(
    drop: UserDrop,
    *,
    user_sbs_model: PathLossModel = USER_SBS_MODEL,
    user_user_model: PathLossModel = USER_USER_MODEL,
    rsi: float = 0.0,
    bandwidth_hz: float = 10e6,
    omega: float = 1.0,
    p_fix_w: float = 0.1,
    min_share_up: float | None = None,
    min_share_down: float | None = None,
    noise_density_dbm_per_hz: float = NOISE_DENSITY_DBM_PER_HZ,
    shadow_seed: int | None = None,
    min_distance_m: float = 1.0,
    allow_pair_exclusion: bool = False,
) -> Scenario:
    """Turn a user drop into a noise-normalized :class:`Scenario`.

    Shadowing is log-normal in dB, drawn once per link from ``shadow_seed``
    (derived from the drop seed when not given), so rebuilding with the same
    inputs reproduces the scenario bit for bit.  Pairwise distances are
    clamped to ``min_distance_m`` so co-located users stay finite.
    """
    m, n = drop.m, drop.n
    if min_share_up is None:
        min_share_up = 1.0 / (2.0 * max(m, n))
    if min_share_down is None:
        min_share_down = 1.0 / (2.0 * max(m, n))
    if shadow_seed is None:
        shadow_seed = drop.seed + _SHADOW_SEED_OFFSET
    rng = np.random.default_rng(shadow_seed)
    shadow_up = rng.normal(0.0, user_sbs_model.shadow_sigma_db, size=m)
    shadow_down = rng.normal(0.0, user_sbs_model.shadow_sigma_db, size=n)
    shadow_cci = rng.normal(0.0, user_user_model.shadow_sigma_db, size=(m, n))

    noise = noise_power_w(noise_density_dbm_per_hz, bandwidth_hz)
    min_km = min_distance_m / 1000.0

    def direct_cnrs(positions, shadows):
        d_km = np.maximum(np.linalg.norm(positions, axis=1) / 1000.0, min_km)
        return np.array(
            [
                normalized_cnr(path_loss_db(d, user_sbs_model), s, noise)
                for d, s in zip(d_km, shadows)
            ]
        )

    h_up = direct_cnrs(drop.uplink_positions, shadow_up)
    h_down = direct_cnrs(drop.downlink_positions, shadow_down)

    diff = drop.uplink_positions[:, None, :] - drop.downlink_positions[None, :, :]
    d_cci_km = np.maximum(np.linalg.norm(diff, axis=2) / 1000.0, min_km)
    h_cci = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            loss = path_loss_db(d_cci_km[i, j], user_user_model)
            h_cci[i, j] = normalized_cnr(loss, shadow_cci[i, j], noise)

    return Scenario(
        h_up=h_up,
        h_down=h_down,
        h_cci=h_cci,
        rsi=rsi,
        bandwidth_hz=bandwidth_hz,
        omega=omega,
        p_fix_w=p_fix_w,
        min_share_up=min_share_up,
        min_share_down=min_share_down,
        allow_pair_exclusion=allow_pair_exclusion,
    )
