import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from fdtradeoff.channel import (
    USER_SBS_MODEL,
    USER_USER_MODEL,
    PathLossModel,
    Scenario,
    build_scenario,
    generate_drop,
    noise_power_w,
    normalized_cnr,
    path_loss_db,
)
from fdtradeoff.errors import ConfigurationError


class TestPathLoss:
    def test_table_values(self):
        assert path_loss_db(0.1, USER_SBS_MODEL) == pytest.approx(107.9, abs=1e-12)
        assert path_loss_db(1.0, USER_SBS_MODEL) == pytest.approx(145.4, abs=1e-12)
        assert path_loss_db(0.1, USER_USER_MODEL) == pytest.approx(135.78, abs=1e-12)

    def test_rejects_nonpositive_distance(self):
        with pytest.raises(ValueError):
            path_loss_db(0.0, USER_SBS_MODEL)
        with pytest.raises(ValueError):
            path_loss_db(-1.0, USER_SBS_MODEL)

    @given(
        d1=st.floats(min_value=1e-3, max_value=10.0),
        d2=st.floats(min_value=1e-3, max_value=10.0),
    )
    def test_strictly_increasing(self, d1, d2):
        if d1 == d2:
            return
        lo, hi = sorted([d1, d2])
        assert path_loss_db(lo, USER_SBS_MODEL) < path_loss_db(hi, USER_SBS_MODEL)

    def test_model_validation(self):
        with pytest.raises(ValueError):
            PathLossModel(100.0, 0.0)
        with pytest.raises(ValueError):
            PathLossModel(100.0, 30.0, -1.0)


class TestNoisePower:
    def test_reference_values(self):
        assert noise_power_w(-174.0, 1e7) == pytest.approx(10 ** (-13.4), rel=1e-12)
        assert noise_power_w(-174.0, 1.0) == pytest.approx(10 ** (-20.4), rel=1e-12)
        assert noise_power_w(0.0, 1.0) == pytest.approx(1e-3, rel=1e-12)

    def test_rejects_zero_bandwidth(self):
        with pytest.raises(ValueError):
            noise_power_w(-174.0, 0.0)


class TestNormalizedCnr:
    def test_reference_values(self):
        noise = 3.981e-14
        assert normalized_cnr(107.9, 0.0, noise) == pytest.approx(
            10 ** (-10.79) / noise, rel=1e-12
        )
        assert normalized_cnr(0.0, 0.0, 1.0) == 1.0
        # 10 dB of shadowing costs exactly a factor 10.
        assert normalized_cnr(107.9, 10.0, noise) == pytest.approx(
            normalized_cnr(107.9, 0.0, noise) / 10.0, rel=1e-12
        )

    def test_rejects_bad_noise(self):
        with pytest.raises(ValueError):
            normalized_cnr(100.0, 0.0, 0.0)

    @given(
        loss=st.floats(min_value=0.0, max_value=200.0),
        bump=st.floats(min_value=0.1, max_value=50.0),
    )
    def test_decreasing_in_loss(self, loss, bump):
        assert normalized_cnr(loss + bump, 0.0, 1e-13) < normalized_cnr(
            loss, 0.0, 1e-13
        )


class TestGenerateDrop:
    def test_deterministic(self):
        a = generate_drop(3, 4, 150.0, 99)
        b = generate_drop(3, 4, 150.0, 99)
        np.testing.assert_array_equal(a.uplink_positions, b.uplink_positions)
        np.testing.assert_array_equal(a.downlink_positions, b.downlink_positions)

    def test_containment_and_counts(self):
        drop = generate_drop(6, 6, 150.0, 5)
        assert drop.uplink_positions.shape == (6, 2)
        assert drop.downlink_positions.shape == (6, 2)
        for pos in (drop.uplink_positions, drop.downlink_positions):
            assert np.all(np.linalg.norm(pos, axis=1) <= 150.0)

    def test_area_uniform_mean_square_radius(self):
        drop = generate_drop(1000, 1000, 150.0, 7)
        d2 = np.concatenate(
            [
                np.sum(drop.uplink_positions**2, axis=1),
                np.sum(drop.downlink_positions**2, axis=1),
            ]
        )
        assert d2.mean() == pytest.approx(150.0**2 / 2.0, rel=0.05)

    def test_area_uniform_ks(self):
        drop = generate_drop(1500, 1500, 100.0, 11)
        d2 = np.sum(drop.uplink_positions**2, axis=1) / 100.0**2
        assert stats.kstest(d2, "uniform").pvalue > 0.01

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            generate_drop(0, 1, 150.0, 1)
        with pytest.raises(ValueError):
            generate_drop(1, 1, 0.0, 1)


class TestBuildScenario:
    def test_colocated_users_match(self):
        drop = generate_drop(3, 3, 150.0, 21)
        drop.downlink_positions = drop.uplink_positions.copy()
        flat = PathLossModel(145.4, 37.5, 0.0)
        flat_uu = PathLossModel(175.78, 40.0, 0.0)
        scn = build_scenario(
            drop, user_sbs_model=flat, user_user_model=flat_uu
        )
        np.testing.assert_allclose(scn.h_up, scn.h_down, rtol=1e-12)

    def test_hand_computed_cnrs(self):
        drop = generate_drop(1, 1, 150.0, 3)
        drop.uplink_positions = np.array([[100.0, 0.0]])
        drop.downlink_positions = np.array([[0.0, 50.0]])
        flat = PathLossModel(145.4, 37.5, 0.0)
        flat_uu = PathLossModel(175.78, 40.0, 0.0)
        scn = build_scenario(
            drop, user_sbs_model=flat, user_user_model=flat_uu, bandwidth_hz=1e7
        )
        noise = noise_power_w(-174.0, 1e7)
        assert scn.h_up[0] == pytest.approx(10 ** (-10.79) / noise, rel=1e-9)
        loss_down = 145.4 + 37.5 * math.log10(0.05)
        assert scn.h_down[0] == pytest.approx(
            10 ** (-loss_down / 10) / noise, rel=1e-9
        )
        d_cci = math.hypot(100.0, 50.0) / 1000.0
        loss_cci = 175.78 + 40.0 * math.log10(d_cci)
        assert scn.h_cci[0, 0] == pytest.approx(
            10 ** (-loss_cci / 10) / noise, rel=1e-9
        )

    def test_reproducible(self):
        drop = generate_drop(4, 4, 150.0, 77)
        a = build_scenario(drop, rsi=0.1)
        b = build_scenario(drop, rsi=0.1)
        np.testing.assert_array_equal(a.h_up, b.h_up)
        np.testing.assert_array_equal(a.h_cci, b.h_cci)

    def test_infeasible_floors_rejected(self):
        drop = generate_drop(4, 4, 150.0, 8)
        with pytest.raises(ConfigurationError):
            build_scenario(drop, min_share_up=0.3, min_share_down=0.1)

    def test_default_floors(self):
        drop = generate_drop(5, 5, 150.0, 8)
        scn = build_scenario(drop)
        assert scn.min_share_up == pytest.approx(0.1)
        assert scn.min_share_down == pytest.approx(0.1)

    def test_scenario_validation(self):
        with pytest.raises(ConfigurationError):
            Scenario(
                h_up=[0.0], h_down=[1.0], h_cci=[[0.1]], rsi=0.0,
                bandwidth_hz=1.0, omega=1.0, p_fix_w=0.1,
                min_share_up=0.0, min_share_down=0.0,
            )
        with pytest.raises(ConfigurationError):
            Scenario(
                h_up=[1.0], h_down=[1.0], h_cci=[[0.1]], rsi=-0.5,
                bandwidth_hz=1.0, omega=1.0, p_fix_w=0.1,
                min_share_up=0.0, min_share_down=0.0,
            )
