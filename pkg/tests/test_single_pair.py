import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import gain_triples, random_invalid_gains, random_valid_gains
from fdtradeoff.errors import PreconditionViolated
from fdtradeoff.oracle import oracle_min_power_single
from fdtradeoff.single_pair import (
    CaseLabel,
    GainTriple,
    PowerSplit,
    case_boundary_rate,
    compare_ee,
    fd_min_power_unrestricted,
    fd_necessary_condition,
    fd_sum_rate,
    hd_min_power,
    marginal_power,
    min_power,
    power_downlink_only,
    power_interior,
    rate_at_marginal_power,
    recover_split,
    select_case,
)

P1_GAINS = GainTriple(5.0, 10.0, 0.5, 0.2)
P3_GAINS = GainTriple(20.0, 10.0, 0.5, 0.2)


class TestSumRate:
    def test_zero_power(self):
        assert fd_sum_rate(PowerSplit(0.0, 0.0), P3_GAINS) == 0.0

    def test_downlink_only_no_cci(self):
        gains = GainTriple(5.0, 10.0, 0.5, 0.2)
        assert fd_sum_rate(PowerSplit(0.0, 0.1), gains) == pytest.approx(1.0)

    def test_hand_value(self):
        gains = GainTriple(20.0, 10.0, 0.5, 0.2)
        expected = math.log2(1 + 2 / 1.2) + math.log2(1 + 1 / 1.05)
        assert fd_sum_rate(PowerSplit(0.1, 0.1), gains) == pytest.approx(
            expected, abs=1e-12
        )
        assert expected == pytest.approx(2.3802721, abs=1e-6)

    @given(gains=gain_triples(), p=st.floats(min_value=0.0, max_value=10.0))
    def test_nonnegative_and_increasing_in_downlink(self, gains, p):
        base = fd_sum_rate(PowerSplit(p, 0.0), gains)
        assert base >= 0.0
        assert fd_sum_rate(PowerSplit(p, 1.0), gains) > base


class TestNecessaryCondition:
    def test_examples(self):
        assert fd_necessary_condition(GainTriple(10.0, 8.0, 1.0, 0.2))
        assert not fd_necessary_condition(GainTriple(10.0, 8.0, 1.0, 20.0))

    @given(gains=gain_triples(valid=True))
    def test_valid_strategy_passes(self, gains):
        assert fd_necessary_condition(gains)

    @given(gains=gain_triples(valid=False))
    def test_invalid_strategy_fails(self, gains):
        assert not fd_necessary_condition(gains)

    @given(h_up=st.floats(0.1, 1000), h_down=st.floats(0.1, 1000),
           rsi=st.floats(0, 5))
    def test_zero_cci_always_passes(self, h_up, h_down, rsi):
        assert fd_necessary_condition(GainTriple(h_up, h_down, 0.0, rsi))


class TestSelectCase:
    def test_downlink_only_example(self):
        # threshold on 2**rate is 11.4/4.4
        assert select_case(1.0, P1_GAINS) is CaseLabel.DOWNLINK_ONLY

    def test_interior_example(self):
        assert select_case(3.0, P3_GAINS) is CaseLabel.INTERIOR

    @given(gains=gain_triples())
    def test_zero_rate_never_interior(self, gains):
        assert select_case(0.0, gains) is not CaseLabel.INTERIOR

    def test_requires_condition(self):
        with pytest.raises(PreconditionViolated):
            select_case(1.0, GainTriple(10.0, 8.0, 1.0, 20.0))


class TestMinPower:
    def test_zero_rate(self, rng):
        for _ in range(20):
            power, _ = min_power(0.0, random_valid_gains(rng))
            assert power == 0.0

    def test_downlink_case_value(self):
        power, label = min_power(1.0, P1_GAINS)
        assert label is CaseLabel.DOWNLINK_ONLY
        assert power == pytest.approx(0.1, rel=1e-12)

    def test_interior_value_against_oracle(self):
        power, label = min_power(3.0, P3_GAINS)
        assert label is CaseLabel.INTERIOR
        assert power == pytest.approx(0.2876281, abs=1e-6)
        assert power == pytest.approx(
            oracle_min_power_single(3.0, P3_GAINS, 1e-8), rel=1e-6
        )

    @given(gains=gain_triples(), rate=st.floats(min_value=0.01, max_value=10.0))
    def test_positive_iff_positive_rate(self, gains, rate):
        power, _ = min_power(rate, gains)
        assert power > 0.0

    def test_matches_oracle_sample(self, rng):
        for _ in range(40):
            gains = random_valid_gains(rng)
            rate = rng.uniform(0.05, 10.0)
            closed, _ = min_power(rate, gains)
            brute = oracle_min_power_single(rate, gains, 1e-7)
            assert closed == pytest.approx(brute, rel=1e-5)

    def test_unrestricted_agrees_when_condition_holds(self, rng):
        for _ in range(40):
            gains = random_valid_gains(rng)
            rate = rng.uniform(0.05, 10.0)
            assert fd_min_power_unrestricted(rate, gains) == pytest.approx(
                min_power(rate, gains)[0], rel=1e-9
            )


class TestMarginalPower:
    def test_inverse_round_trip(self, rng):
        for _ in range(30):
            gains = random_valid_gains(rng)
            rate = rng.uniform(0.05, 10.0)
            price = marginal_power(rate, gains)
            assert rate_at_marginal_power(price, gains) == pytest.approx(
                rate, rel=1e-9, abs=1e-9
            )

    def test_below_zero_slope_gives_zero_rate(self, rng):
        for _ in range(20):
            gains = random_valid_gains(rng)
            floor = math.log(2) / max(gains.h_down, gains.h_up / (1 + gains.rsi))
            assert rate_at_marginal_power(floor * 0.999, gains) == 0.0


class TestRecoverSplit:
    def test_downlink_case(self):
        split = recover_split(1.0, P1_GAINS)
        assert split.p_up == 0.0
        assert split.p_down == pytest.approx(0.1, rel=1e-12)
        assert fd_sum_rate(split, P1_GAINS) == pytest.approx(1.0, abs=1e-12)

    def test_zero_rate(self):
        split = recover_split(0.0, P1_GAINS)
        assert split.total == 0.0

    def test_interior_postconditions(self):
        split = recover_split(3.0, P3_GAINS)
        total, _ = min_power(3.0, P3_GAINS)
        assert split.total == pytest.approx(total, rel=1e-9)
        assert abs(fd_sum_rate(split, P3_GAINS) - 3.0) < 1e-9

    def test_random_postconditions(self, rng):
        for _ in range(50):
            gains = random_valid_gains(rng)
            rate = rng.uniform(0.05, 10.0)
            split = recover_split(rate, gains)
            total, _ = min_power(rate, gains)
            assert split.total == pytest.approx(total, rel=1e-9)
            assert abs(fd_sum_rate(split, gains) - rate) < 1e-9


class TestCaseBoundary:
    def test_example_value(self):
        assert case_boundary_rate(P1_GAINS) == pytest.approx(
            math.log2(11.4 / 4.4), rel=1e-12
        )

    def test_symmetric_gains_boundary_zero(self):
        gains = GainTriple(7.0, 7.0, 0.0, 0.0)
        assert case_boundary_rate(gains) == 0.0

    def test_value_continuity(self, rng):
        for _ in range(40):
            gains = random_valid_gains(rng)
            edge = case_boundary_rate(gains)
            if edge == 0.0:
                continue
            boundary_power, _ = min_power(edge, gains)
            assert abs(boundary_power - power_interior(edge, gains)) <= 1e-9 * max(
                1.0, boundary_power
            )

    def test_derivative_continuity_at_example(self):
        edge = case_boundary_rate(P1_GAINS)
        h = 1e-6
        d_boundary = (
            power_downlink_only(edge + h, P1_GAINS)
            - power_downlink_only(edge - h, P1_GAINS)
        ) / (2 * h)
        d_interior = (
            power_interior(edge + h, P1_GAINS) - power_interior(edge - h, P1_GAINS)
        ) / (2 * h)
        analytic = 2.0**edge * math.log(2) / P1_GAINS.h_down
        assert d_boundary == pytest.approx(analytic, rel=1e-6)
        assert d_interior == pytest.approx(analytic, rel=1e-6)


class TestHdMinPower:
    def test_values(self):
        assert hd_min_power(0.0, 10.0, 5.0) == 0.0
        assert hd_min_power(2.0, 10.0, 5.0) == pytest.approx(0.3)
        assert hd_min_power(2.0, 5.0, 10.0) == pytest.approx(0.3)

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            hd_min_power(-1.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            hd_min_power(1.0, 0.0, 1.0)


class TestCompareEe:
    def test_p3_example(self):
        ee_fd, ee_hd = compare_ee(3.0, P3_GAINS, 1.0, 0.1)
        assert ee_fd == pytest.approx(3.0 / (0.2876281 + 0.1), rel=1e-5)
        assert ee_hd == pytest.approx(3.0 / 0.45, rel=1e-12)
        assert ee_fd > ee_hd

    def test_zero_rate_limit(self):
        ee_fd, ee_hd = compare_ee(1e-9, P3_GAINS, 1.0, 0.1)
        assert ee_fd < 1e-7 and ee_hd < 1e-7

    def test_blocked_pairs_never_prefer_fd(self, rng):
        for _ in range(60):
            gains = random_invalid_gains(rng)
            rate = rng.uniform(0.1, 8.0)
            ee_fd, ee_hd = compare_ee(rate, gains, 1.0, 0.1)
            assert ee_fd <= ee_hd * (1 + 1e-9)


class TestConvexityAndUnimodality:
    def test_min_power_convex_in_rate(self, rng):
        grid = np.linspace(0.01, 12.0, 200)
        for _ in range(25):
            gains = random_valid_gains(rng)
            powers = np.array([min_power(float(r), gains)[0] for r in grid])
            assert np.all(np.diff(powers) > 0)
            assert np.min(np.diff(powers, 2)) >= -1e-8

    def test_single_pair_ee_unimodal(self, rng):
        from fdtradeoff.tradeoff import TradeoffCurve, unimodality_report

        grid = np.linspace(0.03, 12.0, 400)
        for _ in range(15):
            gains = random_valid_gains(rng)
            powers = np.array([min_power(float(r), gains)[0] for r in grid])
            ee = grid / (powers + 0.1)
            ok, first_bad = unimodality_report(TradeoffCurve(grid, powers, ee))
            assert ok, f"local minimum at index {first_bad}"
