import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pinchmm.model import (
    SPEED_OF_LIGHT, PinchLayout, ScenarioConfig, UserPosition, avg_snr, cas_layout,
    channel_matrix, complex_channel, dbm_to_watt, f_u, los_probability, min_snr,
    pathloss_coefficient, snr_matrix, to_db, watt_to_dbm, wavelength,
)
from pinchmm.scenario import build_config


def cfg_with(users, **kw):
    return build_config(users, **kw)


class TestUnits:
    def test_pathloss_at_28ghz_matches_wavelength_form(self):
        lam = SPEED_OF_LIGHT / 28e9
        assert pathloss_coefficient(28e9) == pytest.approx((lam / (4 * math.pi)) ** 2, rel=1e-12)
        assert pathloss_coefficient(28e9) == pytest.approx(7.2595e-7, rel=1e-4)

    def test_pathloss_unit_and_scaling(self):
        assert pathloss_coefficient(SPEED_OF_LIGHT / (4 * math.pi)) == pytest.approx(1.0)
        assert pathloss_coefficient(56e9) == pytest.approx(pathloss_coefficient(28e9) / 4)

    @pytest.mark.parametrize("fc", [0.0, -1.0])
    def test_pathloss_rejects_nonpositive(self, fc):
        with pytest.raises(ValueError):
            pathloss_coefficient(fc)

    def test_dbm_roundtrip(self):
        assert dbm_to_watt(-90) == pytest.approx(1e-12, rel=1e-12)
        assert dbm_to_watt(40) == pytest.approx(10.0)
        assert watt_to_dbm(dbm_to_watt(17.3)) == pytest.approx(17.3)
        assert to_db(100.0) == pytest.approx(20.0)

    def test_half_wavelength(self):
        assert wavelength(28e9) / 2 == pytest.approx(0.0053534, abs=1e-7)


class TestChannel:
    def test_los_probability(self):
        u = UserPosition(0.0, 0.0)
        assert los_probability(u, 5.0, cfg_with([u], alpha=0.0)) == 1.0
        # d^2 = 100
        c = cfg_with([UserPosition(0.0, 0.0)], alpha=0.01, t=math.sqrt(100 - 64))
        assert los_probability(c.users[0], 8.0, c) == pytest.approx(math.exp(-1), rel=1e-12)
        c = cfg_with([u], alpha=0.1, t=3.0)
        assert los_probability(u, 0.0, c) == pytest.approx(0.40657, abs=1e-5)

    def test_f_u(self):
        u = UserPosition(2.0, 0.0)
        assert f_u(2.0, u, cfg_with([u], alpha=0.0)) == pytest.approx(1 / 9)
        assert f_u(3.0, u, cfg_with([u], alpha=0.01)) == pytest.approx(0.090484, abs=1e-6)
        assert f_u(1e6, u, cfg_with([u], alpha=0.0)) < 1e-11

    def test_snr_single_antenna_vertex(self):
        u = UserPosition(1.5, 0.0)
        c = cfg_with([u], alpha=0.0, num_pinch=1)
        assert avg_snr([1.5], c).min_value == pytest.approx(c.rho_prime / 9, rel=1e-12)

    def test_snr_two_symmetric_antennas(self):
        u = UserPosition(0.0, 0.0)
        c = cfg_with([u], alpha=0.0, num_pinch=2)
        d = c.delta
        got = avg_snr([-d / 2, d / 2], c).min_value
        assert got == pytest.approx(2 * c.rho_prime / (d * d / 4 + 9), rel=1e-12)

    def test_empty_layout_rejected(self, default_cfg):
        with pytest.raises(ValueError):
            avg_snr([], default_cfg)

    def test_batch_shapes(self, default_cfg):
        xs = np.zeros((7, 3, default_cfg.num_pinch)) + np.arange(default_cfg.num_pinch)
        assert snr_matrix(xs, default_cfg).shape == (7, 3, default_cfg.num_users)
        assert min_snr(xs, default_cfg).shape == (7, 3)

    def test_channel_magnitude_times_los_is_mean_gain(self, default_cfg):
        xs = np.array([-3.0, -1.0, 0.5, 2.0, 4.0])
        h = channel_matrix(xs, default_cfg)
        for u, user in enumerate(default_cfg.users):
            for p, x in enumerate(xs):
                g = abs(h[u, p]) ** 2 * los_probability(user, x, default_cfg)
                assert g == pytest.approx(default_cfg.eta * f_u(x, user, default_cfg), rel=1e-12)
                assert h[u, p] == pytest.approx(complex_channel(user, x, default_cfg), rel=1e-9)

    def test_unit_magnitude_channel(self):
        # eta / d^2 = 1 with d = sqrt(eta)
        c = cfg_with([UserPosition(0.0, 0.0)], fc=SPEED_OF_LIGHT / (4 * math.pi) / 2, num_pinch=1)
        d = math.sqrt(c.eta)
        c = c.replace(t=d)
        assert abs(complex_channel(c.users[0], 0.0, c)) == pytest.approx(1.0)

    def test_phase_vanishes_at_one_wavelength(self):
        c = cfg_with([UserPosition(0.0, 0.0)], feed_x=0.0)
        c = c.replace(t=c.wavelength)
        h = complex_channel(c.users[0], 0.0, c)
        assert h.imag == pytest.approx(0.0, abs=1e-9 * abs(h))
        assert h.real > 0


class TestLayout:
    def test_violations(self, default_cfg):
        assert PinchLayout((0.0, 1.0, 2.0, 3.0, 4.0)).is_feasible(default_cfg)
        assert not PinchLayout((0.0, 1.0, 2.0, 3.0, 11.0)).is_feasible(default_cfg)
        assert not PinchLayout((0.0, 0.001, 2.0, 3.0, 4.0)).is_feasible(default_cfg)
        assert not PinchLayout((0.0, 1.0)).is_feasible(default_cfg)
        with pytest.raises(ValueError):
            PinchLayout((0.0, 0.0, 1.0, 2.0, 3.0)).check(default_cfg)

    def test_config_validation(self):
        u = [UserPosition(0.0, 0.0)]
        with pytest.raises(ValueError):
            cfg_with(u, D1=1.0, D2=0.0)
        with pytest.raises(ValueError):
            cfg_with(u, alpha=-0.1)
        with pytest.raises(ValueError):
            cfg_with(u, num_pinch=0)
        with pytest.raises(ValueError):
            cfg_with(u, num_pinch=3, delta=15.0)
        with pytest.raises(ValueError):
            cfg_with([])
        with pytest.raises(ValueError):
            UserPosition(float("nan"), 0.0)

    def test_rho_prime(self, default_cfg):
        c = default_cfg
        assert c.rho_prime == pytest.approx(c.eta * c.ptx / (c.num_pinch * c.sigma2))


class TestCas:
    def test_single_antenna_at_center(self):
        c = cfg_with([UserPosition(-3.0, 0.0), UserPosition(5.0, 1.0)], num_pinch=1)
        assert cas_layout(c).xs == (1.0,)

    def test_two_antennas_quarter_wavelength(self):
        c = cfg_with([UserPosition(0.0, 0.0)], num_pinch=2, fc=SPEED_OF_LIGHT / 0.0107)
        assert cas_layout(c, center=0.0).array == pytest.approx([-0.0107 / 4, 0.0107 / 4])

    def test_five_antenna_span(self, default_cfg):
        xs = cas_layout(default_cfg).array
        assert xs[-1] - xs[0] == pytest.approx(0.02141, abs=1e-5)
        assert np.mean(xs) == pytest.approx(0.0, abs=1e-12)

    def test_infeasible_center(self, default_cfg):
        with pytest.raises(ValueError):
            cas_layout(default_cfg, center=10.0)


@settings(max_examples=50, deadline=None)
@given(
    x=st.floats(-10, 10), ux=st.floats(-20, 20), uy=st.floats(-5, 5),
    alpha=st.sampled_from([0.0, 0.01, 0.1]),
)
def test_snr_positive_and_decreasing_in_alpha(x, ux, uy, alpha):
    u = UserPosition(ux, uy)
    lo = avg_snr([x], cfg_with([u], num_pinch=1, alpha=alpha)).min_value
    hi = avg_snr([x], cfg_with([u], num_pinch=1, alpha=alpha + 0.05)).min_value
    assert lo > 0 and hi <= lo


def test_scenario_config_is_hashable_frozen(default_cfg):
    with pytest.raises(Exception):
        default_cfg.alpha = 1.0
    assert isinstance(default_cfg, ScenarioConfig)
