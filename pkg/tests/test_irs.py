"""Phase configurations and the frequency-dependent gain profile."""

import numpy as np
import pytest

from beamsplit_ofdma.experiments import default_params
from beamsplit_ofdma.irs import (
    PhaseConfig,
    beamsplit_gain_profile,
    optimal_phases,
    random_config,
)


class TestPhaseConfig:
    def test_explicit_wraps_phases(self):
        cfg = PhaseConfig(kind="explicit", phases=[0.0, 3 * np.pi, -np.pi / 2])
        np.testing.assert_allclose(cfg.phases, [0.0, np.pi, 1.5 * np.pi])

    def test_linear_expansion(self):
        cfg = PhaseConfig(kind="linear", slope=0.25)
        np.testing.assert_allclose(cfg.explicit_phases(4),
                                   np.mod(2 * np.pi * 0.25 * np.arange(4), 2 * np.pi))

    def test_theta_unit_modulus(self):
        cfg = PhaseConfig(kind="linear", slope=-0.37)
        np.testing.assert_allclose(np.abs(cfg.theta(32)), 1.0)

    def test_invalid_kinds(self):
        with pytest.raises(ValueError):
            PhaseConfig(kind="explicit")
        with pytest.raises(ValueError):
            PhaseConfig(kind="linear")
        with pytest.raises(ValueError):
            PhaseConfig(kind="chirp", slope=0.1)

    def test_linear_needs_element_count(self):
        with pytest.raises(ValueError):
            PhaseConfig(kind="linear", slope=0.1).explicit_phases()


class TestOptimalPhases:
    def test_slope_formula(self):
        params = default_params()
        cfg = optimal_phases(0.5, 255e6, params)
        assert cfg.kind == "linear"
        assert cfg.slope == pytest.approx(0.5 * (1.0 + 255e6 / 30e9))

    def test_band_edges_differ(self):
        params = default_params()
        lo = optimal_phases(1.0, -params.W / 2, params).slope
        hi = optimal_phases(1.0, +params.W / 2, params).slope
        assert hi - lo == pytest.approx(params.W / params.fc)


def test_random_config_distribution():
    rng = np.random.default_rng(7)
    slopes = np.array([random_config(rng).slope for _ in range(4000)])
    assert np.all(np.abs(slopes) <= 1.0)
    assert np.mean(slopes) == pytest.approx(0.0, abs=0.05)
    assert np.var(slopes) == pytest.approx(1.0 / 3.0, rel=0.1)


class TestBeamsplitGainProfile:
    def test_peak_at_tuned_frequency(self):
        f = np.linspace(-255e6, 255e6, 129)
        exact, approx = beamsplit_gain_profile(1.0, 0.0, f, 256, 30e9, 2.0)
        i0 = np.argmin(np.abs(f))
        assert exact[i0] == pytest.approx(2.0 * 256 ** 2)
        assert approx[i0] == pytest.approx(2.0 * 256 ** 2)
        assert np.argmax(exact) == i0

    def test_null_locations(self):
        # nulls of the tuned-at-0 profile fall at f = q fc / (M phi_c)
        m, fc, phi = 128, 30e9, 1.0
        for q in (1, 2, 3):
            f_null = q * fc / (m * phi)
            exact, _ = beamsplit_gain_profile(phi, 0.0, [-f_null, f_null],
                                              m, fc, 1.0)
            np.testing.assert_allclose(exact, 0.0, atol=1e-18)

    def test_mainlobe_width_scales_inversely_with_m(self):
        fc = 30e9
        for m in (64, 128, 256):
            f_null = fc / m
            f = np.linspace(0.0, 0.999 * f_null, 200)
            exact, _ = beamsplit_gain_profile(1.0, 0.0, f, m, fc, 1.0)
            assert np.all(np.diff(exact) < 0)

    def test_exact_vs_approx_close_in_mainlobe(self):
        m, fc = 512, 30e9
        f = np.linspace(-0.4 * fc / m, 0.4 * fc / m, 101)
        exact, approx = beamsplit_gain_profile(1.0, 0.0, f, m, fc, 1.0)
        assert np.max(np.abs(exact - approx)) / m ** 2 <= 1e-4

    def test_tuning_shift(self):
        f = np.linspace(-255e6, 255e6, 1024)
        exact, _ = beamsplit_gain_profile(0.8, 200e6, f, 64, 30e9, 1.0)
        assert np.abs(f[np.argmax(exact)] - 200e6) <= np.diff(f)[0]
