"""Channel model: grid, steering, user drops, gains and their brute-force oracle."""

import numpy as np
import pytest

from beamsplit_ofdma import channel
from beamsplit_ofdma.channel import (
    FadingDraw,
    SystemParams,
    UserGeometry,
    UserTerminal,
    link_common,
    sample_users,
    steering_vector,
    subcarrier_frequencies,
    subcarrier_frequency,
)
from beamsplit_ofdma.experiments import default_params
from beamsplit_ofdma.irs import PhaseConfig, optimal_phases


def make_user(phi_c, rho2=1.0, tau_c=0.0):
    return UserTerminal(pos=(0.0, 750.0), theta_rx=0.0, phi_rx=0.0,
                        phi_c=phi_c, rho2=rho2, tau_c=tau_c)


def make_fading(gamma):
    return FadingDraw(alpha=gamma, beta=1.0 + 0.0j, gamma_c=gamma)


def eq9_brute_force(ue, fading, config, f, params):
    """Direct per-element summation of the frequency response."""
    phases = config.explicit_phases(params.M)
    total = 0.0 + 0.0j
    for m in range(params.M):
        total += np.exp(1j * phases[m]) * np.exp(
            -2j * np.pi * m * ue.phi_c * (1.0 + f / params.fc))
    return fading.gamma_c * total * np.exp(-2j * np.pi * f * ue.tau_c)


class TestSystemParams:
    def test_rejects_invalid(self):
        good = dict(fc=30e9, W=510e6, N=4, M=4, d=0.005, P=1.0, sigma2=1e-14,
                    G_tx=1.0, G_rx=1.0)
        SystemParams(**good)
        for bad in (dict(W=70e9), dict(N=0), dict(M=0), dict(P=0.0),
                    dict(sigma2=0.0), dict(fc=-1.0)):
            with pytest.raises(ValueError):
                SystemParams(**{**good, **bad})


class TestSubcarrierGrid:
    PARAMS = default_params(m=4, n=128)

    def test_edges_and_center(self):
        assert subcarrier_frequency(1, self.PARAMS) == pytest.approx(-253.0078125e6)
        assert subcarrier_frequency(128, self.PARAMS) == pytest.approx(+253.0078125e6)
        assert subcarrier_frequency(64, self.PARAMS) == pytest.approx(-1.9921875e6)

    def test_symmetric_uniform_grid(self):
        f = subcarrier_frequencies(self.PARAMS)
        assert np.allclose(f + f[::-1], 0.0)
        assert np.allclose(np.diff(f), self.PARAMS.W / self.PARAMS.N)
        assert np.all(np.abs(f) < self.PARAMS.W / 2)
        assert 0.0 not in f

    def test_out_of_range(self):
        for n in (0, 129):
            with pytest.raises(IndexError):
                subcarrier_frequency(n, self.PARAMS)


class TestSteeringVector:
    def test_single_element(self):
        np.testing.assert_allclose(steering_vector(1, 0.77), [1.0 + 0.0j])

    def test_broadside(self):
        np.testing.assert_allclose(steering_vector(4, 0.0), np.ones(4))

    def test_quarter_turn(self):
        np.testing.assert_allclose(steering_vector(4, 0.25),
                                   [1, -1j, -1, 1j], atol=1e-15)

    def test_unit_modulus(self):
        v = steering_vector(64, 0.1234)
        np.testing.assert_allclose(np.abs(v), 1.0)


class TestSampleUsers:
    def test_degenerate_annulus(self):
        geom = UserGeometry(r_in=750.0, r_out=750.0)
        users = sample_users(1, geom, np.random.default_rng(0))
        assert users[0].rho2 == pytest.approx(750.0 ** -4)

    def test_uniform_in_area_moment(self):
        # E[r^2] for uniform-in-area on an annulus
        geom = UserGeometry(r_in=500.0, r_out=1000.0)
        expected = (1000.0 ** 4 - 500.0 ** 4) / (2 * (1000.0 ** 2 - 500.0 ** 2))
        means = []
        for seed in range(20):
            users = sample_users(5000, geom, np.random.default_rng(seed))
            r2 = [u.rho2 ** (-2.0 / 4.0) for u in users]  # rho2 = r^-4
            means.append(np.mean(r2))
        assert np.mean(means) == pytest.approx(expected, rel=0.01)

    def test_uniform_cascaded_angle(self):
        geom = UserGeometry(r_in=500.0, r_out=1000.0, angle_mode="uniform")
        users = sample_users(10_000, geom, np.random.default_rng(5))
        phi = np.sort([u.phi_c for u in users])
        emp = np.arange(1, len(phi) + 1) / len(phi)
        ks = np.max(np.abs((phi + 1.0) / 2.0 - emp))
        assert ks <= 0.02

    def test_geometric_mode_angles_in_range(self):
        params = default_params(m=8, n=8)
        link = link_common(params)
        geom = UserGeometry(r_in=500.0, r_out=1000.0, angle_mode="geometric")
        users = sample_users(500, geom, np.random.default_rng(1),
                             params=params, link=link)
        for u in users:
            assert -0.5 - 1e-12 <= u.phi_rx <= 0.5 + 1e-12
            assert -1.0 <= u.phi_c <= 1.0
            assert u.tau_c > 0

    def test_invalid_radii(self):
        with pytest.raises(ValueError):
            UserGeometry(r_in=1000.0, r_out=500.0)


class TestChannelResponseAndGain:
    PARAMS = default_params(m=16, n=16)

    def test_single_element_reduction(self):
        params = default_params(m=1, n=16)
        ue = make_user(0.3, tau_c=1e-6)
        fad = make_fading(0.5 - 0.25j)
        cfg = PhaseConfig(kind="explicit", phases=np.zeros(1))
        got = channel.channel_response(ue, fad, cfg, 1e6, params)
        expected = fad.gamma_c * np.exp(-2j * np.pi * 1e6 * ue.tau_c)
        assert got == pytest.approx(expected)

    def test_flat_beamforming_at_zero_angle(self):
        ue = make_user(0.0)
        fad = make_fading(1.0 + 1.0j)
        cfg = PhaseConfig(kind="explicit", phases=np.zeros(16))
        vals = [channel.channel_response(ue, fad, cfg, f, self.PARAMS)
                for f in (-200e6, 0.0, 130e6)]
        for v in vals:
            assert v == pytest.approx(16 * fad.gamma_c)

    def test_gain_is_squared_response(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            ue = make_user(float(rng.uniform(-1, 1)), tau_c=float(rng.uniform(0, 1e-5)))
            fad = make_fading(complex(rng.normal(), rng.normal()))
            cfg = PhaseConfig(kind="explicit", phases=rng.uniform(0, 2 * np.pi, 16))
            f = float(rng.uniform(-255e6, 255e6))
            h = channel.channel_response(ue, fad, cfg, f, self.PARAMS)
            g = channel.channel_gain(ue, fad, cfg, f, self.PARAMS)
            assert g == pytest.approx(abs(h) ** 2, rel=1e-12)

    def test_gain_matches_brute_force(self):
        rng = np.random.default_rng(10)
        for _ in range(50):
            ue = make_user(float(rng.uniform(-1, 1)))
            fad = make_fading(complex(rng.normal(), rng.normal()))
            if rng.random() < 0.5:
                cfg = PhaseConfig(kind="explicit", phases=rng.uniform(0, 2 * np.pi, 16))
            else:
                cfg = PhaseConfig(kind="linear", slope=float(rng.uniform(-1, 1)))
            f = float(rng.uniform(-255e6, 255e6))
            expected = abs(eq9_brute_force(ue, fad, cfg, f, self.PARAMS)) ** 2
            got = channel.channel_gain(ue, fad, cfg, f, self.PARAMS)
            assert got == pytest.approx(expected, rel=1e-9, abs=1e-12)

    def test_array_factor_bound_and_attainment(self):
        rng = np.random.default_rng(12)
        ue = make_user(0.4)
        fad = make_fading(0.8 + 0.3j)
        bound = 16 ** 2 * abs(fad.gamma_c) ** 2
        f_n = subcarrier_frequency(5, self.PARAMS)
        for _ in range(200):
            cfg = PhaseConfig(kind="linear", slope=float(rng.uniform(-1, 1)))
            f = float(rng.uniform(-255e6, 255e6))
            assert channel.channel_gain(ue, fad, cfg, f, self.PARAMS) <= bound * (1 + 1e-12)
        opt = optimal_phases(ue.phi_c, f_n, self.PARAMS)
        assert channel.channel_gain(ue, fad, opt, f_n, self.PARAMS) == \
            pytest.approx(bound, rel=1e-12)

    def test_delay_invariance_of_gain(self):
        fad = make_fading(1.2 - 0.7j)
        cfg = PhaseConfig(kind="linear", slope=0.2)
        gains = [channel.channel_gain(make_user(0.3, tau_c=tau), fad, cfg,
                                      100e6, self.PARAMS)
                 for tau in (0.0, 1e-6, 3.3e-5)]
        assert gains[0] == pytest.approx(gains[1]) == pytest.approx(gains[2])

    def test_linear_shortcut_matches_explicit_expansion(self):
        rng = np.random.default_rng(13)
        for _ in range(1000):
            slope = float(rng.uniform(-1, 1))
            ue = make_user(float(rng.uniform(-1, 1)))
            fad = make_fading(complex(rng.normal(), rng.normal()))
            f = float(rng.uniform(-255e6, 255e6))
            fast = channel.channel_gain(
                ue, fad, PhaseConfig(kind="linear", slope=slope), f, self.PARAMS)
            explicit = PhaseConfig(kind="explicit",
                                   phases=2 * np.pi * np.arange(16) * slope)
            slow = channel.channel_gain(ue, fad, explicit, f, self.PARAMS)
            assert fast == pytest.approx(slow, rel=1e-9, abs=1e-15)


class TestFading:
    def test_normalization(self):
        params = default_params(m=4, n=4)
        link = link_common(params)
        ue = make_user(0.1, rho2=750.0 ** -4)
        rng = np.random.default_rng(2)
        draws = [channel.draw_fading(ue, link, params, rng) for _ in range(20_000)]
        scale = link.rho1 * ue.rho2 * params.G_tx * params.G_rx
        mean_g2 = np.mean([abs(d.gamma_c) ** 2 for d in draws])
        assert mean_g2 == pytest.approx(scale, rel=0.05)
        for d in draws[:10]:
            assert d.gamma_c == pytest.approx(d.alpha * d.beta)

    def test_no_fading_switch(self):
        params = default_params(m=4, n=4)
        link = link_common(params)
        ue = make_user(0.1, rho2=750.0 ** -4)
        d = channel.draw_fading(ue, link, params, np.random.default_rng(0), fading=False)
        scale = link.rho1 * ue.rho2 * params.G_tx * params.G_rx
        assert abs(d.gamma_c) ** 2 == pytest.approx(scale, rel=1e-12)
