"""Coverage bound, minimum user count, and rate-scaling prediction."""

import math

import numpy as np
import pytest

from beamsplit_ofdma.experiments import Scenario, default_params
from beamsplit_ofdma.numerics import lk_approximation
from beamsplit_ofdma.scheduling import run_campaign
from beamsplit_ofdma.theory import (
    SuccessEvent,
    estimate_success_probability,
    jensen_throughput,
    k_min,
    predicted_throughput,
    success_probability_bound,
)


def scenario(m, n, k, **kw):
    return Scenario(params=default_params(m=m, n=n), K=k, seed=77, **kw)


class TestSuccessEvent:
    def test_epsilon_validation(self):
        SuccessEvent(epsilon=0.1, achieved=np.ones(4, dtype=bool))
        for eps in (0.0, 1.0, -0.2):
            with pytest.raises(ValueError):
                SuccessEvent(epsilon=eps, achieved=np.ones(4, dtype=bool))


class TestSuccessProbabilityBound:
    def test_reference_value(self):
        # at the minimum user count for (eps, delta) = (0.1, 0.05) the bound
        # just clears 1 - delta
        b = success_probability_bound(0.1, 128, 23240, 512, 510e6, 30e9)
        assert b == pytest.approx(0.95, abs=5e-4)
        assert b >= 0.95

    def test_clamped_at_zero_for_few_users(self):
        assert success_probability_bound(0.1, 128, 0, 512, 510e6, 30e9) == 0.0
        assert success_probability_bound(0.1, 128, 10, 512, 510e6, 30e9) == 0.0

    def test_monotone_in_k(self):
        vals = [success_probability_bound(0.1, 32, k, 128, 510e6, 30e9)
                for k in (1000, 2000, 5000, 10000, 20000)]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert vals[-1] > 0.99

    def test_monotone_in_epsilon(self):
        lo = success_probability_bound(0.05, 32, 5000, 128, 510e6, 30e9)
        hi = success_probability_bound(0.2, 32, 5000, 128, 510e6, 30e9)
        assert hi >= lo

    def test_limit_one_as_k_grows(self):
        assert success_probability_bound(0.1, 128, 10 ** 7, 512, 510e6, 30e9) == \
            pytest.approx(1.0, abs=1e-12)

    def test_input_validation(self):
        for eps in (0.0, 1.0):
            with pytest.raises(ValueError):
                success_probability_bound(eps, 128, 100, 512, 510e6, 30e9)
        with pytest.raises(ValueError):
            success_probability_bound(0.1, 128, -1, 512, 510e6, 30e9)


class TestKMin:
    def test_reference_value(self):
        assert k_min(0.1, 0.05, 128, 512, 510e6, 30e9) == 23239

    def test_is_the_threshold(self):
        k = k_min(0.1, 0.2, 32, 128, 510e6, 30e9)
        assert success_probability_bound(0.1, 32, k + 1, 128, 510e6, 30e9) >= 0.8
        assert success_probability_bound(0.1, 32, k - 1, 128, 510e6, 30e9) < 0.8

    def test_monotone_in_n(self):
        assert k_min(0.1, 0.05, 256, 512, 510e6, 30e9) > \
            k_min(0.1, 0.05, 64, 512, 510e6, 30e9)

    def test_near_certain_failure_tolerance(self):
        # ceil keeps the count at 1 even as delta -> 1 with a single SC
        assert k_min(0.1, 1.0 - 1e-12, 1, 512, 510e6, 30e9) <= 1

    def test_delta_validation(self):
        for d in (0.0, 1.0):
            with pytest.raises(ValueError):
                k_min(0.1, d, 128, 512, 510e6, 30e9)


class TestEstimateSuccessProbability:
    def test_dominates_bound(self):
        sc = scenario(128, 32, 5000)
        est = estimate_success_probability(0.1, sc, 300)
        bound = success_probability_bound(0.1, 32, 5000, 128, 510e6, 30e9)
        assert est.estimate >= bound - 2 * est.stderr

    def test_deterministic_across_workers(self):
        sc = scenario(64, 16, 500)
        a = estimate_success_probability(0.1, sc, 200, workers=1)
        b = estimate_success_probability(0.1, sc, 200, workers=4)
        assert a.estimate == b.estimate

    def test_single_user_single_sc_event_probability(self):
        # with N = 1 (so f_1 = 0) the per-trial success probability under
        # the mainlobe approximation is sqrt(3 eps) / (pi M); the Taylor
        # threshold needs a small eps to be tight
        m, eps = 8, 0.1
        sc = scenario(m, 1, 1)
        est = estimate_success_probability(eps, sc, 60_000, array_factor="sinc")
        expected = math.sqrt(3.0 * eps) / (math.pi * m)
        assert est.estimate == pytest.approx(expected, rel=0.1)

    def test_exact_kernel_sees_more_events_than_sinc(self):
        sc = scenario(8, 1, 1)
        exact = estimate_success_probability(0.1, sc, 40_000)
        approx = estimate_success_probability(0.1, sc, 40_000,
                                              array_factor="sinc")
        assert exact.estimate > approx.estimate

    def test_input_validation(self):
        sc = scenario(64, 16, 10)
        with pytest.raises(ValueError):
            estimate_success_probability(0.1, sc, 0)
        with pytest.raises(ValueError):
            estimate_success_probability(1.5, sc, 10)
        with pytest.raises(ValueError):
            estimate_success_probability(0.1, sc, 10, array_factor="gauss")


class TestPredictedThroughput:
    RHO = (500.0 ** -2) * (750.0 ** -4)

    def predicted_se(self, k, p):
        return predicted_throughput(k, p.M, p.N, p.W, self.RHO, p.G_tx,
                                    p.G_rx, p.P, p.sigma2) / p.W

    def test_grows_like_log_log(self):
        p = default_params()
        ses = [self.predicted_se(k, p) for k in (10, 100, 1000, 10000)]
        assert all(b > a for a, b in zip(ses, ses[1:]))
        diffs = np.diff(ses)
        assert all(b < a for a, b in zip(diffs, diffs[1:]))

    def test_quadratic_array_gain(self):
        p = default_params()
        import dataclasses
        p2 = dataclasses.replace(p, M=2 * p.M)
        gap = self.predicted_se(1000, p2) - self.predicted_se(1000, p)
        assert gap == pytest.approx(2.0, abs=0.01)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            predicted_throughput(100, 0, 128, 510e6, 1e-16, 100, 10, 10, 1e-14)
        with pytest.raises(ValueError):
            predicted_throughput(1, 512, 128, 510e6, 1e-16, 100, 10, 10, 1e-14)

    @pytest.mark.xfail(strict=True,
                       reason="asymptotic prediction overshoots at finite K; "
                              "measured gap is ~20% at K = 5000")
    def test_matches_campaign_within_15_percent(self):
        sc = Scenario(K=5000, T=60, seed=77)
        res = run_campaign(sc)
        pred = self.predicted_se(5000, sc.params)
        assert abs(pred - res.se) / res.se <= 0.15

    def test_upper_bounds_campaign_within_30_percent(self):
        sc = Scenario(K=5000, T=60, seed=77)
        res = run_campaign(sc)
        pred = self.predicted_se(5000, sc.params)
        assert res.se < pred <= 1.3 * res.se


class TestMultiUserDiversityFactor:
    @staticmethod
    def empirical_max(k, reps, seed):
        rng = np.random.default_rng(seed)
        draws = rng.exponential(size=(reps, k)) * rng.exponential(size=(reps, k))
        return float(np.mean(draws.max(axis=1)))

    @pytest.mark.xfail(strict=True,
                       reason="extreme-value mean exceeds the (1-1/K)-quantile "
                              "by the Gumbel offset; ratio stays above 1.1")
    def test_mean_max_matches_lk_within_10_percent(self):
        for k in (100, 1000, 10000):
            emp = self.empirical_max(k, 4000, seed=k)
            assert abs(emp - lk_approximation(k)) / lk_approximation(k) <= 0.10

    def test_mean_max_tracks_lk_from_above(self):
        ratios = []
        for k in (100, 1000, 10000):
            emp = self.empirical_max(k, 4000, seed=k)
            ratios.append(emp / lk_approximation(k))
        assert all(1.0 < r < 1.35 for r in ratios)
        assert ratios[0] > ratios[-1]


class TestJensenThroughput:
    def test_upper_bounds_campaign(self):
        sc = Scenario(params=default_params(m=64, n=16), K=200, T=50,
                      equal_path_loss=True, seed=3)
        jensen = jensen_throughput(sc, trials=50)
        camp = run_campaign(sc)
        assert jensen >= camp.throughput * (1.0 - 0.02)

    def test_trial_validation(self):
        with pytest.raises(ValueError):
            jensen_throughput(Scenario(), trials=0)
