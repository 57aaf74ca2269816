"""Closed-form guarantees and their Monte Carlo validators.

Covers the success-probability lower bound for near-full array gain on all
subcarriers, the minimum-user-count corollary, and the log-quadratic rate
scaling prediction with its multi-user-diversity factor.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import link_common, sample_users, subcarrier_frequencies
from .numerics import lk_approximation
from .scheduling import _fade2, _geometry
from .seeding import STREAM_TRIAL, STREAM_USERS, derive_rng


@dataclass(frozen=True)
class SuccessEvent:
    """Per-subcarrier indicator that some user reached (1-eps) M^2 array gain."""
    epsilon: float
    achieved: np.ndarray

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must lie in (0, 1)")


@dataclass(frozen=True)
class SuccessEstimate:
    estimate: float
    stderr: float
    trials: int


def _taylor_term(epsilon, m, w, fc) -> float:
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    term = math.sqrt(3.0 * epsilon) / (math.pi * m * (1.0 + w / (2.0 * fc)))
    if term >= 1.0:
        raise ValueError("parameters violate the small-deviation regime "
                         f"(sqrt(3 eps)/(pi M (1+W/2fc)) = {term:.3g} >= 1)")
    return term


def success_probability_bound(epsilon, n_sc, k_users, m, w, fc) -> float:
    """Lower bound 1 - N (1 - sqrt(3 eps)/(pi M (1+W/2fc)))^K, clamped at 0."""
    term = _taylor_term(epsilon, m, w, fc)
    if k_users < 0:
        raise ValueError("K must be non-negative")
    bound = 1.0 - n_sc * math.exp(k_users * math.log1p(-term))
    return max(0.0, bound)


def estimate_success_probability(epsilon, scenario, trials, rng=None,
                                 workers: int = 1,
                                 array_factor: str = "dirichlet") -> SuccessEstimate:
    """Monte Carlo success probability using the exact Dirichlet array factor.

    Each trial draws a fresh slope a ~ U[-1,1] and fresh cascaded angles
    phi_c ~ U[-1,1], and succeeds when every subcarrier has at least one
    user with array factor >= (1-eps) M^2.  Binomial standard error is
    reported.  Using the exact array factor (not the sinc approximation)
    means grating lobes also count, so the estimate should dominate the
    analytic bound a fortiori.  ``array_factor="sinc"`` switches to the
    mainlobe approximation M^2 sinc^2(M delta) used in the proof, for
    checking the proof's per-event probability formula.
    """
    if array_factor not in ("dirichlet", "sinc"):
        raise ValueError(f"unknown array factor {array_factor!r}")
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must lie in (0, 1)")
    p = scenario.params
    ff = 1.0 + subcarrier_frequencies(p) / p.fc
    threshold = (1.0 - epsilon) * float(p.M) ** 2
    if rng is None:
        rng = derive_rng(scenario.seed, STREAM_TRIAL)
    seeds = rng.integers(0, 2 ** 62, size=trials)

    def one_trial(i: int) -> bool:
        r = np.random.default_rng(int(seeds[i]))
        slope = float(r.uniform(-1.0, 1.0))
        phi = r.uniform(-1.0, 1.0, scenario.K)
        return kernels.covers_all_subcarriers(p.M, slope, phi, ff, threshold,
                                              use_sinc=(array_factor == "sinc"))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = list(pool.map(one_trial, range(trials)))
    else:
        hits = [one_trial(i) for i in range(trials)]
    est = float(np.mean(hits))
    stderr = math.sqrt(max(est * (1.0 - est), 1.0 / trials) / trials)
    return SuccessEstimate(estimate=est, stderr=stderr, trials=trials)


def k_min(epsilon, delta, n_sc, m, w, fc) -> int:
    """Minimum user count for all-subcarrier coverage with probability 1-delta."""
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    term = _taylor_term(epsilon, m, w, fc)
    value = -math.log(n_sc / delta) / math.log1p(-term)
    return max(0, math.ceil(value))


def predicted_throughput(k_users, m, n_sc, w, rho, g_tx, g_rx, p, sigma2) -> float:
    """Closed-form rate W log2(1 + rho G P/(N s^2) M^2 (t ln K)^q), bit/s."""
    if min(m, n_sc, w, rho, g_tx, g_rx, p, sigma2) <= 0:
        raise ValueError("all parameters must be positive")
    snr = rho * g_tx * g_rx * p / (n_sc * sigma2)
    return w * math.log2(1.0 + snr * float(m) ** 2 * lk_approximation(k_users))


def jensen_throughput(scenario, trials, rng=None, workers: int = 1) -> float:
    """Log-of-mean throughput: per-SC E[max_k |H|^2] estimated by Monte Carlo.

    Uses the same population model as a max-rate campaign (fixed users,
    per-trial random slope and fading), then applies
    sum_n (W/N) log2(1 + P/(N s^2) E[max_k |H|^2]).
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    p = scenario.params
    geom = _geometry(scenario)
    link = link_common(p, pl_exp=scenario.pl_exp_bs_irs)
    ff = 1.0 + subcarrier_frequencies(p) / p.fc
    rng_u = derive_rng(scenario.seed, STREAM_USERS)
    users = sample_users(scenario.K, geom, rng_u, params=p, link=link)
    phi_c = np.array([u.phi_c for u in users])
    rho2 = np.array([u.rho2 for u in users])
    base_amp = link.rho1 * p.G_tx * p.G_rx
    if rng is None:
        rng = derive_rng(scenario.seed, STREAM_TRIAL)
    seeds = rng.integers(0, 2 ** 62, size=trials)

    def one_trial(i: int) -> np.ndarray:
        r = np.random.default_rng(int(seeds[i]))
        slope = float(r.uniform(-1.0, 1.0))
        amp2 = base_amp * rho2 * _fade2(r, scenario.K, scenario.fading)
        best, _ = kernels.best_gain_per_sc(p.M, slope, phi_c, amp2, ff)
        return best

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            per_trial = list(pool.map(one_trial, range(trials)))
    else:
        per_trial = [one_trial(i) for i in range(trials)]
    mean_best = np.mean(np.stack(per_trial), axis=0)
    snr = p.P / (p.N * p.sigma2)
    return float(p.W / p.N * np.sum(np.log2(1.0 + snr * mean_best)))
