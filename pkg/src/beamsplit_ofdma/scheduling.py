"""Per-slot subcarrier-to-user assignment and throughput accounting.

Schedulers: opportunistic max-rate (per-SC argmax of the gain matrix) and a
round-robin baseline that serves one user over the whole band with the IRS
re-tuned optimally to that user at baseband f = 0.

UE indices in ScheduleDecision are 1-based, matching the scheduler map
SCH: [N] x [T] -> [K].
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import UserGeometry, link_common, sample_users, subcarrier_frequencies
from .seeding import STREAM_SLOT, STREAM_USERS, derive_rng


@dataclass(frozen=True)
class GainMatrix:
    """K x N matrix of channel gains |H(k, t, f_n)|^2 for one slot."""
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.size == 0:
            raise ValueError("gain matrix must be a non-empty K x N array")
        if np.any(v < 0):
            raise ValueError("gains must be non-negative")
        object.__setattr__(self, "values", v)

    @property
    def num_users(self) -> int:
        return self.values.shape[0]

    @property
    def num_subcarriers(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class ScheduleDecision:
    """Per-slot map from subcarrier index to (1-based) UE index."""
    assignment: np.ndarray
    slot: int = 1


def schedule_max_rate(gains: GainMatrix) -> ScheduleDecision:
    """Assign each subcarrier to the user with the largest gain.

    np.argmax picks the lowest index on ties, which is the documented
    tie-break.
    """
    idx = np.argmax(gains.values, axis=0)
    return ScheduleDecision(assignment=idx + 1)


def schedule_round_robin(k_users: int, n_sc: int, t: int) -> ScheduleDecision:
    """Serve UE ((t-1) mod K) + 1 on all subcarriers in slot t."""
    if k_users < 1:
        raise ValueError("need at least one user")
    ue = (t - 1) % k_users + 1
    return ScheduleDecision(assignment=np.full(n_sc, ue, dtype=np.int64), slot=t)


def slot_throughput(gains: GainMatrix, decision: ScheduleDecision, params) -> float:
    """Sum-rate of one slot with equal power P/N per subcarrier, bit/s."""
    assign = np.asarray(decision.assignment)
    if assign.shape[0] != gains.num_subcarriers:
        raise ValueError("decision length does not match subcarrier count")
    if np.any(assign < 1) or np.any(assign > gains.num_users):
        raise ValueError("assignment contains invalid UE indices")
    g = gains.values[assign - 1, np.arange(gains.num_subcarriers)]
    snr = params.P / (params.N * params.sigma2)
    return float(params.W / params.N * np.sum(np.log2(1.0 + snr * g)))


@dataclass(frozen=True)
class CampaignResult:
    """Time-averaged results of one scheduling campaign."""
    throughput: float        # bit/s
    se: float                # bit/s/Hz
    se_stderr: float
    slots: int


def _geometry(scenario) -> UserGeometry:
    return UserGeometry(r_in=scenario.r_in, r_out=scenario.r_out,
                        angle_mode=scenario.angle_mode,
                        pl_exp=scenario.pl_exp_irs_ue,
                        equal_path_loss=scenario.equal_path_loss)


def _fade2(rng, size, fading):
    # |gamma~|^2 = |CN| ^2 * |CN|^2, i.e. a product of two unit-mean exponentials
    if fading:
        return rng.exponential(size=size) * rng.exponential(size=size)
    return np.ones(size)


def run_campaign(scenario, workers: int = 1) -> CampaignResult:
    """Monte Carlo average throughput/SE of a scenario over T slots.

    Max-rate: a fixed user population is drawn once, then each slot draws a
    fresh random IRS slope and fresh block fading, and every subcarrier goes
    to its best user.  Round-robin: only the scheduled user's channel
    matters, so each slot draws one i.i.d. user from the same population
    (the IRS is re-tuned optimally to it at f = 0); this makes the RR
    statistics exactly independent of K under matched seeds.
    """
    p = scenario.params
    if scenario.scheduler not in ("max-rate", "round-robin"):
        raise ValueError(f"unknown scheduler {scenario.scheduler!r}")
    geom = _geometry(scenario)
    link = link_common(p, pl_exp=scenario.pl_exp_bs_irs)
    ff = 1.0 + subcarrier_frequencies(p) / p.fc
    snr = p.P / (p.N * p.sigma2)
    base_amp = link.rho1 * p.G_tx * p.G_rx

    if scenario.scheduler == "max-rate":
        rng_u = derive_rng(scenario.seed, STREAM_USERS)
        users = sample_users(scenario.K, geom, rng_u, params=p, link=link)
        forced = getattr(scenario, "force_phi_c", None)
        if forced is not None:
            phi_c = np.full(scenario.K, float(forced))
        else:
            phi_c = np.array([u.phi_c for u in users])
        rho2 = np.array([u.rho2 for u in users])

        def one_slot(t: int) -> float:
            rng = derive_rng(scenario.seed, STREAM_SLOT, t)
            slope = float(rng.uniform(-1.0, 1.0))
            amp2 = base_amp * rho2 * _fade2(rng, scenario.K, scenario.fading)
            best, _ = kernels.best_gain_per_sc(p.M, slope, phi_c, amp2, ff)
            return float(np.mean(np.log2(1.0 + snr * best)))
    else:
        ref_rho2 = geom.reference_distance ** (-geom.pl_exp)

        def one_slot(t: int) -> float:
            rng = derive_rng(scenario.seed, STREAM_SLOT, t)
            u = rng.random()
            r = np.sqrt(geom.r_in ** 2 + u * (geom.r_out ** 2 - geom.r_in ** 2))
            rho2 = ref_rho2 if geom.equal_path_loss else r ** (-geom.pl_exp)
            forced = getattr(scenario, "force_phi_c", None)
            if forced is not None:
                phi = float(forced)
            elif geom.angle_mode == "uniform":
                phi = float(rng.uniform(-1.0, 1.0))
            else:
                az = float(rng.uniform(0.0, 2.0 * np.pi))
                phi = link.phi_tx - p.d * np.cos(az) / p.wavelength
            fade2 = float(_fade2(rng, 1, scenario.fading)[0])
            amp2 = base_amp * rho2 * fade2
            # optimal tuning at f = 0 -> slope = phi, offset phi (1 - ff_n)
            gains = amp2 * kernels.dirichlet_gain_values(p.M, phi * (1.0 - ff))
            return float(np.mean(np.log2(1.0 + snr * gains)))

    slots = range(1, scenario.T + 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            se_per_slot = np.array(list(pool.map(one_slot, slots)))
    else:
        se_per_slot = np.array([one_slot(t) for t in slots])

    se = float(np.mean(se_per_slot))
    stderr = float(np.std(se_per_slot, ddof=1) / np.sqrt(scenario.T)) if scenario.T > 1 else 0.0
    return CampaignResult(throughput=se * p.W, se=se, se_stderr=stderr,
                          slots=scenario.T)
