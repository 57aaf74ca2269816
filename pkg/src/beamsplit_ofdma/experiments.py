"""Scenario configuration, figure-reproduction sweeps and CSV/JSON emission.

Default scenario values follow the reference setup: M = 512 IRS elements,
N = 128 subcarriers over W = 510 MHz at fc = 30 GHz, P = 40 dBm,
sigma^2 = -110 dBm, G_tx = 20 dBi, G_rx = 10 dBi, BS at (0,0), IRS at
(0,500), users uniform in an annulus of radii 0.5/1 km with path-loss
exponents 2 (BS-IRS) and 4 (IRS-UE).
"""

import csv
import dataclasses
import json
import math
import os
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import __version__, kernels
from .channel import SystemParams, SPEED_OF_LIGHT, link_common, sample_users, \
    subcarrier_frequencies
from .scheduling import _fade2, _geometry, run_campaign
from .seeding import STREAM_SLOT, STREAM_USERS, derive_rng
from .theory import estimate_success_probability, k_min, predicted_throughput, \
    success_probability_bound

DEFAULT_SEED = 20250614
OUTPUT_DIR_ENV = "BSOFDMA_OUT_DIR"

# stable per-experiment seed-stream ids
EXP_BEAM_SPLIT = 10
EXP_AVG_GAIN = 11
EXP_SE_VS_USERS = 12
EXP_SE_VS_ELEMENTS = 13
EXP_THEOREM1 = 14

SCENARIO_LABELS = ("rr-optimal", "max-rate-no-fading", "max-rate-fading")


class ConfigError(ValueError):
    """Invalid scenario/CLI configuration."""


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def dbm_to_watt(x_dbm: float) -> float:
    return 10.0 ** ((x_dbm - 30.0) / 10.0)


def default_params(m: int = 512, n: int = 128, w: float = 510e6,
                   fc: float = 30e9) -> SystemParams:
    lam = SPEED_OF_LIGHT / fc
    return SystemParams(fc=fc, W=w, N=n, M=m, d=lam / 2.0,
                        P=dbm_to_watt(40.0), sigma2=dbm_to_watt(-110.0),
                        G_tx=db_to_linear(20.0), G_rx=db_to_linear(10.0),
                        bs_pos=(0.0, 0.0), irs_pos=(0.0, 500.0))


@dataclass
class Scenario:
    """One simulation scenario: system constants plus drop/scheduler options."""
    params: SystemParams = field(default_factory=default_params)
    K: int = 5000
    r_in: float = 500.0
    r_out: float = 1000.0
    pl_exp_bs_irs: float = 2.0
    pl_exp_irs_ue: float = 4.0
    angle_mode: str = "uniform"
    fading: bool = True
    equal_path_loss: bool = False
    scheduler: str = "max-rate"
    T: int = 200
    seed: int = DEFAULT_SEED
    # pin every cascaded angle to one value (validation runs), None = sampled
    force_phi_c: Optional[float] = None

    def replace(self, **kw) -> "Scenario":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["params"] = dataclasses.asdict(self.params)
        return d


# config-file keys -> (target, attribute, converter)
_CONFIG_KEYS = {
    "carrier_hz": ("params", "fc", float),
    "bandwidth_hz": ("params", "W", float),
    "subcarriers": ("params", "N", int),
    "irs_elements": ("params", "M", int),
    "power_dbm": ("params", "P", lambda v: dbm_to_watt(float(v))),
    "noise_dbm": ("params", "sigma2", lambda v: dbm_to_watt(float(v))),
    "gain_tx_dbi": ("params", "G_tx", lambda v: db_to_linear(float(v))),
    "gain_rx_dbi": ("params", "G_rx", lambda v: db_to_linear(float(v))),
    "users": ("scenario", "K", int),
    "inner_radius_m": ("scenario", "r_in", float),
    "outer_radius_m": ("scenario", "r_out", float),
    "pl_exp_bs_irs": ("scenario", "pl_exp_bs_irs", float),
    "pl_exp_irs_ue": ("scenario", "pl_exp_irs_ue", float),
    "angle_mode": ("scenario", "angle_mode", str),
    "fading": ("scenario", "fading", lambda v: v.lower() in ("1", "true", "yes", "on")),
    "equal_path_loss": ("scenario", "equal_path_loss",
                        lambda v: v.lower() in ("1", "true", "yes", "on")),
    "scheduler": ("scenario", "scheduler", str),
    "slots": ("scenario", "T", int),
    "seed": ("scenario", "seed", int),
}


def parse_config_file(path: str) -> dict:
    """Flat key = value config with # comments; returns the raw key map."""
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, val = (s.strip() for s in line.split("=", 1))
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = val
    return values


def scenario_from_config(values: dict, base: Optional[Scenario] = None) -> Scenario:
    scenario = base if base is not None else Scenario()
    param_updates = {}
    scenario_updates = {}
    for key, val in values.items():
        target, attr, conv = _CONFIG_KEYS[key]
        try:
            converted = conv(val)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad value for {key}: {val!r}") from exc
        (param_updates if target == "params" else scenario_updates)[attr] = converted
    if param_updates:
        cur = dataclasses.asdict(scenario.params)
        cur.update(param_updates)
        if "fc" in param_updates and "d" not in param_updates:
            cur["d"] = SPEED_OF_LIGHT / cur["fc"] / 2.0  # keep d = lambda/2
        cur["bs_pos"] = tuple(cur["bs_pos"])
        cur["irs_pos"] = tuple(cur["irs_pos"])
        try:
            scenario_updates["params"] = SystemParams(**cur)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return scenario.replace(**scenario_updates)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


@dataclass
class ExperimentResult:
    """Tabular sweep output plus the manifest needed to re-run it."""
    sweep: str
    columns: List[str]
    rows: List[Tuple]
    manifest: dict

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(self.columns)
            for row in self.rows:
                writer.writerow([_format_cell(c) for c in row])

    def write_manifest(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.manifest, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _format_cell(c):
    if isinstance(c, float):
        return f"{c:.12g}"
    return c


def _manifest(sweep: str, seed: int, extra: dict) -> dict:
    man = {
        "sweep": sweep,
        "seed": seed,
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
    }
    man.update(extra)
    return man


def _three_scenarios(scenario: Scenario):
    """(label, Scenario) for the RR / max-rate-no-fading / max-rate-fading trio."""
    return [
        ("rr-optimal", scenario.replace(scheduler="round-robin", fading=True)),
        ("max-rate-no-fading", scenario.replace(scheduler="max-rate", fading=False)),
        ("max-rate-fading", scenario.replace(scheduler="max-rate", fading=True)),
    ]


def exp_beam_split(m_list: Sequence[int], w: float = 510e6, n_sc: int = 128,
                   fc: float = 30e9, f_tuned: float = 0.0, n_angles: int = 2000,
                   seed: int = DEFAULT_SEED) -> ExperimentResult:
    """Average beam-split gain profile vs subcarrier frequency, per M.

    For each M the exact Dirichlet gain and its sinc approximation are
    averaged over random cascaded angles phi_c ~ U[-1, 1] with unit fading
    gain, IRS tuned to f_tuned.
    """
    params = default_params(m=max(m_list), n=n_sc, w=w, fc=fc)
    freqs = subcarrier_frequencies(params)
    rng = derive_rng(seed, EXP_BEAM_SPLIT)
    phi = rng.uniform(-1.0, 1.0, n_angles)
    rows = []
    for m in m_list:
        delta = phi[:, None] * (f_tuned - freqs)[None, :] / fc
        exact = kernels.dirichlet_gain_values(m, delta).mean(axis=0)
        approx = (float(m) ** 2 * np.sinc(m * delta) ** 2).mean(axis=0)
        for j, f in enumerate(freqs):
            rows.append((int(m), float(f), float(exact[j]), float(approx[j])))
    manifest = _manifest("beam-split", seed, {
        "m_list": [int(m) for m in m_list], "bandwidth_hz": w, "subcarriers": n_sc,
        "carrier_hz": fc, "f_tuned_hz": f_tuned, "n_angles": n_angles,
    })
    return ExperimentResult("beam-split", ["M", "f_hz", "gain_exact", "gain_sinc"],
                            rows, manifest)


def _avg_gain_curve(scenario: Scenario) -> np.ndarray:
    """Per-SC scheduled-gain average over slots for one labelled scenario."""
    p = scenario.params
    geom = _geometry(scenario)
    link = link_common(p, pl_exp=scenario.pl_exp_bs_irs)
    ff = 1.0 + subcarrier_frequencies(p) / p.fc
    base_amp = link.rho1 * p.G_tx * p.G_rx
    total = np.zeros(p.N)
    if scenario.scheduler == "max-rate":
        rng_u = derive_rng(scenario.seed, STREAM_USERS)
        users = sample_users(scenario.K, geom, rng_u, params=p, link=link)
        phi_c = np.array([u.phi_c for u in users])
        rho2 = np.array([u.rho2 for u in users])
        for t in range(1, scenario.T + 1):
            rng = derive_rng(scenario.seed, STREAM_SLOT, t)
            slope = float(rng.uniform(-1.0, 1.0))
            amp2 = base_amp * rho2 * _fade2(rng, scenario.K, scenario.fading)
            best, _ = kernels.best_gain_per_sc(p.M, slope, phi_c, amp2, ff)
            total += best
    else:
        ref_rho2 = geom.reference_distance ** (-geom.pl_exp)
        for t in range(1, scenario.T + 1):
            rng = derive_rng(scenario.seed, STREAM_SLOT, t)
            u = rng.random()
            r = math.sqrt(geom.r_in ** 2 + u * (geom.r_out ** 2 - geom.r_in ** 2))
            rho2 = ref_rho2 if geom.equal_path_loss else r ** (-geom.pl_exp)
            phi = float(rng.uniform(-1.0, 1.0))
            fade2 = float(_fade2(rng, 1, scenario.fading)[0])
            total += base_amp * rho2 * fade2 * \
                kernels.dirichlet_gain_values(p.M, phi * (1.0 - ff))
    return total / scenario.T


def exp_avg_gain(scenario: Scenario) -> ExperimentResult:
    """Average scheduled channel gain per subcarrier for the three scenarios."""
    freqs = subcarrier_frequencies(scenario.params)
    rows = []
    for label, sc in _three_scenarios(scenario):
        curve = _avg_gain_curve(sc)
        for j, f in enumerate(freqs):
            rows.append((label, float(f), float(curve[j])))
    manifest = _manifest("avg-gain", scenario.seed, {"scenario": scenario.to_dict()})
    return ExperimentResult("avg-gain", ["scenario", "f_hz", "avg_gain"],
                            rows, manifest)


def _theory_rho(scenario: Scenario) -> float:
    """Common cascaded path loss for analytic overlays (reference distance)."""
    link = link_common(scenario.params, pl_exp=scenario.pl_exp_bs_irs)
    ref = _geometry(scenario).reference_distance
    return link.rho1 * ref ** (-scenario.pl_exp_irs_ue)


def exp_se_vs_users(k_list: Sequence[int], scenario: Scenario,
                    workers: int = 1) -> ExperimentResult:
    """Spectral efficiency vs user count for the three scenarios.

    Adds a "theorem2-prediction" overlay row per K using the closed-form
    rate with the common reference-distance path loss.
    """
    if not k_list:
        raise ConfigError("K list must be non-empty")
    p = scenario.params
    rho = _theory_rho(scenario)
    rows = []
    for ki, k_users in enumerate(k_list):
        for label, sc in _three_scenarios(scenario.replace(K=int(k_users))):
            res = run_campaign(sc.replace(seed=derived_seed(scenario.seed,
                                                            EXP_SE_VS_USERS, ki)),
                               workers=workers)
            rows.append((label, int(k_users), res.se, res.se_stderr))
        if k_users >= 2:
            pred = predicted_throughput(int(k_users), p.M, p.N, p.W, rho,
                                        p.G_tx, p.G_rx, p.P, p.sigma2) / p.W
            rows.append(("theorem2-prediction", int(k_users), float(pred), 0.0))
    manifest = _manifest("se-vs-users", scenario.seed, {
        "k_list": [int(k) for k in k_list], "scenario": scenario.to_dict(),
        "theory_rho": rho,
    })
    return ExperimentResult("se-vs-users", ["scenario", "K", "se_bps_hz", "stderr"],
                            rows, manifest)


def exp_se_vs_elements(m_list: Sequence[int], scenario: Scenario,
                       workers: int = 1) -> ExperimentResult:
    """Spectral efficiency vs IRS element count; slopes land in the manifest."""
    if not m_list:
        raise ConfigError("M list must be non-empty")
    rows = []
    for mi, m in enumerate(m_list):
        params = dataclasses.replace(scenario.params, M=int(m))
        base = scenario.replace(params=params,
                                seed=derived_seed(scenario.seed,
                                                  EXP_SE_VS_ELEMENTS, mi))
        for label, sc in _three_scenarios(base):
            res = run_campaign(sc, workers=workers)
            rows.append((label, int(m), res.se, res.se_stderr))
    manifest = _manifest("se-vs-elements", scenario.seed, {
        "m_list": [int(m) for m in m_list], "scenario": scenario.to_dict(),
    })
    result = ExperimentResult("se-vs-elements",
                              ["scenario", "M", "se_bps_hz", "stderr"],
                              rows, manifest)
    manifest["slopes"] = fitted_slopes(result)
    return result


def fitted_slopes(result: ExperimentResult, top_half: bool = True) -> dict:
    """Least-squares SE slope vs log2(M) per scenario label.

    With ``top_half`` only the largest-M half of the sweep enters the fit.
    """
    by_label = {}
    for label, m, se, _ in result.rows:
        by_label.setdefault(label, []).append((m, se))
    slopes = {}
    for label, pts in by_label.items():
        pts.sort()
        if len(pts) < 2:
            slopes[label] = float("nan")
            continue
        if top_half:
            # keep at least two points so the line fit stays determined
            pts = pts[min(len(pts) // 2, len(pts) - 2):]
        x = np.log2([m for m, _ in pts])
        y = np.array([se for _, se in pts])
        slopes[label] = float(np.polyfit(x, y, 1)[0])
    return slopes


def exp_theorem1(epsilon: float, k_grid: Sequence[int], scenario: Scenario,
                 trials: int, workers: int = 1) -> ExperimentResult:
    """Analytic success bound vs Monte Carlo estimate across a K grid."""
    p = scenario.params
    rows = []
    for ki, k_users in enumerate(k_grid):
        bound = success_probability_bound(epsilon, p.N, int(k_users), p.M, p.W, p.fc)
        sc = scenario.replace(K=int(k_users),
                              seed=derived_seed(scenario.seed, EXP_THEOREM1, ki))
        est = estimate_success_probability(epsilon, sc, trials, workers=workers)
        rows.append((int(k_users), bound, est.estimate, est.stderr))
    manifest = _manifest("theorem1", scenario.seed, {
        "epsilon": epsilon, "k_grid": [int(k) for k in k_grid],
        "trials": trials, "scenario": scenario.to_dict(),
    })
    return ExperimentResult("theorem1", ["K", "bound", "estimate", "stderr"],
                            rows, manifest)


def derived_seed(master: int, exp_id: int, index: int) -> int:
    """Stable per-(experiment, sweep-point) master seed."""
    ss = np.random.SeedSequence([int(master), int(exp_id), int(index)])
    return int(ss.generate_state(1, np.uint64)[0] >> 1)


def default_output_dir() -> str:
    return os.environ.get(OUTPUT_DIR_ENV, ".")
