"""Cascaded BS -> IRS -> UE frequency-domain channel.

Geometry, path loss, cascaded angles, product-normal fading, ULA steering
vectors and per-subcarrier responses.  Two angle modes are supported:

* "uniform"   - cascaded angles drawn i.i.d. from U[-1, 1] (the network-level
  distributional model the probabilistic analysis assumes); delays fixed at 0
  since the gain is delay-invariant.
* "geometric" - angles and delays computed from BS/IRS/UE positions with
  half-wavelength element spacing.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import kernels
from .irs import PhaseConfig

SPEED_OF_LIGHT = 299792458.0


@dataclass(frozen=True)
class SystemParams:
    """Carrier/bandwidth/grid/power/antenna constants for one scenario."""
    fc: float          # carrier frequency, Hz
    W: float           # bandwidth, Hz
    N: int             # subcarrier count
    M: int             # IRS element count
    d: float           # element spacing, m
    P: float           # total transmit power, W
    sigma2: float      # per-SC noise variance, W
    G_tx: float        # BS antenna gain, linear
    G_rx: float        # UE antenna gain, linear
    bs_pos: Tuple[float, float] = (0.0, 0.0)
    irs_pos: Tuple[float, float] = (0.0, 500.0)

    def __post_init__(self):
        if self.fc <= 0 or self.W <= 0:
            raise ValueError("fc and W must be positive")
        if self.W >= 2.0 * self.fc:
            raise ValueError("need W < 2 fc so 1 + f/fc > 0 across the band")
        if self.N < 1 or self.M < 1:
            raise ValueError("N and M must be >= 1")
        if self.P <= 0 or self.sigma2 <= 0:
            raise ValueError("P and sigma2 must be positive")

    @property
    def wavelength(self) -> float:
        return SPEED_OF_LIGHT / self.fc


@dataclass(frozen=True)
class UserTerminal:
    """One UE: geometry, path loss, cascaded angle and delay."""
    pos: Tuple[float, float]
    theta_rx: float    # physical AoD from IRS, rad
    phi_rx: float      # normalized AoD, d sin(theta)/lambda_c
    phi_c: float       # cascaded angle phi_tx - phi_rx
    rho2: float        # IRS->UE path loss, linear
    tau_c: float       # cascaded delay, s

    def __post_init__(self):
        if self.rho2 <= 0 or self.tau_c < 0:
            raise ValueError("need rho2 > 0 and tau_c >= 0")


@dataclass(frozen=True)
class LinkCommon:
    """BS -> IRS leg shared by all users."""
    chi: float         # physical AoA at the IRS, rad
    phi_tx: float      # normalized AoA
    rho1: float        # BS->IRS path loss, linear
    tau_tx: float      # BS->IRS delay, s

    def __post_init__(self):
        if self.rho1 <= 0 or self.tau_tx < 0:
            raise ValueError("need rho1 > 0 and tau_tx >= 0")


@dataclass(frozen=True)
class FadingDraw:
    """Complex gains of the two hops and their cascaded product."""
    alpha: complex
    beta: complex
    gamma_c: complex


@dataclass(frozen=True)
class UserGeometry:
    """Annular user drop around the IRS."""
    r_in: float
    r_out: float
    angle_mode: str = "uniform"       # "uniform" | "geometric"
    pl_exp: float = 4.0               # IRS->UE path-loss exponent
    equal_path_loss: bool = False     # force rho2 to the reference-distance value

    def __post_init__(self):
        if not 0.0 < self.r_in <= self.r_out:
            raise ValueError(f"invalid annulus radii ({self.r_in}, {self.r_out})")
        if self.angle_mode not in ("uniform", "geometric"):
            raise ValueError(f"unknown angle mode {self.angle_mode!r}")

    @property
    def reference_distance(self) -> float:
        return 0.5 * (self.r_in + self.r_out)


def subcarrier_frequency(n: int, params: SystemParams) -> float:
    """Baseband frequency of the n-th subcarrier, f_n = nW/N - W/2 - W/(2N)."""
    if not 1 <= n <= params.N:
        raise IndexError(f"subcarrier index {n} outside 1..{params.N}")
    return n * params.W / params.N - params.W / 2.0 - params.W / (2.0 * params.N)


def subcarrier_frequencies(params: SystemParams) -> np.ndarray:
    """All N baseband subcarrier frequencies as an array."""
    n = np.arange(1, params.N + 1, dtype=np.float64)
    return n * params.W / params.N - params.W / 2.0 - params.W / (2.0 * params.N)


def steering_vector(m: int, x: float) -> np.ndarray:
    """ULA steering vector a(x)_m = exp(-j 2 pi (m-1) x)."""
    if m < 1:
        raise ValueError("steering vector needs m >= 1")
    return np.exp(-2j * np.pi * np.arange(m) * x)


def link_common(params: SystemParams, pl_exp: float = 2.0) -> LinkCommon:
    """BS -> IRS leg from the configured positions (array along the x axis)."""
    dx = params.bs_pos[0] - params.irs_pos[0]
    dy = params.bs_pos[1] - params.irs_pos[1]
    dist = float(np.hypot(dx, dy))
    chi = float(np.arcsin(dx / dist))
    phi_tx = params.d * np.sin(chi) / params.wavelength
    return LinkCommon(chi=chi, phi_tx=float(phi_tx), rho1=dist ** (-pl_exp),
                      tau_tx=dist / SPEED_OF_LIGHT)


def sample_users(k_users: int, geometry: UserGeometry, rng: np.random.Generator,
                 params: Optional[SystemParams] = None, link: Optional[LinkCommon] = None):
    """Draw K users uniformly in area over the annulus around the IRS.

    Draw order (stable contract for reproducibility): radii, azimuths, then
    cascaded angles in uniform mode.  Geometric mode requires ``params`` and
    ``link`` to derive angles and delays from positions.
    """
    if k_users < 1:
        raise ValueError("need at least one user")
    g = geometry
    u = rng.random(k_users)
    r = np.sqrt(g.r_in ** 2 + u * (g.r_out ** 2 - g.r_in ** 2))
    az = rng.uniform(0.0, 2.0 * np.pi, k_users)
    if g.equal_path_loss:
        rho2 = np.full(k_users, g.reference_distance ** (-g.pl_exp))
    else:
        rho2 = r ** (-g.pl_exp)

    irs = params.irs_pos if params is not None else (0.0, 0.0)
    xs = irs[0] + r * np.cos(az)
    ys = irs[1] + r * np.sin(az)

    if g.angle_mode == "uniform":
        phi_c = rng.uniform(-1.0, 1.0, k_users)
        users = [
            UserTerminal(pos=(float(xs[i]), float(ys[i])),
                         theta_rx=0.0, phi_rx=0.0,
                         phi_c=float(phi_c[i]), rho2=float(rho2[i]), tau_c=0.0)
            for i in range(k_users)
        ]
    else:
        if params is None or link is None:
            raise ValueError("geometric mode requires params and link")
        sin_th = (xs - irs[0]) / r
        theta = np.arcsin(sin_th)
        phi_rx = params.d * sin_th / params.wavelength
        users = [
            UserTerminal(pos=(float(xs[i]), float(ys[i])),
                         theta_rx=float(theta[i]), phi_rx=float(phi_rx[i]),
                         phi_c=float(link.phi_tx - phi_rx[i]),
                         rho2=float(rho2[i]),
                         tau_c=float(link.tau_tx + r[i] / SPEED_OF_LIGHT))
            for i in range(k_users)
        ]
    return users


def _complex_normal(rng: np.random.Generator) -> complex:
    return complex(rng.normal(0.0, np.sqrt(0.5)), rng.normal(0.0, np.sqrt(0.5)))


def draw_fading(ue: UserTerminal, link: LinkCommon, params: SystemParams,
                rng: np.random.Generator, fading: bool = True) -> FadingDraw:
    """Per-slot cascaded gain gamma_c = alpha * beta.

    With ``fading`` off the normalized product gain has unit magnitude, which
    reproduces the deterministic-gain curves.
    """
    s1 = np.sqrt(link.rho1 * params.G_tx)
    s2 = np.sqrt(ue.rho2 * params.G_rx)
    if fading:
        a = _complex_normal(rng)
        b = _complex_normal(rng)
    else:
        a = 1.0 + 0.0j
        b = 1.0 + 0.0j
    alpha = s1 * a
    beta = s2 * b
    return FadingDraw(alpha=alpha, beta=beta, gamma_c=alpha * beta)


def channel_response(ue: UserTerminal, fading: FadingDraw, config: PhaseConfig,
                     f: float, params: SystemParams) -> complex:
    """Frequency response gamma_c theta^T a((1+f/fc) phi_c) e^{-j 2 pi f tau_c}.

    Computed by direct M-term summation regardless of config kind (the
    closed-form shortcut lives in channel_gain).
    """
    theta = config.theta(params.M)
    a = steering_vector(params.M, (1.0 + f / params.fc) * ue.phi_c)
    return fading.gamma_c * complex(theta @ a) * np.exp(-2j * np.pi * f * ue.tau_c)


def channel_gain(ue: UserTerminal, fading: FadingDraw, config: PhaseConfig,
                 f: float, params: SystemParams) -> float:
    """|gamma_c|^2 |theta^T a((1+f/fc) phi_c)|^2, delay-invariant."""
    g2 = abs(fading.gamma_c) ** 2
    if config.kind == "linear":
        delta = config.slope - (1.0 + f / params.fc) * ue.phi_c
        return g2 * float(kernels.dirichlet_gain_values(params.M, delta))
    theta = config.theta(params.M)
    a = steering_vector(params.M, (1.0 + f / params.fc) * ue.phi_c)
    return g2 * abs(complex(theta @ a)) ** 2
