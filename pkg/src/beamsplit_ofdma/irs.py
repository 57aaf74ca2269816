"""IRS phase-shift configurations and the beam-split gain profile.

A configuration is either an explicit vector of element phases or a linear
generator phi_m = 2 pi (m-1) a.  Linear configs allow O(1) gain evaluation
through the closed-form Dirichlet array factor instead of an O(M) phasor
sum, which is what the Monte Carlo hot loops use.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .numerics import dirichlet_gain


@dataclass(frozen=True)
class PhaseConfig:
    """Unit-modulus IRS phase configuration.

    kind: "explicit" (stored phase vector) or "linear" (slope generator a,
    meaning phi_m = 2 pi (m-1) a).
    """
    kind: str
    phases: Optional[np.ndarray] = None
    slope: Optional[float] = None

    def __post_init__(self):
        if self.kind == "explicit":
            if self.phases is None:
                raise ValueError("explicit config requires a phase vector")
            object.__setattr__(self, "phases",
                               np.mod(np.asarray(self.phases, dtype=np.float64),
                                      2.0 * np.pi))
        elif self.kind == "linear":
            if self.slope is None:
                raise ValueError("linear config requires a slope")
        else:
            raise ValueError(f"unknown config kind {self.kind!r}")

    def explicit_phases(self, m: Optional[int] = None) -> np.ndarray:
        """Phase vector in [0, 2 pi); ``m`` is required for linear configs."""
        if self.kind == "explicit":
            return self.phases
        if m is None:
            raise ValueError("element count required to expand a linear config")
        return np.mod(2.0 * np.pi * np.arange(m) * self.slope, 2.0 * np.pi)

    def theta(self, m: Optional[int] = None) -> np.ndarray:
        """Complex unit-modulus element response vector."""
        return np.exp(1j * self.explicit_phases(m))


def optimal_phases(phi_c: float, f_n: float, params) -> PhaseConfig:
    """Config that beamforms at cascaded angle ``phi_c`` on frequency ``f_n``.

    The slope a = phi_c (1 + f_n/fc) attains the full M^2 array factor at
    (phi_c, f_n).
    """
    return PhaseConfig(kind="linear", slope=phi_c * (1.0 + f_n / params.fc))


def random_config(rng: np.random.Generator) -> PhaseConfig:
    """Opportunistic configuration with slope drawn uniformly from [-1, 1]."""
    return PhaseConfig(kind="linear", slope=float(rng.uniform(-1.0, 1.0)))


def beamsplit_gain_profile(phi_c, f_tuned, f_grid, m, fc, gamma2):
    """Exact and sinc-approximate gain across a frequency grid.

    The IRS is tuned to (phi_c, f_tuned); at frequency f the array-factor
    offset is delta = phi_c (f_tuned - f)/fc.  Returns (exact, approx) with
    exact = gamma2 * D_M(delta) and approx = gamma2 * M^2 sinc^2(M delta).
    """
    f_grid = np.asarray(f_grid, dtype=np.float64)
    delta = phi_c * (f_tuned - f_grid) / fc
    exact = gamma2 * dirichlet_gain(m, delta)
    approx = gamma2 * float(m) ** 2 * np.sinc(m * delta) ** 2
    return exact, approx
