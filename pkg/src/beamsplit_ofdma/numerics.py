"""Special functions and small numerical primitives.

Everything here is pure and stateless.  The modified Bessel function K1 is
implemented from scratch (ascending series for small arguments, asymptotic
expansion for large ones) so the package carries no special-function
dependency; it is validated against an independent quadrature oracle in the
test suite.
"""

import math

import numpy as np
from scipy import optimize

from . import kernels

_EULER_GAMMA = 0.5772156649015328606

# Crossover between the ascending series (cancellation grows ~ exp(2x) in
# units of eps) and the asymptotic expansion (optimal-truncation error
# ~ exp(-2x)).  Both are well below 1e-7 at x = 8.5.
_K1_SERIES_CUTOFF = 8.5

# l_K = (t ln K)^q fit constants for the inverse of the product-normal CDF
LK_FIT_T = 0.7498
LK_FIT_Q = 1.71


def sinc(x: float) -> float:
    """Normalized sinc sin(pi x)/(pi x), with sinc(0) = 1."""
    return float(np.sinc(x))


def dirichlet_gain(m: int, delta):
    """Squared magnitude of the M-term unit-phasor sum, sin^2(pi M d)/sin^2(pi d).

    Equals M^2 at integer ``delta`` (coherent sum) and lies in [0, M^2]
    everywhere.  Accepts a scalar or an array of offsets.
    """
    if m < 1:
        raise ValueError(f"element count must be >= 1, got {m}")
    out = kernels.dirichlet_gain_values(m, delta)
    if np.isscalar(delta) or np.ndim(delta) == 0:
        return float(out)
    return out


def _k1_series(x: float) -> float:
    # K1(x) = ln(x/2) I1(x) + 1/x - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
    # with q = x^2/4; both sums share the term q^k/(k!(k+1)!).
    q = x * x / 4.0
    term = 1.0
    i1_sum = term
    psi_a = -_EULER_GAMMA        # psi(1)
    psi_b = 1.0 - _EULER_GAMMA   # psi(2)
    s_sum = (psi_a + psi_b) * term
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + 1))
        psi_a += 1.0 / k
        psi_b += 1.0 / (k + 1)
        i1_sum += term
        s_sum += (psi_a + psi_b) * term
        if term * (abs(psi_a + psi_b) + 1.0) < 1e-18 * (abs(s_sum) + i1_sum):
            break
    i1 = (x / 2.0) * i1_sum
    return math.log(x / 2.0) * i1 + 1.0 / x - (x / 4.0) * s_sum


def _k1_asymptotic(x: float) -> float:
    # K1(x) ~ sqrt(pi/2x) e^-x [1 + (mu-1)/(8x) + ...], mu = 4
    mu = 4.0
    term = 1.0
    total = 1.0
    prev = 1.0
    k = 0
    while True:
        k += 1
        term *= (mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * x)
        if abs(term) >= prev:
            break  # past optimal truncation
        total += term
        prev = abs(term)
        if abs(term) < 1e-18 * abs(total):
            break
    return math.sqrt(math.pi / (2.0 * x)) * math.exp(-x) * total


def bessel_k1(x: float) -> float:
    """Modified Bessel function of the second kind, order one."""
    if x <= 0.0:
        raise ValueError(f"bessel_k1 requires x > 0, got {x}")
    if x < _K1_SERIES_CUTOFF:
        return _k1_series(x)
    return _k1_asymptotic(x)


def product_normal_cdf(z: float) -> float:
    """CDF of |x*y|^2 for independent standard complex normals x, y.

    F(z) = 1 - 2 sqrt(z) K1(2 sqrt(z)), clamped to [0, 1].
    """
    if z < 0.0:
        raise ValueError(f"product_normal_cdf requires z >= 0, got {z}")
    if z == 0.0:
        return 0.0
    x = 2.0 * math.sqrt(z)
    if x > 700.0:  # 2 sqrt(z) K1 underflows well before this
        return 1.0
    val = 1.0 - x * bessel_k1(x)
    return min(1.0, max(0.0, val))


def product_normal_quantile(p: float) -> float:
    """Inverse of product_normal_cdf on [0, 1) via bracketed root finding."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"quantile requires 0 <= p < 1, got {p}")
    if p == 0.0:
        return 0.0
    hi = 1.0
    while product_normal_cdf(hi) < p:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError("quantile bracket expansion failed")
    return float(optimize.brentq(lambda z: product_normal_cdf(z) - p,
                                 0.0, hi, xtol=1e-14, rtol=8.9e-16, maxiter=200))


def lk_approximation(k_users) -> float:
    """Fitted growth rate (t ln K)^q of the maximum of K product-normal draws."""
    if k_users < 2:
        raise ValueError(f"lk_approximation requires K >= 2, got {k_users}")
    return (LK_FIT_T * math.log(k_users)) ** LK_FIT_Q


class ProductNormalCdf:
    """Callable CDF of |x*y|^2 with its numeric inverse."""

    def __call__(self, z: float) -> float:
        return product_normal_cdf(z)

    def quantile(self, p: float) -> float:
        return product_normal_quantile(p)
