"""Hot numeric kernels: Dirichlet array factors and per-slot gain matrices.

Every kernel exists in two functionally identical flavours: a numba
``@njit`` version and a pure-numpy fallback.  The fallback is selected when
numba is unavailable or when the environment variable
``BEAMSPLIT_OFDMA_NO_NUMBA`` is set to ``1``/``true``/``yes``.  Both
flavours stay importable (``*_np`` / ``*_nb``) so the benchmark and the
cross-check tests can compare them directly.
"""

import math
import os

import numpy as np

# |sin(pi*delta)| below this -> coherent limit M^2 (avoids 0/0 at integer delta)
_SIN_EPS = 1e-12


def _numba_enabled() -> bool:
    if os.environ.get("BEAMSPLIT_OFDMA_NO_NUMBA", "").lower() in ("1", "true", "yes"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_enabled()


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def dirichlet_gain_np(m: int, delta: np.ndarray) -> np.ndarray:
    """sin^2(pi*M*delta) / sin^2(pi*delta), elementwise, with the M^2 limit."""
    delta = np.asarray(delta, dtype=np.float64)
    s = np.sin(np.pi * delta)
    num = np.sin(np.pi * m * delta)
    out = np.empty_like(delta)
    small = np.abs(s) < _SIN_EPS
    safe = ~small
    ratio = np.divide(num, s, out=np.zeros_like(delta), where=safe)
    out[safe] = ratio[safe] ** 2
    out[small] = float(m) ** 2
    return out


def gain_matrix_np(m, slope, phi_c, amp2, ff):
    """K x N channel-gain matrix for a linear-slope IRS configuration.

    gain[k, n] = amp2[k] * D_M(slope - ff[n] * phi_c[k]) with D_M the
    Dirichlet array factor and ff[n] = 1 + f_n / fc.
    """
    delta = slope - ff[None, :] * phi_c[:, None]
    return amp2[:, None] * dirichlet_gain_np(m, delta)


def best_gain_per_sc_np(m, slope, phi_c, amp2, ff):
    """Per-subcarrier (max gain, argmax user index) over the K users."""
    g = gain_matrix_np(m, slope, phi_c, amp2, ff)
    idx = np.argmax(g, axis=0)
    best = g[idx, np.arange(g.shape[1])]
    return best, idx


def covers_all_subcarriers_np(m, slope, phi_c, ff, threshold) -> bool:
    """True when every subcarrier has a user whose array factor >= threshold."""
    delta = slope - ff[None, :] * phi_c[:, None]
    d = dirichlet_gain_np(m, delta)
    return bool(np.all(d.max(axis=0) >= threshold))


def covers_all_subcarriers_sinc_np(m, slope, phi_c, ff, threshold) -> bool:
    """Coverage check with the mainlobe approximation M^2 sinc^2(M delta)."""
    delta = slope - ff[None, :] * phi_c[:, None]
    d = float(m) ** 2 * np.sinc(m * delta) ** 2
    return bool(np.all(d.max(axis=0) >= threshold))


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

if NUMBA_ENABLED:
    from numba import njit

    @njit(cache=True, nogil=True)
    def _dirichlet_scalar(m, delta):
        s = math.sin(math.pi * delta)
        if abs(s) < _SIN_EPS:
            return float(m) * float(m)
        t = math.sin(math.pi * m * delta) / s
        return t * t

    @njit(cache=True, nogil=True)
    def dirichlet_gain_nb(m, delta):
        out = np.empty(delta.shape[0])
        for i in range(delta.shape[0]):
            out[i] = _dirichlet_scalar(m, delta[i])
        return out

    @njit(cache=True, nogil=True)
    def gain_matrix_nb(m, slope, phi_c, amp2, ff):
        k_users = phi_c.shape[0]
        n_sc = ff.shape[0]
        out = np.empty((k_users, n_sc))
        for k in range(k_users):
            for n in range(n_sc):
                out[k, n] = amp2[k] * _dirichlet_scalar(m, slope - ff[n] * phi_c[k])
        return out

    @njit(cache=True, nogil=True)
    def best_gain_per_sc_nb(m, slope, phi_c, amp2, ff):
        k_users = phi_c.shape[0]
        n_sc = ff.shape[0]
        best = np.empty(n_sc)
        idx = np.empty(n_sc, dtype=np.int64)
        for n in range(n_sc):
            b = -1.0
            bi = 0
            for k in range(k_users):
                g = amp2[k] * _dirichlet_scalar(m, slope - ff[n] * phi_c[k])
                if g > b:
                    b = g
                    bi = k
            best[n] = b
            idx[n] = bi
        return best, idx

    @njit(cache=True, nogil=True)
    def covers_all_subcarriers_nb(m, slope, phi_c, ff, threshold):
        k_users = phi_c.shape[0]
        n_sc = ff.shape[0]
        for n in range(n_sc):
            hit = False
            for k in range(k_users):
                if _dirichlet_scalar(m, slope - ff[n] * phi_c[k]) >= threshold:
                    hit = True
                    break
            if not hit:
                return False
        return True

    @njit(cache=True, nogil=True)
    def _sinc2_gain_scalar(m, delta):
        x = math.pi * m * delta
        if abs(x) < 1e-12:
            return m * m
        s = math.sin(x) / x
        return m * m * s * s

    @njit(cache=True, nogil=True)
    def covers_all_subcarriers_sinc_nb(m, slope, phi_c, ff, threshold):
        k_users = phi_c.shape[0]
        n_sc = ff.shape[0]
        for n in range(n_sc):
            hit = False
            for k in range(k_users):
                if _sinc2_gain_scalar(m, slope - ff[n] * phi_c[k]) >= threshold:
                    hit = True
                    break
            if not hit:
                return False
        return True

else:
    dirichlet_gain_nb = None
    gain_matrix_nb = None
    best_gain_per_sc_nb = None
    covers_all_subcarriers_nb = None
    covers_all_subcarriers_sinc_nb = None


# ---------------------------------------------------------------------------
# public dispatch
# ---------------------------------------------------------------------------

def _as_f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def dirichlet_gain_values(m, delta):
    """Dirichlet array factor on an array of offsets; preserves shape."""
    delta = np.asarray(delta, dtype=np.float64)
    shape = delta.shape
    flat = _as_f64(delta.ravel())
    if NUMBA_ENABLED:
        out = dirichlet_gain_nb(float(m), flat)
    else:
        out = dirichlet_gain_np(m, flat)
    return out.reshape(shape)


def gain_matrix(m, slope, phi_c, amp2, ff):
    phi_c, amp2, ff = _as_f64(phi_c), _as_f64(amp2), _as_f64(ff)
    if NUMBA_ENABLED:
        return gain_matrix_nb(float(m), float(slope), phi_c, amp2, ff)
    return gain_matrix_np(m, slope, phi_c, amp2, ff)


def best_gain_per_sc(m, slope, phi_c, amp2, ff):
    phi_c, amp2, ff = _as_f64(phi_c), _as_f64(amp2), _as_f64(ff)
    if NUMBA_ENABLED:
        return best_gain_per_sc_nb(float(m), float(slope), phi_c, amp2, ff)
    return best_gain_per_sc_np(m, slope, phi_c, amp2, ff)


def covers_all_subcarriers(m, slope, phi_c, ff, threshold, use_sinc=False):
    phi_c, ff = _as_f64(phi_c), _as_f64(ff)
    if NUMBA_ENABLED:
        fn = covers_all_subcarriers_sinc_nb if use_sinc else covers_all_subcarriers_nb
        return bool(fn(float(m), float(slope), phi_c, ff, float(threshold)))
    fn = covers_all_subcarriers_sinc_np if use_sinc else covers_all_subcarriers_np
    return fn(m, slope, phi_c, ff, threshold)
