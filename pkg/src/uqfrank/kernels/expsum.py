"""Exponential sums ``S(k) = sum_{D<=X} exp(2 pi i k f_D)`` in float64.

The phase ``k f_D mod 1`` is reduced exactly before any rounding: with
``t = k^2 D`` and ``m = isqrt(t)``, ``frac(k sqrt(D)) = (t - m^2)/(sqrt(t) + m)``,
which loses only a few ulps.  For ``f_D = (1 + sqrt(D))/2`` the phase is
``((k + m) mod 2)/2 + frac(k sqrt(D))/2``.  The per-term error stays below
``2^-47``, so callers add ``X * 2^-44`` to every modulus.
"""
import math

import numpy as np

from .._accel import njit

ERROR_PER_TERM = 2.0 ** -44


@njit(cache=True, nogil=True)
def _phase(k, D, half):
    t = k * k * D
    m = np.int64(math.sqrt(float(t)))
    while m * m > t:
        m -= 1
    while (m + 1) * (m + 1) <= t:
        m += 1
    fr = float(t - m * m) / (math.sqrt(float(t)) + float(m))
    if half:
        return 0.5 * ((k + m) % 2) + 0.5 * fr
    return fr


@njit(cache=True, nogil=True)
def expsum_moduli_numba(X, ks, half):
    out = np.empty(len(ks), np.float64)
    two_pi = 2.0 * math.pi
    for i in range(len(ks)):
        k = ks[i]
        # Kahan summation on both components
        re, ce, im, ci = 0.0, 0.0, 0.0, 0.0
        for D in range(1, X + 1):
            th = two_pi * _phase(k, D, half)
            y = math.cos(th) - ce
            t = re + y
            ce = (t - re) - y
            re = t
            y = math.sin(th) - ci
            t = im + y
            ci = (t - im) - y
            im = t
        out[i] = math.hypot(re, im)
    return out


def _phases_np(k, D, half):
    t = k * k * D
    m = np.floor(np.sqrt(t.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        m = np.where(m * m > t, m - 1, m)
        m = np.where((m + 1) * (m + 1) <= t, m + 1, m)
    fr = (t - m * m).astype(np.float64) / (np.sqrt(t.astype(np.float64)) + m)
    if half:
        return 0.5 * ((k + m) % 2) + 0.5 * fr
    return fr


def expsum_moduli_numpy(X, ks, half, block=1 << 16):
    out = np.empty(len(ks), np.float64)
    for i, k in enumerate(ks):
        re = im = 0.0
        for start in range(1, X + 1, block):
            D = np.arange(start, min(X, start + block - 1) + 1, dtype=np.int64)
            th = 2.0 * np.pi * _phases_np(np.int64(k), D, half)
            re += math.fsum(np.cos(th))
            im += math.fsum(np.sin(th))
        out[i] = math.hypot(re, im)
    return out
