"""Exact lattice-point enumeration kernels.

Both kernels walk the ellipsoid ``x^T G x <= nmax`` coordinate by coordinate
from the last one, using the fraction-free elimination data of ``G``:
``U[k, k] = Delta_{k+1}`` and ``U[k, j]`` (j > k) the pivot row of the k-th
Bareiss step, with ``Delta`` the leading principal minors (``Delta_0 = 1``).
If ``V_k`` is the scaled value of the tail form on ``x_k..x_{r-1}`` then

    Delta_{k+1} V_k = (Delta_{k+1} x_k + L_k)^2 + Delta_k V_{k+1},
    L_k = sum_{j>k} U[k, j] x_j,

and ``V_0 <= nmax`` forces ``(Delta_{k+1} x_k + L_k)^2 <= Delta_{k+1} (nmax Delta_k) - Delta_k V_{k+1}``.
Every quantity is an integer, so pruning is exact.  Callers guarantee the
magnitudes fit in int64.
"""
import math

import numpy as np

from .._accel import njit


@njit(cache=True, nogil=True)
def _isqrt64(n):
    s = np.int64(math.sqrt(float(n)))
    while s * s > n:
        s -= 1
    while (s + 1) * (s + 1) <= n:
        s += 1
    return s


@njit(cache=True, nogil=True)
def norm_counts_numba(U, delta, nmax):
    r = U.shape[0]
    counts = np.zeros(nmax + 1, np.int64)
    x = np.zeros(r, np.int64)
    V = np.zeros(r + 1, np.int64)
    hi = np.zeros(r, np.int64)
    Ls = np.zeros(r, np.int64)
    k = r - 1
    descend = True
    while True:
        if descend:
            L = np.int64(0)
            for j in range(k + 1, r):
                L += U[k, j] * x[j]
            R = delta[k + 1] * nmax * delta[k] - delta[k] * V[k + 1]
            dk1 = delta[k + 1]
            if R < 0:
                x[k] = 1
                hi[k] = 0
            else:
                s = _isqrt64(R)
                x[k] = -((s + L) // dk1) - 1
                hi[k] = (s - L) // dk1
            Ls[k] = L
            descend = False
        x[k] += 1
        if x[k] > hi[k]:
            k += 1
            if k == r:
                break
            continue
        t = delta[k + 1] * x[k] + Ls[k]
        V[k] = (t * t + delta[k] * V[k + 1]) // delta[k + 1]
        if k == 0:
            counts[V[0]] += 1
        else:
            k -= 1
            descend = True
    return counts


def _isqrt_np(R):
    s = np.floor(np.sqrt(R.astype(np.float64))).astype(np.int64)
    for _ in range(2):
        s = np.where(s * s > R, s - 1, s)
        s = np.where((s + 1) * (s + 1) <= R, s + 1, s)
    return s


def norm_counts_numpy(U, delta, nmax):
    """Breadth-first version: expands every surviving partial vector at once."""
    r = U.shape[0]
    xs = np.zeros((1, 0), np.int64)      # columns hold x_{k+1}..x_{r-1}
    V = np.zeros(1, np.int64)
    for k in range(r - 1, -1, -1):
        L = xs @ U[k, k + 1:] if xs.shape[1] else np.zeros(len(V), np.int64)
        dk, dk1 = delta[k], delta[k + 1]
        R = dk1 * nmax * dk - dk * V
        ok = R >= 0
        L, R, V, xs = L[ok], R[ok], V[ok], xs[ok]
        s = _isqrt_np(R)
        lo = -((s + L) // dk1)
        hi = (s - L) // dk1
        cnt = np.maximum(hi - lo + 1, 0)
        rep = np.repeat(np.arange(len(V)), cnt)
        starts = np.cumsum(cnt) - cnt
        offs = np.arange(int(cnt.sum()), dtype=np.int64) - np.repeat(starts, cnt)
        xk = lo[rep] + offs
        t = dk1 * xk + L[rep]
        V = (t * t + dk * V[rep]) // dk1
        xs = np.concatenate([xk[:, None], xs[rep]], axis=1)
    return np.bincount(V, minlength=nmax + 1)[: nmax + 1].astype(np.int64)


def norm_counts_python(U, delta, nmax):
    """Arbitrary-precision version of the same walk, for inputs beyond int64."""
    from math import isqrt

    r = len(U)
    counts = [0] * (nmax + 1)
    x = [0] * r

    def walk(k, Vnext):
        L = sum(U[k][j] * x[j] for j in range(k + 1, r))
        dk, dk1 = delta[k], delta[k + 1]
        R = dk1 * nmax * dk - dk * Vnext
        if R < 0:
            return
        s = isqrt(R)
        for xk in range(-((s + L) // dk1), (s - L) // dk1 + 1):
            x[k] = xk
            t = dk1 * xk + L
            Vk = (t * t + dk * Vnext) // dk1
            if k == 0:
                counts[Vk] += 1
            else:
                walk(k - 1, Vk)
        x[k] = 0

    walk(r - 1, 0)
    return counts
